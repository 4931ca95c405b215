// Copyright 2026 The BrokerShard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace brokershard {

/// Token amount in indivisible units. 128 bits so that conservation sums over
/// large genesis stakes never wrap.
using amount_t = unsigned __int128;
using shard_id = std::uint32_t;
using height_t = std::uint64_t;
using nonce_t = std::uint64_t;
/// Simulation time in nanoseconds.
using sim_time = std::int64_t;

using bytes = std::vector<std::uint8_t>;
using byte_span = std::span<const std::uint8_t>;

inline constexpr sim_time ns_per_ms = 1'000'000;
inline constexpr sim_time ns_per_s = 1'000'000'000;

constexpr double to_ms(sim_time t) noexcept { return static_cast<double>(t) / ns_per_ms; }
constexpr double to_seconds(sim_time t) noexcept { return static_cast<double>(t) / ns_per_s; }

std::string to_string(amount_t v);
amount_t parse_amount(std::string_view s);

std::string to_hex(byte_span data);
/// Accepts an optional 0x prefix. Throws parse_error on odd length or non-hex chars.
bytes from_hex(std::string_view hex);

template<std::size_t N>
struct fixed_bytes {
    static constexpr std::size_t size() noexcept { return N; }

    std::array<std::uint8_t, N> data{};

    auto operator<=>(const fixed_bytes &) const = default;
    bool operator==(const fixed_bytes &) const = default;

    byte_span span() const noexcept { return {data.data(), data.size()}; }
    std::string hex() const { return to_hex(span()); }
    bool is_zero() const noexcept
    {
        for (auto b : data)
            if (b != 0)
                return false;
        return true;
    }
};

struct digest : fixed_bytes<32> {
    static digest from_hex(std::string_view hex);
};

struct address : fixed_bytes<20> {
    /// Left-pads short hex strings with zeros; rejects strings longer than 20 bytes.
    static address from_hex(std::string_view hex);
    /// Deterministic address for synthetic workloads and tests.
    static address from_label(std::string_view label);
};

struct fixed_bytes_hash {
    template<std::size_t N>
    std::size_t operator()(const fixed_bytes<N> &v) const noexcept
    {
        std::size_t h = 0;
        for (std::size_t i = 0; i < sizeof(std::size_t) && i < N; ++i)
            h = (h << 8) | v.data[i];
        return h;
    }
};

} // namespace brokershard
