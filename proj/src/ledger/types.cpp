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

#include "brokershard/ledger/types.hpp"

#include <algorithm>

#include "brokershard/common/error.hpp"
#include "brokershard/ledger/crypto.hpp"

namespace brokershard {

std::string to_string(amount_t v)
{
    if (v == 0)
        return "0";
    std::string out;
    while (v != 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

amount_t parse_amount(std::string_view s)
{
    if (s.empty())
        throw error(errc::parse_error, "empty amount");
    constexpr amount_t max = ~amount_t{0};
    amount_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9')
            throw error(errc::parse_error, "invalid amount: " + std::string(s));
        const auto d = static_cast<unsigned>(c - '0');
        if (v > (max - d) / 10)
            throw error(errc::parse_error, "amount overflow: " + std::string(s));
        v = v * 10 + d;
    }
    return v;
}

std::string to_hex(byte_span data)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (auto b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

namespace {
    int hex_value(char c)
    {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        if (c >= 'A' && c <= 'F')
            return c - 'A' + 10;
        return -1;
    }

    std::string_view strip_prefix(std::string_view hex)
    {
        if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X'))
            hex.remove_prefix(2);
        return hex;
    }
} // namespace

bytes from_hex(std::string_view hex)
{
    hex = strip_prefix(hex);
    if (hex.size() % 2 != 0)
        throw error(errc::parse_error, "odd-length hex string");
    bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = hex_value(hex[2 * i]);
        const int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw error(errc::parse_error, "invalid hex character");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

digest digest::from_hex(std::string_view hex)
{
    const auto raw = brokershard::from_hex(hex);
    if (raw.size() != size())
        throw error(errc::parse_error, "digest must be 32 bytes");
    digest d;
    std::copy(raw.begin(), raw.end(), d.data.begin());
    return d;
}

address address::from_hex(std::string_view hex)
{
    hex = strip_prefix(hex);
    std::string padded(hex);
    if (padded.size() % 2 != 0)
        padded.insert(padded.begin(), '0');
    const auto raw = brokershard::from_hex(padded);
    if (raw.size() > size())
        throw error(errc::parse_error, "address longer than 20 bytes");
    address a;
    std::copy(raw.begin(), raw.end(), a.data.begin() + static_cast<std::ptrdiff_t>(size() - raw.size()));
    return a;
}

address address::from_label(std::string_view label)
{
    const auto d = sha256(label);
    address a;
    std::copy_n(d.data.begin(), a.size(), a.data.begin());
    return a;
}

} // namespace brokershard
