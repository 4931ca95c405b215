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

#include <optional>
#include <vector>

#include "brokershard/ledger/types.hpp"

namespace brokershard {

/// Storage map Ψ: bit i set iff a slice of the account's state lives in shard i.
class storage_map {
public:
    storage_map() = default;
    explicit storage_map(std::size_t shard_count) : _bits(shard_count, false) {}

    static storage_map single(std::size_t shard_count, shard_id home);
    static storage_map all(std::size_t shard_count);

    std::size_t size() const noexcept { return _bits.size(); }
    bool test(shard_id s) const { return s < _bits.size() && _bits[s]; }
    void set(shard_id s, bool on = true) { _bits.at(s) = on; }
    std::size_t count() const noexcept;
    std::optional<shard_id> first() const noexcept;
    std::vector<shard_id> shards() const;
    std::string to_string() const;

    bool operator==(const storage_map &) const = default;

private:
    std::vector<bool> _bits;
};

} // namespace brokershard
