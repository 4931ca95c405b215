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

#include <span>
#include <unordered_map>

#include "brokershard/ledger/classify.hpp"
#include "brokershard/msst/shard_state_tree.hpp"

namespace brokershard {

/// Global Ψ for every known account; O(1) expected lookup.
class placement_registry {
public:
    explicit placement_registry(std::size_t shard_count = 1) : _shard_count{shard_count} {}

    std::size_t shard_count() const noexcept { return _shard_count; }
    std::size_t size() const noexcept { return _maps.size(); }

    bool known(const address &a) const { return _maps.contains(a); }
    /// Throws unknown_account.
    const storage_map &get_storage_map(const address &a) const;
    const storage_map *find(const address &a) const;
    /// Lowest shard holding the account.
    shard_id home_of(const address &a) const;
    bool is_segmented(const address &a) const { return get_storage_map(a).count() > 1; }

    void place(const address &a, shard_id home);
    void place_everywhere(const address &a);
    void set(const address &a, storage_map m);

    tx_class classify(const address &from, const address &to) const;

private:
    std::size_t _shard_count;
    std::unordered_map<address, storage_map, fixed_bytes_hash> _maps;
};

/// Σ ω over the shards whose Ψ bit is set; touches exactly ξ trees.
amount_t total_deposit(const address &a, const placement_registry &registry, std::span<const shard_state_tree> trees);

} // namespace brokershard
