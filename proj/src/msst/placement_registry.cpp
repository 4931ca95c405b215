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

#include "brokershard/msst/placement_registry.hpp"

#include "brokershard/common/error.hpp"

namespace brokershard {

const storage_map *placement_registry::find(const address &a) const
{
    const auto it = _maps.find(a);
    return it == _maps.end() ? nullptr : &it->second;
}

const storage_map &placement_registry::get_storage_map(const address &a) const
{
    if (const auto *m = find(a)) [[likely]]
        return *m;
    throw error(errc::unknown_account, a.hex());
}

shard_id placement_registry::home_of(const address &a) const
{
    const auto first = get_storage_map(a).first();
    if (!first)
        throw error(errc::unknown_account, a.hex() + " has an empty storage map");
    return *first;
}

void placement_registry::place(const address &a, shard_id home)
{
    _maps.insert_or_assign(a, storage_map::single(_shard_count, home));
}

void placement_registry::place_everywhere(const address &a)
{
    _maps.insert_or_assign(a, storage_map::all(_shard_count));
}

void placement_registry::set(const address &a, storage_map m)
{
    if (m.size() != _shard_count || m.count() == 0)
        throw error(errc::inconsistent_migration, "storage map for " + a.hex() + " must have " + std::to_string(_shard_count) + " bits, one set");
    _maps.insert_or_assign(a, std::move(m));
}

tx_class placement_registry::classify(const address &from, const address &to) const
{
    return classify_tx(get_storage_map(from), get_storage_map(to));
}

amount_t total_deposit(const address &a, const placement_registry &registry, std::span<const shard_state_tree> trees)
{
    amount_t sum = 0;
    for (auto s : registry.get_storage_map(a).shards())
        sum += trees[s].get(a).value;
    return sum;
}

} // namespace brokershard
