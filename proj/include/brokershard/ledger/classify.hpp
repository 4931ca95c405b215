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

#include <concepts>
#include <variant>

#include "brokershard/common/error.hpp"
#include "brokershard/ledger/storage_map.hpp"

namespace brokershard {

struct intra_shard {
    shard_id shard;
    bool operator==(const intra_shard &) const = default;
};

struct cross_shard {
    shard_id source;
    shard_id dest;
    bool operator==(const cross_shard &) const = default;
};

using tx_class = std::variant<intra_shard, cross_shard>;

inline bool is_cross(const tx_class &c) noexcept { return std::holds_alternative<cross_shard>(c); }

/// Intra iff payer and payee share a shard (lowest shared index wins);
/// otherwise Cross(payer's first shard, payee's first shard).
tx_class classify_tx(const storage_map &from, const storage_map &to);

template<typename Lookup>
    requires std::invocable<Lookup, const address &>
tx_class classify_tx(const address &from, const address &to, Lookup &&placement)
{
    const storage_map *from_map = placement(from);
    const storage_map *to_map = placement(to);
    if (from_map == nullptr || from_map->count() == 0)
        throw error(errc::unknown_account, from.hex());
    if (to_map == nullptr || to_map->count() == 0)
        throw error(errc::unknown_account, to.hex());
    return classify_tx(*from_map, *to_map);
}

} // namespace brokershard
