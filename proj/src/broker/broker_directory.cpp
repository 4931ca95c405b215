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

#include "brokershard/broker/broker_directory.hpp"

#include "brokershard/common/error.hpp"

namespace brokershard {

broker_directory::broker_directory(std::set<address> brokers, std::size_t shard_count)
    : _brokers{std::move(brokers)}, _shards{shard_count}
{
    for (const auto &b : _brokers) {
        _balance.emplace(b, std::vector<amount_t>(shard_count, 0));
        _reserved.emplace(b, std::vector<amount_t>(shard_count, 0));
    }
}

void broker_directory::set_balance(const address &broker, shard_id shard, amount_t value)
{
    _balance.at(broker).at(shard) = value;
}

void broker_directory::sync(const shard_state_tree &tree)
{
    for (const auto &b : _brokers)
        if (const auto *st = tree.find(b))
            _balance[b].at(tree.shard()) = st->value;
}

amount_t broker_directory::available(const address &broker, shard_id shard) const
{
    const auto bal = _balance.at(broker).at(shard);
    const auto res = _reserved.at(broker).at(shard);
    return bal > res ? bal - res : 0;
}

amount_t broker_directory::reserved(const address &broker, shard_id shard) const
{
    return _reserved.at(broker).at(shard);
}

void broker_directory::reserve(const digest &ctx, const address &broker, shard_id shard, amount_t value)
{
    if (available(broker, shard) < value)
        throw error(errc::insufficient_broker_balance, broker.hex() + " in shard " + std::to_string(shard));
    if (!_by_ctx.emplace(ctx, reservation{broker, shard, value}).second)
        throw error(errc::duplicate, "ctx " + ctx.hex() + " already reserved");
    _reserved[broker][shard] += value;
}

void broker_directory::release(const digest &ctx)
{
    const auto it = _by_ctx.find(ctx);
    if (it == _by_ctx.end())
        return;
    _reserved[it->second.broker][it->second.shard] -= it->second.value;
    _by_ctx.erase(it);
}

address select_broker(const broker_directory &dir, shard_id, shard_id dest, amount_t value)
{
    if (dir.empty())
        throw error(errc::no_eligible_broker, "no brokers configured");
    const address *best = nullptr;
    amount_t best_avail = 0;
    for (const auto &b : dir.brokers()) {
        const auto avail = dir.available(b, dest);
        if (avail < value)
            continue;
        if (!best || avail > best_avail) {
            best = &b;
            best_avail = avail;
        }
    }
    if (!best)
        throw error(errc::no_eligible_broker, "no broker holds " + to_string(value) + " in shard "
                                                  + std::to_string(dest));
    return *best;
}

} // namespace brokershard
