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

#include <map>
#include <set>
#include <vector>

#include "brokershard/msst/shard_state_tree.hpp"

namespace brokershard {

/// Brokers and their per-shard available balance: the slice balance last
/// synchronized from the shard trees minus outstanding reservations.
class broker_directory {
public:
    broker_directory() = default;
    broker_directory(std::set<address> brokers, std::size_t shard_count);

    const std::set<address> &brokers() const noexcept { return _brokers; }
    bool is_broker(const address &a) const { return _brokers.contains(a); }
    bool empty() const noexcept { return _brokers.empty(); }
    std::size_t shard_count() const noexcept { return _shards; }

    void set_balance(const address &broker, shard_id shard, amount_t value);
    /// Refreshes every broker's balance in `tree.shard()`.
    void sync(const shard_state_tree &tree);

    amount_t available(const address &broker, shard_id shard) const;
    amount_t reserved(const address &broker, shard_id shard) const;

    void reserve(const digest &ctx, const address &broker, shard_id shard, amount_t value);
    /// Drops the reservation of `ctx`; no-op if none.
    void release(const digest &ctx);
    std::size_t outstanding() const noexcept { return _by_ctx.size(); }

private:
    struct reservation {
        address broker;
        shard_id shard;
        amount_t value;
    };

    std::set<address> _brokers;
    std::size_t _shards = 0;
    std::map<address, std::vector<amount_t>> _balance;
    std::map<address, std::vector<amount_t>> _reserved;
    std::map<digest, reservation> _by_ctx;
};

/// Broker with the largest available destination balance ≥ value; ties go to
/// the lowest address. Throws no_eligible_broker.
address select_broker(const broker_directory &dir, shard_id source, shard_id dest, amount_t value);

} // namespace brokershard
