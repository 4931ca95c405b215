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
#include <deque>
#include <functional>
#include <unordered_set>

#include "brokershard/ledger/transaction.hpp"

namespace brokershard {

struct pool_entry {
    transaction tx;
    digest id;
    sim_time admitted_at = 0;
};

/// FIFO within three priority classes: failure proofs, then protocol halves
/// and relays, then plain transfers. Digests are unique among pooled entries.
class tx_pool {
public:
    enum class priority : std::uint8_t { proof = 0, protocol = 1, plain = 2 };
    static priority class_of(const transaction &tx) noexcept;

    /// Throws duplicate if a transaction with the same digest is pooled.
    void submit(transaction tx, sim_time now);
    bool contains(const digest &id) const { return _ids.contains(id); }
    std::size_t size() const noexcept { return _ids.size(); }
    bool empty() const noexcept { return _ids.empty(); }

    /// Removes and returns the head of the highest non-empty class.
    std::optional<pool_entry> pop();
    /// Up to `capacity` entries in priority then FIFO order.
    std::vector<pool_entry> drain(std::size_t capacity);
    /// Removes and returns every entry matching `pred`, preserving order of the rest.
    std::vector<pool_entry> extract_if(const std::function<bool(const pool_entry &)> &pred);

private:
    std::array<std::deque<pool_entry>, 3> _queues;
    std::unordered_set<digest, fixed_bytes_hash> _ids;
};

} // namespace brokershard
