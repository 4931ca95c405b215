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

#include "brokershard/shard/tx_pool.hpp"

#include "brokershard/common/error.hpp"

namespace brokershard {

tx_pool::priority tx_pool::class_of(const transaction &tx) noexcept
{
    switch (tx.kind) {
    case tx_kind::failure_proof: return priority::proof;
    case tx_kind::theta1:
    case tx_kind::theta2:
    case tx_kind::relay: return priority::protocol;
    case tx_kind::plain: return priority::plain;
    }
    return priority::plain;
}

void tx_pool::submit(transaction tx, sim_time now)
{
    auto id = tx.id();
    if (!_ids.insert(id).second)
        throw error(errc::duplicate, "transaction " + id.hex() + " already pooled");
    const auto cls = static_cast<std::size_t>(class_of(tx));
    _queues[cls].push_back(pool_entry{std::move(tx), id, now});
}

std::optional<pool_entry> tx_pool::pop()
{
    for (auto &q : _queues) {
        if (q.empty())
            continue;
        auto e = std::move(q.front());
        q.pop_front();
        _ids.erase(e.id);
        return e;
    }
    return std::nullopt;
}

std::vector<pool_entry> tx_pool::drain(std::size_t capacity)
{
    std::vector<pool_entry> out;
    while (out.size() < capacity) {
        auto e = pop();
        if (!e)
            break;
        out.push_back(std::move(*e));
    }
    return out;
}

std::vector<pool_entry> tx_pool::extract_if(const std::function<bool(const pool_entry &)> &pred)
{
    std::vector<pool_entry> out;
    for (auto &q : _queues) {
        std::deque<pool_entry> keep;
        for (auto &e : q) {
            if (pred(e)) {
                _ids.erase(e.id);
                out.push_back(std::move(e));
            } else {
                keep.push_back(std::move(e));
            }
        }
        q = std::move(keep);
    }
    return out;
}

} // namespace brokershard
