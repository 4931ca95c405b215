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

#include "brokershard/ledger/block.hpp"

namespace brokershard {

digest block_header::hash() const
{
    encoder e;
    e.u64(shard).u64(height).fixed(prev_hash).fixed(tx_root).fixed(state_root)
        .u64(static_cast<std::uint64_t>(produced_at)).u64(tx_count);
    return sha256(byte_span{e.buffer()});
}

std::vector<digest> tx_block::tx_digests() const
{
    std::vector<digest> out;
    out.reserve(txs.size());
    for (const auto &tx : txs)
        out.push_back(tx.id());
    return out;
}

digest compute_tx_root(std::span<const transaction> txs)
{
    if (txs.empty())
        return empty_root();
    std::vector<digest> leaves;
    leaves.reserve(txs.size());
    for (const auto &tx : txs)
        leaves.push_back(tx.id());
    return merkle_root(leaves);
}

tx_block seal_block(shard_id shard, height_t height, const digest &prev_hash, std::vector<transaction> txs,
                    const digest &state_root, sim_time produced_at)
{
    tx_block b;
    b.header.shard = shard;
    b.header.height = height;
    b.header.prev_hash = prev_hash;
    b.header.tx_root = compute_tx_root(txs);
    b.header.state_root = state_root;
    b.header.produced_at = produced_at;
    b.header.tx_count = static_cast<std::uint32_t>(txs.size());
    b.txs = std::move(txs);
    return b;
}

} // namespace brokershard
