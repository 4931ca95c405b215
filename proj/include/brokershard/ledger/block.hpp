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

#include <vector>

#include "brokershard/ledger/transaction.hpp"

namespace brokershard {

struct block_header {
    shard_id shard = 0;
    height_t height = 0;
    digest prev_hash;
    digest tx_root;
    digest state_root;
    sim_time produced_at = 0;
    std::uint32_t tx_count = 0;

    digest hash() const;
};

struct tx_block {
    block_header header;
    std::vector<transaction> txs;

    shard_id shard() const noexcept { return header.shard; }
    height_t height() const noexcept { return header.height; }
    digest hash() const { return header.hash(); }
    std::vector<digest> tx_digests() const;
};

/// Merkle root over the block's transaction digests (empty_root() for no TXs).
digest compute_tx_root(std::span<const transaction> txs);

/// Seals a block: fills tx_root, tx_count and links it to its parent header.
tx_block seal_block(shard_id shard, height_t height, const digest &prev_hash, std::vector<transaction> txs,
                    const digest &state_root, sim_time produced_at);

} // namespace brokershard
