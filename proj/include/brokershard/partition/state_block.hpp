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

#include "brokershard/msst/shard_state_tree.hpp"
#include "brokershard/partition/partitioner.hpp"

namespace brokershard {

struct migration {
    address addr;
    shard_id from = 0;
    shard_id to = 0;
    /// η, ω, ζ of the slice as it left `from`.
    account_state carried;

    encoder encode() const;
    bool operator==(const migration &) const = default;
};

struct state_block_header {
    digest prev_state_block_hash;
    std::uint64_t epoch = 0;
    std::vector<digest> final_tx_block_hashes;
    digest global_state_root;
    digest state_updating_root;

    digest hash() const;
};

struct state_block {
    state_block_header header;
    std::vector<std::pair<address, shard_id>> placements;
    std::vector<migration> migrations;
    segmentation_plan segments;
};

/// Merkle root over placement and segmentation encodings; empty_root() if none.
digest placements_root(const std::vector<std::pair<address, shard_id>> &placements, const segmentation_plan &segments);
/// Merkle root over migration encodings; empty_root() if none.
digest migrations_root(std::span<const migration> migrations);

/// Migrations are the accounts whose placement differs from `prev_placement`;
/// their carried state is read from `trees[old shard]`. Accounts missing from
/// `prev_placement` are new and carry nothing.
state_block build_state_block(const partition_map &partition, const segmentation_plan &segmentation,
                              const state_block *prev, std::span<const digest> final_block_hashes,
                              const std::map<address, shard_id> &prev_placement,
                              std::span<const shard_state_tree> trees);
/// Same, reading carried state through pointers to the live trees.
state_block build_state_block(const partition_map &partition, const segmentation_plan &segmentation,
                              const state_block *prev, std::span<const digest> final_block_hashes,
                              const std::map<address, shard_id> &prev_placement,
                              std::span<const shard_state_tree *const> trees);

} // namespace brokershard
