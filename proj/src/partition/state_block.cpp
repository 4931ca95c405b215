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

#include "brokershard/partition/state_block.hpp"

#include "brokershard/common/error.hpp"

namespace brokershard {

encoder migration::encode() const
{
    encoder e;
    e.fixed(addr).u64(from).u64(to).nested(carried.encode());
    return e;
}

digest state_block_header::hash() const
{
    encoder e;
    e.fixed(prev_state_block_hash).u64(epoch).u64(final_tx_block_hashes.size());
    for (const auto &h : final_tx_block_hashes)
        e.fixed(h);
    e.fixed(global_state_root).fixed(state_updating_root);
    return sha256(byte_span{e.buffer()});
}

digest placements_root(const std::vector<std::pair<address, shard_id>> &placements, const segmentation_plan &segments)
{
    std::vector<digest> leaves;
    leaves.reserve(placements.size() + segments.size());
    for (const auto &[a, s] : placements) {
        encoder e;
        e.u8(0).fixed(a).u64(s);
        leaves.push_back(sha256(byte_span{e.buffer()}));
    }
    for (const auto &[a, slices] : segments) {
        encoder e;
        e.u8(1).fixed(a).u64(slices.size());
        for (auto v : slices)
            e.amount(v);
        leaves.push_back(sha256(byte_span{e.buffer()}));
    }
    return leaves.empty() ? empty_root() : merkle_root(leaves);
}

digest migrations_root(std::span<const migration> migrations)
{
    if (migrations.empty())
        return empty_root();
    std::vector<digest> leaves;
    leaves.reserve(migrations.size());
    for (const auto &m : migrations)
        leaves.push_back(sha256(byte_span{m.encode().buffer()}));
    return merkle_root(leaves);
}

state_block build_state_block(const partition_map &partition, const segmentation_plan &segmentation,
                              const state_block *prev, std::span<const digest> final_block_hashes,
                              const std::map<address, shard_id> &prev_placement,
                              std::span<const shard_state_tree *const> trees)
{
    if (final_block_hashes.size() != trees.size())
        throw error(errc::config_invalid, "expected " + std::to_string(trees.size()) + " final block hashes, got "
                                              + std::to_string(final_block_hashes.size()));
    state_block blk;
    blk.header.prev_state_block_hash = prev ? prev->header.hash() : digest{};
    blk.header.epoch = partition.epoch;
    blk.header.final_tx_block_hashes.assign(final_block_hashes.begin(), final_block_hashes.end());
    blk.segments = segmentation;
    for (const auto &[a, to] : partition.assignment) {
        blk.placements.emplace_back(a, to);
        const auto old = prev_placement.find(a);
        if (old == prev_placement.end() || old->second == to)
            continue;
        blk.migrations.push_back(migration{a, old->second, to, trees[old->second]->get(a)});
    }
    blk.header.global_state_root = placements_root(blk.placements, blk.segments);
    blk.header.state_updating_root = migrations_root(blk.migrations);
    return blk;
}

state_block build_state_block(const partition_map &partition, const segmentation_plan &segmentation,
                              const state_block *prev, std::span<const digest> final_block_hashes,
                              const std::map<address, shard_id> &prev_placement,
                              std::span<const shard_state_tree> trees)
{
    std::vector<const shard_state_tree *> ptrs;
    for (const auto &t : trees)
        ptrs.push_back(&t);
    return build_state_block(partition, segmentation, prev, final_block_hashes, prev_placement,
                             std::span<const shard_state_tree *const>{ptrs});
}

} // namespace brokershard
