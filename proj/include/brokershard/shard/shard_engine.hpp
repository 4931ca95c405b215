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

#include <iosfwd>
#include <map>
#include <set>

#include "brokershard/broker/protocol.hpp"
#include "brokershard/partition/state_block.hpp"
#include "brokershard/shard/tx_pool.hpp"

namespace brokershard {

struct engine_config {
    sim_time block_interval = 8 * ns_per_s;
    std::size_t capacity = 2000;
};

enum class receipt_kind : std::uint8_t { theta1_locked, theta2_confirmed, refunded };

/// CTX outcome announced alongside a block header.
struct ctx_receipt {
    digest ctx;
    receipt_kind kind;
    /// Shard that acts on the receipt: the source for theta2_confirmed, the
    /// destination for refunded, the block's own shard for theta1_locked.
    shard_id counterpart = 0;
    bool operator==(const ctx_receipt &) const = default;
};

struct header_gossip {
    block_header header;
    std::vector<ctx_receipt> receipts;
};

/// Destination-side view of a CTX, installed from the Θ1 copy.
struct watch_entry {
    half_tx theta1;
    shard_id source = 0;
    height_t deadline = 0;
    std::optional<height_t> included_at;
    std::optional<failure_proof> proof;
};

struct skipped_tx {
    transaction tx;
    errc reason;
};

struct admission {
    bool admitted = true;
    errc reason = errc::validation_failed;
};

struct block_report {
    tx_block block;
    std::vector<skipped_tx> skipped;
    /// Locks released to their broker in this block.
    std::vector<std::pair<digest, amount_t>> released;
    /// CTXs whose failure path started in this block.
    std::vector<digest> failures_detected;
    /// Failure proofs to deliver to source shards (new and re-sent).
    std::vector<failure_proof> proofs;
    /// Credits to forward to accounts that no longer live here.
    std::vector<transaction> forwards;
    std::vector<ctx_receipt> receipts;
    std::size_t pool_after = 0;
};

/// One M-shard: pool, chain, mSST and its view of the other shards' headers.
class shard_engine {
public:
    /// Seals the height-0 block over `genesis` at time `at`.
    shard_engine(shard_id shard, std::size_t shard_count, engine_config cfg, shard_state_tree genesis, sim_time at = 0);

    shard_id shard() const noexcept { return _shard; }
    const engine_config &config() const noexcept { return _cfg; }
    const shard_state_tree &tree() const noexcept { return _tree; }
    shard_state_tree &mutable_tree() noexcept { return _tree; }
    const tx_pool &pool() const noexcept { return _pool; }
    const std::vector<tx_block> &chain() const noexcept { return _chain; }
    height_t height() const noexcept { return _chain.back().header.height; }

    /// Kind-specific validation followed by pool admission.
    admission submit_tx(transaction tx, sim_time now);

    /// Drains the pool in priority order until `capacity` transactions apply;
    /// invalid ones are skipped. Also releases expired successful locks,
    /// starts the failure path for overdue CTXs and re-sends failure proofs.
    block_report produce_block(sim_time now);
    /// Replays a block produced elsewhere under this engine's context.
    /// Throws height_gap on a non-contiguous height or prev-hash mismatch and
    /// validation_failed if any transaction does not apply.
    void apply_block(const tx_block &block);

    void receive_header(const header_gossip &g);
    height_t known_height(shard_id s) const;
    const block_header *known_header(shard_id s, height_t h) const;

    void watch(const half_tx &theta1, shard_id source);
    const std::map<digest, watch_entry> &watched() const noexcept { return _watch; }

    /// Phase 4: verifies the migration root and moves slices in or out.
    /// Throws inconsistent_migration.
    void reconfigure_state(const state_block &blk);
    /// Pool entries that can no longer apply here after a placement change.
    std::vector<pool_entry> extract_misplaced();
    std::vector<pool_entry> extract_all() { return _pool.extract_if([](const pool_entry &) { return true; }); }

    /// CSV header for `write_block_log`.
    static void write_block_log_header(std::ostream &os);
    static void write_block_log(std::ostream &os, const block_report &r);

private:
    void apply_tx(const transaction &tx, height_t h, block_report &report);
    void check_admission(const transaction &tx) const;

    shard_id _shard;
    std::size_t _shard_count;
    engine_config _cfg;
    shard_state_tree _tree;
    tx_pool _pool;
    std::vector<tx_block> _chain;
    std::vector<std::map<height_t, block_header>> _headers;
    std::vector<height_t> _latest;
    std::map<digest, watch_entry> _watch;
    std::set<digest> _succeeded;
};

} // namespace brokershard
