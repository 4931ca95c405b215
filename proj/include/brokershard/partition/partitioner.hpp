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

#include "brokershard/partition/state_graph.hpp"

namespace brokershard {

struct partition_map {
    std::map<address, shard_id> assignment;
    std::uint64_t epoch = 0;

    /// Throws uncovered_vertex when `a` is absent.
    shard_id at(const address &a) const;
};

struct partition_options {
    double epsilon = 0.10;
    std::uint64_t seed = 0;
    /// Random initial assignments refined in addition to the greedy and
    /// graph-growing seeds.
    std::size_t restarts = 8;
    std::size_t max_passes = 10;
    /// Throw infeasible_balance instead of returning the best unbalanced result.
    bool strict = false;
};

struct partition_result {
    partition_map map;
    std::uint64_t cut = 0;
    std::vector<std::uint64_t> loads;
    /// Per-shard load cap: (1 + ε) × average non-pinned vertex weight.
    double cap = 0.0;
    bool feasible = true;
    /// max load / average load; 1.0 when perfectly balanced or empty.
    double imbalance = 1.0;
};

/// Balanced S-way partition of the non-pinned vertices that minimizes the edge
/// cut. Load of a shard is the sum of its vertices' w_v. Deterministic per seed.
partition_result partition_graph(const state_graph &g, std::size_t shard_count, const partition_options &opts = {});

/// Σ w_e over edges whose endpoints are assigned to different shards; edges
/// touching a pinned vertex and loops count 0.
std::uint64_t edge_cut(const state_graph &g, const partition_map &p);

std::vector<std::uint64_t> shard_loads(const state_graph &g, const partition_map &p, std::size_t shard_count);

/// Per-broker per-shard slices: equal split, remainder to the lowest shards
/// one unit each, so slices differ by at most one.
using segmentation_plan = std::map<address, std::vector<amount_t>>;
segmentation_plan segment_brokers(const std::set<address> &brokers, const std::map<address, amount_t> &balances,
                                  std::size_t shard_count);

} // namespace brokershard
