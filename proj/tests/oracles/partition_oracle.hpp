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

#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "brokershard/partition/state_graph.hpp"

namespace oracle {

/// Exhaustive minimum edge cut over every assignment of the non-pinned
/// vertices whose shard loads stay within `cap`. Shard labels are explored
/// in canonical order only (vertex i uses at most one new label), which
/// skips relabelled duplicates without losing any cut value.
struct exact_partition {
    std::optional<std::uint64_t> best_cut;
};

inline exact_partition brute_force_min_cut(const brokershard::state_graph &g, std::size_t shards, double epsilon)
{
    std::vector<brokershard::address> ids;
    std::vector<std::uint64_t> w;
    std::uint64_t total = 0;
    for (const auto &[a, wv] : g.vertices()) {
        if (g.is_pinned(a))
            continue;
        ids.push_back(a);
        w.push_back(wv);
        total += wv;
    }
    const auto n = ids.size();
    const double cap = (1.0 + epsilon) * static_cast<double>(total) / static_cast<double>(shards);
    std::vector<std::vector<std::uint64_t>> ew(n, std::vector<std::uint64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j)
                ew[i][j] = g.edge_weight(ids[i], ids[j]);

    exact_partition out;
    std::vector<std::size_t> part(n, 0);
    std::vector<std::uint64_t> loads(shards, 0);
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();

    auto rec = [&](auto &&self, std::size_t i, std::size_t used, std::uint64_t cut) -> void {
        if (cut >= best)
            return;
        if (i == n) {
            best = cut;
            return;
        }
        const auto limit = std::min(shards, used + 1);
        for (std::size_t s = 0; s < limit; ++s) {
            if (static_cast<double>(loads[s] + w[i]) > cap)
                continue;
            std::uint64_t add = 0;
            for (std::size_t j = 0; j < i; ++j)
                if (part[j] != s)
                    add += ew[i][j];
            part[i] = s;
            loads[s] += w[i];
            self(self, i + 1, std::max(used, s + 1), cut + add);
            loads[s] -= w[i];
        }
    };
    rec(rec, 0, 0, 0);
    if (best != std::numeric_limits<std::uint64_t>::max())
        out.best_cut = best;
    return out;
}

/// Random multigraph on `n` labelled vertices; edge present with prob p,
/// weight uniform in [1, max_w].
inline brokershard::state_graph random_graph(std::mt19937_64 &rng, std::size_t n, double p, std::uint64_t max_w,
                                             std::size_t pinned = 0)
{
    brokershard::state_graph g;
    std::vector<brokershard::address> ids;
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back(brokershard::address::from_label("v" + std::to_string(rng()) + "-" + std::to_string(i)));
        g.add_vertex(ids.back());
    }
    std::bernoulli_distribution edge{p};
    std::uniform_int_distribution<std::uint64_t> weight{1, max_w};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (edge(rng))
                g.add_edge(ids[i], ids[j], weight(rng));
    for (std::size_t k = 0; k < pinned && k < n; ++k)
        g.pin(ids[k]);
    return g;
}

} // namespace oracle
