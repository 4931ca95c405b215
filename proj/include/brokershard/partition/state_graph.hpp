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
#include <span>

#include "brokershard/ledger/block.hpp"

namespace brokershard {

/// Undirected account graph of one epoch. Edge keys are ordered (low, high);
/// a self-transfer is a loop keyed (a, a) and counts once toward w_v(a).
class state_graph {
public:
    using edge_key = std::pair<address, address>;

    void add_edge(const address &a, const address &b, std::uint64_t weight = 1);
    void add_vertex(const address &a);
    void pin(const address &a);

    const std::map<address, std::uint64_t> &vertices() const noexcept { return _vertices; }
    const std::map<edge_key, std::uint64_t> &edges() const noexcept { return _edges; }
    const std::set<address> &pinned() const noexcept { return _pinned; }

    bool is_pinned(const address &a) const { return _pinned.contains(a); }
    std::uint64_t vertex_weight(const address &a) const;
    std::uint64_t edge_weight(const address &a, const address &b) const;
    std::uint64_t total_edge_weight() const noexcept { return _total; }
    bool empty() const noexcept { return _vertices.empty(); }

private:
    std::map<address, std::uint64_t> _vertices;
    std::map<edge_key, std::uint64_t> _edges;
    std::set<address> _pinned;
    std::uint64_t _total = 0;
};

/// Edges come from workload-level transfers only: plain transfers, the
/// source leg of Θ1 (payer to payee) and the source leg of a relay. Brokers
/// are added as pinned vertices.
state_graph build_state_graph(std::span<const tx_block> blocks, const std::set<address> &brokers);

/// `addrA addrB weight` per line, in key order.
void write_edge_list(std::ostream &os, const state_graph &g);

} // namespace brokershard
