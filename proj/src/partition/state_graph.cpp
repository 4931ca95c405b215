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

#include "brokershard/partition/state_graph.hpp"

#include <ostream>

namespace brokershard {

void state_graph::add_vertex(const address &a)
{
    _vertices.try_emplace(a, 0);
}

void state_graph::pin(const address &a)
{
    add_vertex(a);
    _pinned.insert(a);
}

void state_graph::add_edge(const address &a, const address &b, std::uint64_t weight)
{
    if (weight == 0)
        return;
    const auto key = a < b ? edge_key{a, b} : edge_key{b, a};
    _edges[key] += weight;
    _vertices[a] += weight;
    if (b != a)
        _vertices[b] += weight;
    _total += weight;
}

std::uint64_t state_graph::vertex_weight(const address &a) const
{
    const auto it = _vertices.find(a);
    return it == _vertices.end() ? 0 : it->second;
}

std::uint64_t state_graph::edge_weight(const address &a, const address &b) const
{
    const auto it = _edges.find(a < b ? edge_key{a, b} : edge_key{b, a});
    return it == _edges.end() ? 0 : it->second;
}

state_graph build_state_graph(std::span<const tx_block> blocks, const std::set<address> &brokers)
{
    state_graph g;
    for (const auto &b : brokers)
        g.pin(b);
    for (const auto &blk : blocks) {
        for (const auto &tx : blk.txs) {
            switch (tx.kind) {
            case tx_kind::plain:
                g.add_edge(tx.from, tx.to);
                break;
            case tx_kind::theta1:
                if (tx.leg == ctx_leg::source)
                    g.add_edge(tx.half().raw.payer, tx.half().raw.payee);
                break;
            case tx_kind::relay:
                if (tx.leg == ctx_leg::source)
                    g.add_edge(tx.from, tx.to);
                break;
            case tx_kind::theta2:
            case tx_kind::failure_proof:
                break;
            }
        }
    }
    return g;
}

void write_edge_list(std::ostream &os, const state_graph &g)
{
    for (const auto &[key, w] : g.edges())
        os << key.first.hex() << ' ' << key.second.hex() << ' ' << w << '\n';
}

} // namespace brokershard
