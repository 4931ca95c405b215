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

#include "brokershard/partition/partitioner.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "brokershard/common/error.hpp"

namespace brokershard {

shard_id partition_map::at(const address &a) const
{
    const auto it = assignment.find(a);
    if (it == assignment.end()) [[unlikely]]
        throw error(errc::uncovered_vertex, a.hex());
    return it->second;
}

namespace {

/// Compact view of the non-pinned subgraph with CSR adjacency.
struct compact_graph {
    std::vector<address> ids;
    std::vector<std::uint64_t> weight;
    std::vector<std::size_t> offset;
    std::vector<std::pair<std::size_t, std::uint64_t>> adj;
    std::uint64_t total = 0;

    explicit compact_graph(const state_graph &g)
    {
        std::map<address, std::size_t> index;
        for (const auto &[a, w] : g.vertices()) {
            if (g.is_pinned(a))
                continue;
            index.emplace(a, ids.size());
            ids.push_back(a);
            weight.push_back(w);
            total += w;
        }
        std::vector<std::vector<std::pair<std::size_t, std::uint64_t>>> lists(ids.size());
        for (const auto &[key, w] : g.edges()) {
            if (key.first == key.second)
                continue;
            const auto a = index.find(key.first);
            const auto b = index.find(key.second);
            if (a == index.end() || b == index.end())
                continue;
            lists[a->second].emplace_back(b->second, w);
            lists[b->second].emplace_back(a->second, w);
        }
        offset.push_back(0);
        for (auto &l : lists) {
            adj.insert(adj.end(), l.begin(), l.end());
            offset.push_back(adj.size());
        }
    }

    std::size_t size() const noexcept { return ids.size(); }
    std::span<const std::pair<std::size_t, std::uint64_t>> neighbors(std::size_t v) const
    {
        return {adj.data() + offset[v], offset[v + 1] - offset[v]};
    }
};

class refiner {
public:
    refiner(const compact_graph &g, std::size_t shards, double cap, std::size_t max_passes)
        : _g{g}, _s{shards}, _cap{cap}, _max_passes{max_passes}, _conn(shards)
    {
    }

    struct state {
        std::vector<shard_id> part;
        std::vector<std::uint64_t> loads;
        std::uint64_t cut = 0;

        std::uint64_t max_load() const { return loads.empty() ? 0 : *std::max_element(loads.begin(), loads.end()); }
    };

    state make_state(std::vector<shard_id> part) const
    {
        state st;
        st.part = std::move(part);
        st.loads.assign(_s, 0);
        for (std::size_t v = 0; v < _g.size(); ++v)
            st.loads[st.part[v]] += _g.weight[v];
        for (std::size_t v = 0; v < _g.size(); ++v)
            for (const auto &[u, w] : _g.neighbors(v))
                if (u > v && st.part[u] != st.part[v])
                    st.cut += w;
        return st;
    }

    bool fits(const state &st, shard_id t, std::size_t v) const
    {
        return static_cast<double>(st.loads[t] + _g.weight[v]) <= _cap;
    }

    bool feasible(const state &st) const { return static_cast<double>(st.max_load()) <= _cap; }

    void run(state &st)
    {
        rebalance(st);
        for (std::size_t pass = 0; pass < _max_passes; ++pass) {
            bool improved = move_pass(st);
            if (_g.size() <= swap_limit)
                improved = swap_pass(st) || improved;
            if (!improved)
                break;
        }
    }

private:
    static constexpr std::size_t swap_limit = 256;

    void fill_conn(const state &st, std::size_t v)
    {
        std::fill(_conn.begin(), _conn.end(), 0);
        for (const auto &[u, w] : _g.neighbors(v))
            _conn[st.part[u]] += w;
    }

    void move(state &st, std::size_t v, shard_id t)
    {
        fill_conn(st, v);
        const auto from = st.part[v];
        st.cut = st.cut + _conn[from] - _conn[t];
        st.loads[from] -= _g.weight[v];
        st.loads[t] += _g.weight[v];
        st.part[v] = t;
    }

    /// Moves vertices out of overloaded shards, cheapest cut increase first.
    void rebalance(state &st)
    {
        for (std::size_t guard = 0; guard < _g.size() * _s + 1; ++guard) {
            const auto over = static_cast<shard_id>(std::max_element(st.loads.begin(), st.loads.end()) - st.loads.begin());
            if (static_cast<double>(st.loads[over]) <= _cap)
                return;
            std::int64_t best_delta = 0;
            std::size_t best_v = _g.size();
            shard_id best_t = 0;
            std::uint64_t best_peak = st.loads[over];
            for (std::size_t v = 0; v < _g.size(); ++v) {
                if (st.part[v] != over)
                    continue;
                fill_conn(st, v);
                for (shard_id t = 0; t < _s; ++t) {
                    if (t == over)
                        continue;
                    const auto peak = std::max(st.loads[over] - _g.weight[v], st.loads[t] + _g.weight[v]);
                    if (peak >= st.loads[over])
                        continue;
                    const auto delta = static_cast<std::int64_t>(_conn[over]) - static_cast<std::int64_t>(_conn[t]);
                    const bool ok = static_cast<double>(st.loads[t] + _g.weight[v]) <= _cap;
                    const bool best_ok = best_v < _g.size() && static_cast<double>(st.loads[best_t] + _g.weight[best_v]) <= _cap;
                    bool better = false;
                    if (best_v == _g.size())
                        better = true;
                    else if (ok != best_ok)
                        better = ok;
                    else if (ok)
                        better = delta < best_delta;
                    else
                        better = peak < best_peak || (peak == best_peak && delta < best_delta);
                    if (better) {
                        best_delta = delta;
                        best_v = v;
                        best_t = t;
                        best_peak = peak;
                    }
                }
            }
            if (best_v == _g.size()) {
                if (_g.size() > swap_limit || !balance_swap(st, over))
                    return;
                continue;
            }
            move(st, best_v, best_t);
        }
    }

    /// Exchanges a vertex of the overloaded shard with a lighter one elsewhere
    /// when that lowers the pair's peak load; cheapest cut change first.
    bool balance_swap(state &st, shard_id over)
    {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        std::uint64_t best_peak = st.loads[over];
        std::int64_t best_delta = 0;
        std::vector<std::uint64_t> cu(_s);
        for (std::size_t u = 0; u < _g.size(); ++u) {
            if (st.part[u] != over)
                continue;
            fill_conn(st, u);
            cu = _conn;
            for (std::size_t v = 0; v < _g.size(); ++v) {
                const auto sv = st.part[v];
                if (sv == over || _g.weight[v] >= _g.weight[u])
                    continue;
                const auto lo = st.loads[over] - _g.weight[u] + _g.weight[v];
                const auto lv = st.loads[sv] - _g.weight[v] + _g.weight[u];
                const auto peak = std::max(lo, lv);
                if (peak >= st.loads[over])
                    continue;
                fill_conn(st, v);
                const auto wuv = pair_weight(u, v);
                const auto delta = static_cast<std::int64_t>(cu[over]) - static_cast<std::int64_t>(cu[sv])
                                   + static_cast<std::int64_t>(_conn[sv]) - static_cast<std::int64_t>(_conn[over])
                                   + 2 * static_cast<std::int64_t>(wuv);
                if (!best || peak < best_peak || (peak == best_peak && delta < best_delta)) {
                    best = std::pair{u, v};
                    best_peak = peak;
                    best_delta = delta;
                }
            }
        }
        if (!best)
            return false;
        const auto [u, v] = *best;
        const auto sv = st.part[v];
        st.loads[over] = st.loads[over] - _g.weight[u] + _g.weight[v];
        st.loads[sv] = st.loads[sv] - _g.weight[v] + _g.weight[u];
        st.part[u] = sv;
        st.part[v] = over;
        st.cut = static_cast<std::uint64_t>(static_cast<std::int64_t>(st.cut) + best_delta);
        return true;
    }

    bool move_pass(state &st)
    {
        bool improved = false;
        for (std::size_t v = 0; v < _g.size(); ++v) {
            fill_conn(st, v);
            const auto from = st.part[v];
            std::uint64_t best = _conn[from];
            std::optional<shard_id> target;
            for (shard_id t = 0; t < _s; ++t) {
                if (t == from || _conn[t] <= best || !fits(st, t, v))
                    continue;
                best = _conn[t];
                target = t;
            }
            if (target) {
                move(st, v, *target);
                improved = true;
            }
        }
        return improved;
    }

    std::uint64_t pair_weight(std::size_t u, std::size_t v) const
    {
        std::uint64_t w = 0;
        for (const auto &[x, wx] : _g.neighbors(u))
            if (x == v)
                w += wx;
        return w;
    }

    bool swap_pass(state &st)
    {
        bool improved = false;
        std::vector<std::uint64_t> cu(_s);
        for (std::size_t u = 0; u < _g.size(); ++u) {
            for (std::size_t v = u + 1; v < _g.size(); ++v) {
                const auto su = st.part[u];
                const auto sv = st.part[v];
                if (su == sv)
                    continue;
                const auto lu = st.loads[su] - _g.weight[u] + _g.weight[v];
                const auto lv = st.loads[sv] - _g.weight[v] + _g.weight[u];
                if (static_cast<double>(lu) > _cap || static_cast<double>(lv) > _cap)
                    continue;
                fill_conn(st, u);
                cu = _conn;
                fill_conn(st, v);
                const auto wuv = pair_weight(u, v);
                const auto gain = static_cast<std::int64_t>(cu[sv]) - static_cast<std::int64_t>(cu[su])
                                  + static_cast<std::int64_t>(_conn[su]) - static_cast<std::int64_t>(_conn[sv])
                                  - 2 * static_cast<std::int64_t>(wuv);
                if (gain <= 0)
                    continue;
                st.part[u] = sv;
                st.part[v] = su;
                st.loads[su] = lu;
                st.loads[sv] = lv;
                st.cut -= static_cast<std::uint64_t>(gain);
                improved = true;
            }
        }
        return improved;
    }

    const compact_graph &_g;
    std::size_t _s;
    double _cap;
    std::size_t _max_passes;
    std::vector<std::uint64_t> _conn;
};

std::vector<shard_id> greedy_seed(const compact_graph &g, std::size_t s, std::span<const std::size_t> order)
{
    std::vector<shard_id> part(g.size(), 0);
    std::vector<std::uint64_t> loads(s, 0);
    for (auto v : order) {
        const auto t = static_cast<shard_id>(std::min_element(loads.begin(), loads.end()) - loads.begin());
        part[v] = t;
        loads[t] += g.weight[v];
    }
    return part;
}

/// Grows one region per shard from its heaviest unassigned vertex, always
/// absorbing the unassigned vertex most connected to the region.
std::vector<shard_id> growing_seed(const compact_graph &g, std::size_t s, std::span<const std::size_t> by_weight)
{
    const auto n = g.size();
    std::vector<shard_id> part(n, static_cast<shard_id>(s - 1));
    std::vector<bool> taken(n, false);
    const double target = static_cast<double>(g.total) / static_cast<double>(s);
    std::size_t cursor = 0;
    std::vector<std::uint64_t> gain(n, 0);
    for (shard_id k = 0; k + 1 < s; ++k) {
        std::fill(gain.begin(), gain.end(), 0);
        std::uint64_t load = 0;
        while (static_cast<double>(load) < target) {
            std::size_t pick = n;
            for (std::size_t v = 0; v < n; ++v)
                if (!taken[v] && gain[v] > 0 && (pick == n || gain[v] > gain[pick]))
                    pick = v;
            if (pick == n) {
                while (cursor < n && taken[by_weight[cursor]])
                    ++cursor;
                if (cursor == n)
                    break;
                pick = by_weight[cursor];
            }
            taken[pick] = true;
            part[pick] = k;
            load += g.weight[pick];
            for (const auto &[u, w] : g.neighbors(pick))
                gain[u] += w;
        }
    }
    return part;
}

} // namespace

partition_result partition_graph(const state_graph &graph, std::size_t shard_count, const partition_options &opts)
{
    if (shard_count == 0)
        throw error(errc::config_invalid, "shard count must be positive");
    if (!(opts.epsilon > 0.0))
        throw error(errc::config_invalid, "epsilon must be positive");

    const compact_graph g{graph};
    const auto n = g.size();
    partition_result res;
    res.cap = (1.0 + opts.epsilon) * static_cast<double>(g.total) / static_cast<double>(shard_count);
    res.loads.assign(shard_count, 0);
    if (n == 0 || shard_count == 1) {
        for (const auto &a : g.ids)
            res.map.assignment.emplace(a, 0);
        if (shard_count == 1)
            res.loads[0] = g.total;
        res.feasible = true;
        return res;
    }

    std::vector<std::size_t> by_weight(n);
    std::iota(by_weight.begin(), by_weight.end(), 0);
    std::stable_sort(by_weight.begin(), by_weight.end(),
                     [&](auto a, auto b) { return g.weight[a] > g.weight[b]; });

    refiner ref{g, shard_count, res.cap, opts.max_passes};
    std::optional<refiner::state> best;
    auto consider = [&](std::vector<shard_id> part) {
        auto st = ref.make_state(std::move(part));
        ref.run(st);
        if (!best) {
            best = std::move(st);
            return;
        }
        const bool f = ref.feasible(st);
        const bool bf = ref.feasible(*best);
        bool better;
        if (f != bf)
            better = f;
        else if (f)
            better = st.cut < best->cut;
        else
            better = st.max_load() < best->max_load() || (st.max_load() == best->max_load() && st.cut < best->cut);
        if (better)
            best = std::move(st);
    };

    consider(greedy_seed(g, shard_count, by_weight));
    consider(growing_seed(g, shard_count, by_weight));
    std::mt19937_64 rng{opts.seed};
    std::vector<std::size_t> order(n);
    for (std::size_t r = 0; r < opts.restarts; ++r) {
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        consider(greedy_seed(g, shard_count, order));
    }

    res.cut = best->cut;
    res.loads = best->loads;
    res.feasible = ref.feasible(*best);
    const double avg = static_cast<double>(g.total) / static_cast<double>(shard_count);
    res.imbalance = avg > 0 ? static_cast<double>(best->max_load()) / avg : 1.0;
    for (std::size_t v = 0; v < n; ++v)
        res.map.assignment.emplace(g.ids[v], best->part[v]);
    if (!res.feasible && opts.strict)
        throw error(errc::infeasible_balance, "best max load " + std::to_string(best->max_load()) + " exceeds cap "
                                                  + std::to_string(res.cap));
    return res;
}

std::uint64_t edge_cut(const state_graph &g, const partition_map &p)
{
    for (const auto &[a, _] : g.vertices())
        if (!g.is_pinned(a))
            (void)p.at(a);
    std::uint64_t cut = 0;
    for (const auto &[key, w] : g.edges()) {
        if (key.first == key.second || g.is_pinned(key.first) || g.is_pinned(key.second))
            continue;
        if (p.at(key.first) != p.at(key.second))
            cut += w;
    }
    return cut;
}

std::vector<std::uint64_t> shard_loads(const state_graph &g, const partition_map &p, std::size_t shard_count)
{
    std::vector<std::uint64_t> loads(shard_count, 0);
    for (const auto &[a, w] : g.vertices())
        if (!g.is_pinned(a))
            loads.at(p.at(a)) += w;
    return loads;
}

segmentation_plan segment_brokers(const std::set<address> &brokers, const std::map<address, amount_t> &balances,
                                  std::size_t shard_count)
{
    segmentation_plan plan;
    for (const auto &b : brokers) {
        const auto it = balances.find(b);
        if (it == balances.end())
            throw error(errc::unknown_account, b.hex());
        const auto total = it->second;
        if (total < shard_count)
            throw error(errc::insufficient_broker_stake, b.hex() + " holds " + to_string(total) + " < "
                                                              + std::to_string(shard_count));
        const auto base = total / shard_count;
        auto rem = static_cast<std::size_t>(total % shard_count);
        std::vector<amount_t> slices(shard_count, base);
        for (std::size_t s = 0; s < rem; ++s)
            slices[s] += 1;
        plan.emplace(b, std::move(slices));
    }
    return plan;
}

} // namespace brokershard
