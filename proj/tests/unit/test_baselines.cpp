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

#include <doctest.h>

#include <algorithm>
#include <random>

#include "brokershard/baselines/policies.hpp"
#include "brokershard/common/error.hpp"

using namespace brokershard;

TEST_CASE("policy names round trip")
{
    for (const auto p : all_policies)
        CHECK(parse_policy(to_string(p)) == p);
    CHECK(parse_policy("metis_only") == policy_kind::metis_only);
    CHECK(to_string(policy_kind::metis_only) == "metis");
    CHECK_THROWS_AS(parse_policy("random"), error);
}

TEST_CASE("least-busy-first worked example")
{
    const auto a = address::from_label("A");
    const auto b = address::from_label("B");
    const auto c = address::from_label("C");
    const auto m = lbf_reassign({{a, 5}, {b, 3}, {c, 2}}, 2);
    CHECK(m.at(a) == 0);
    CHECK(m.at(b) == 1);
    CHECK(m.at(c) == 1);
}

TEST_CASE("least-busy-first load bound")
{
    std::mt19937_64 rng{8};
    std::map<address, std::uint64_t> activity;
    std::uint64_t total = 0, peak = 0;
    for (int i = 0; i < 400; ++i) {
        const std::uint64_t w = 1 + rng() % 50;
        activity[address::from_label("lbf/" + std::to_string(i))] = w;
        total += w;
        peak = std::max(peak, w);
    }
    for (std::size_t s : {2U, 3U, 7U, 16U}) {
        std::vector<std::uint64_t> load(s);
        for (const auto &[acct, shard] : lbf_reassign(activity, s)) {
            REQUIRE(shard < s);
            load[shard] += activity.at(acct);
        }
        const auto [lo, hi] = std::minmax_element(load.begin(), load.end());
        CHECK(*hi - *lo <= peak);
        CHECK(static_cast<double>(*hi) <= static_cast<double>(total) / static_cast<double>(s) + static_cast<double>(peak));
    }
}

TEST_CASE("address-prefix placement")
{
    auto a = address::from_hex("ff00000000000000000000000000000000000000");
    CHECK(monoxide_placement(a, 1) == 0);
    CHECK(monoxide_placement(a, 2) == 1);
    CHECK(monoxide_placement(a, 16) == 15);
    // Leading two bits 0b11 = 3 reduce to 0 with three shards.
    CHECK(monoxide_placement(a, 3) == 0);

    std::vector<std::size_t> hits(3);
    for (int i = 0; i < 3000; ++i)
        ++hits[monoxide_placement(address::from_label("p/" + std::to_string(i)), 3)];
    for (auto h : hits)
        CHECK(h > 0);
}

TEST_CASE("address-prefix placement makes (S-1)/S of random pairs cross-shard")
{
    std::mt19937_64 rng{3};
    std::vector<address> accts;
    for (int i = 0; i < 5000; ++i)
        accts.push_back(address::from_label("u/" + std::to_string(i)));
    const int n = 40000;
    int cross = 0;
    for (int i = 0; i < n; ++i) {
        const auto &x = accts[rng() % accts.size()];
        const auto &y = accts[rng() % accts.size()];
        cross += monoxide_placement(x, 32) != monoxide_placement(y, 32);
    }
    CHECK(static_cast<double>(cross) / n == doctest::Approx(31.0 / 32.0).epsilon(0.02));
}

TEST_CASE("graph-only policy rejects pinned vertices")
{
    state_graph g;
    const auto a = address::from_label("ga");
    const auto b = address::from_label("gb");
    g.add_edge(a, b, 3);
    const auto r = metis_only_policy(g, 2);
    CHECK(r.map.assignment.size() == 2);
    g.pin(a);
    CHECK_THROWS_AS(metis_only_policy(g, 2), error);
}
