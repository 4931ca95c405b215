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

#include "brokershard/baselines/policies.hpp"
#include "brokershard/common/error.hpp"
#include "brokershard/sim/simulator.hpp"

using namespace brokershard;

namespace {

sim_config small_config()
{
    sim_config c;
    c.shards = 4;
    c.brokers = 8;
    c.txs_per_epoch = 600;
    c.arrival_rate = 200;
    c.block_interval_s = 1;
    c.block_capacity = 300;
    c.epoch_blocks = 4;
    c.h_lock = 12;
    c.network = {200, 50, 0.0};
    c.seed = 5;
    return c;
}

std::vector<workload_tx> zipf_workload(std::size_t n, std::uint64_t seed = 11)
{
    synthetic_spec s;
    s.n_accounts = 400;
    s.n_txs = n;
    s.pop = popularity::zipf;
    s.community = community_model{4, 0.9};
    s.seed = seed;
    return generate_synthetic(s);
}

void check_clean(const run_output &out)
{
    const auto &m = out.metrics;
    CHECK(m.pending() == 0);
    CHECK(m.injected() == m.confirmed() + m.refunded() + m.rejected());
    CHECK(out.audit.conservation_violations == 0);
    CHECK(out.audit.exclusivity_violations == 0);
    CHECK(out.audit.atomicity_violations == 0);
    CHECK(out.audit.party_violations == 0);
    CHECK_FALSE(out.audit.terminated_by_cap);
    CHECK(out.audit.conservation_checks == out.audit.blocks);
}

} // namespace

TEST_CASE("one shard has no cross-shard transfers")
{
    auto c = small_config();
    c.shards = 1;
    const auto out = run_simulation(c, zipf_workload(1000));
    check_clean(out);
    CHECK(out.metrics.ctx_ratio() == 0.0);
    CHECK(out.ctxs.empty());
    CHECK(out.metrics.confirmed() == 1000);
}

TEST_CASE("identical inputs give identical summaries")
{
    auto c = small_config();
    c.network.drop_prob = 0.2;
    c.adversary = {0.1, 0.1};
    const auto w = zipf_workload(1500);
    const auto a = run_simulation(c, w);
    const auto b = run_simulation(c, w);
    CHECK(a.summary_text() == b.summary_text());
    CHECK(a.blocks_csv == b.blocks_csv);
    CHECK(a.ctx_audit_csv == b.ctx_audit_csv);
}

TEST_CASE("injection follows the arrival rate")
{
    auto c = small_config();
    c.shards = 1;
    c.arrival_rate = 500;
    auto out = run_simulation(c, zipf_workload(50));
    auto samples = out.metrics.latencies();
    std::sort(samples.begin(), samples.end(), [](const auto &x, const auto &y) { return x.tx_id < y.tx_id; });
    REQUIRE(samples.size() == 50);
    for (std::size_t i = 1; i < samples.size(); ++i)
        CHECK(samples[i].injected_at - samples[i - 1].injected_at == 2'000'000);

    c.arrival_rate = 1;
    c.policy = policy_kind::monoxide;
    out = run_simulation(c, zipf_workload(3));
    samples = out.metrics.latencies();
    std::sort(samples.begin(), samples.end(), [](const auto &x, const auto &y) { return x.tx_id < y.tx_id; });
    REQUIRE(samples.size() == 3);
    CHECK(samples[0].injected_at == 0);
    CHECK(samples[1].injected_at == ns_per_s);
    CHECK(samples[2].injected_at == 2 * ns_per_s);
}

TEST_CASE("brokers and partitioning balance load better than address placement")
{
    auto c = small_config();
    const auto w = zipf_workload(3000);
    c.policy = policy_kind::brokerchain;
    const auto bc = run_simulation(c, w);
    c.policy = policy_kind::monoxide;
    const auto mx = run_simulation(c, w);
    check_clean(bc);
    check_clean(mx);
    const auto v_bc = compute_workload_stats(bc.metrics.workload_per_shard());
    const auto v_mx = compute_workload_stats(mx.metrics.workload_per_shard());
    CHECK(v_bc.variance < v_mx.variance);
    CHECK(v_bc.total < v_mx.total);
    CHECK(bc.metrics.ctx_ratio() < mx.metrics.ctx_ratio());
    CHECK(bc.workload_digest == mx.workload_digest);
}

TEST_CASE("cross-shard transfers take longer than intra-shard ones")
{
    const auto out = run_simulation(small_config(), zipf_workload(2000));
    check_clean(out);
    const auto intra = out.metrics.latency(latency_class::intra);
    const auto cross = out.metrics.latency(latency_class::cross);
    REQUIRE(intra.count > 0);
    REQUIRE(cross.count > 0);
    CHECK(cross.mean_ms > intra.mean_ms);
}

TEST_CASE("trusted brokers skip the lock wait")
{
    auto c = small_config();
    const auto w = zipf_workload(2000);
    const auto normal = run_simulation(c, w);
    c.trusted_brokers = true;
    const auto trusted = run_simulation(c, w);
    check_clean(trusted);
    CHECK(trusted.metrics.latency(latency_class::cross).mean_ms < normal.metrics.latency(latency_class::cross).mean_ms);
}

TEST_CASE("hot account star graph")
{
    const auto hub = address::from_label("star/hub");
    std::vector<workload_tx> w;
    for (int i = 0; i < 1200; ++i)
        w.push_back({i, address::from_label("star/leaf/" + std::to_string(i % 300)), hub, 1});
    auto c = small_config();
    const auto out = run_simulation(c, w);
    check_clean(out);
    CHECK(out.metrics.confirmed() == 1200);
    c.policy = policy_kind::monoxide;
    const auto mx = run_simulation(c, w);
    check_clean(mx);
    CHECK(out.metrics.ctx_ratio() < mx.metrics.ctx_ratio());
}

TEST_CASE("a relayed transfer costs two units of workload")
{
    auto c = small_config();
    c.shards = 2;
    c.policy = policy_kind::monoxide;
    const auto a = address::from_hex("0000000000000000000000000000000000000001");
    const auto b = address::from_hex("ff00000000000000000000000000000000000002");
    REQUIRE(monoxide_placement(a, 2) != monoxide_placement(b, 2));
    const auto out = run_simulation(c, {{0, a, b, 7}});
    check_clean(out);
    CHECK(out.metrics.confirmed() == 1);
    CHECK(out.metrics.ctx_ratio() == 1.0);
    CHECK(compute_workload_stats(out.metrics.workload_per_shard()).total == 2);
    CHECK(out.metrics.latency(latency_class::relay).count == 1);

    const auto same = run_simulation(c, {{0, a, address::from_hex("03"), 7}});
    CHECK(compute_workload_stats(same.metrics.workload_per_shard()).total == 1);
}

TEST_CASE("drops and nonce races keep every transfer atomic")
{
    auto c = small_config();
    c.network = {200, 150, 0.3};
    c.adversary = {0.2, 0.2};
    c.h_lock = 40;
    const auto out = run_simulation(c, zipf_workload(3000, 21));
    check_clean(out);
    CHECK(out.audit.dropped_messages > 0);
    CHECK(out.audit.threat1_attempts > 0);
    CHECK(out.audit.threat2_attempts > 0);
    CHECK(out.audit.min_resolution_slack >= 0);
    std::size_t refunded = 0;
    for (const auto &[id, r] : out.ctxs) {
        CHECK((r.phase == ctx_phase::succeeded || r.phase == ctx_phase::refunded));
        refunded += r.phase == ctx_phase::refunded;
    }
    CHECK(refunded > 0);
}

TEST_CASE("invalid configurations are rejected")
{
    auto c = small_config();
    c.block_capacity = 0;
    CHECK_THROWS_AS(run_simulation(c, zipf_workload(10)), error);
    c = small_config();
    c.network.drop_prob = 1.0;
    CHECK_THROWS_AS(run_simulation(c, zipf_workload(10)), error);
}
