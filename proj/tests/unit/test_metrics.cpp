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

#include <sstream>

#include "brokershard/common/error.hpp"
#include "brokershard/metrics/metrics.hpp"

using namespace brokershard;

TEST_CASE("latency summary uses nearest rank")
{
    const auto s = summarize_latency({5, 1, 4, 2, 3, 6, 7, 8, 9, 10});
    CHECK(s.count == 10);
    CHECK(s.mean_ms == doctest::Approx(5.5));
    CHECK(s.p50_ms == 5);
    CHECK(s.p95_ms == 10);
    CHECK(s.max_ms == 10);
    CHECK(summarize_latency({}).count == 0);
}

TEST_CASE("workload stats use population variance")
{
    const std::vector<std::uint64_t> w{2, 4, 4, 4, 5, 5, 7, 9};
    const auto s = compute_workload_stats(w);
    CHECK(s.total == 40);
    CHECK(s.variance == doctest::Approx(4.0));
    CHECK(s.max == 9);
    const std::vector<std::uint64_t> flat{3, 3, 3};
    CHECK(compute_workload_stats(flat).variance == 0.0);
}

TEST_CASE("recorder accounting")
{
    metrics_recorder m(2);
    for (int i = 0; i < 4; ++i)
        m.record_injection(0, i % 2 == 0);
    m.record_injection(1, true);
    m.record_confirmation(1, latency_class::intra, 0, 2 * ns_per_s);
    m.record_confirmation(2, latency_class::cross, ns_per_s, 5 * ns_per_s);
    m.record_confirmation(3, latency_class::refund, 0, 9 * ns_per_s);
    m.record_rejection(4, errc::insufficient_balance);
    CHECK(m.injected() == 5);
    CHECK(m.confirmed() == 2);
    CHECK(m.refunded() == 1);
    CHECK(m.rejected() == 1);
    CHECK(m.pending() == 1);
    CHECK(m.ctx_ratio() == doctest::Approx(3.0 / 5.0));
    CHECK(m.ctx_ratio_per_epoch() == std::vector<double>{0.5, 1.0});
    // Refunds stay out of the confirmed latency distribution and TPS.
    CHECK(m.latency().count == 2);
    CHECK(m.latency().mean_ms == doctest::Approx(3000.0));
    CHECK(m.latency(latency_class::refund).count == 1);
    CHECK(m.tps() == doctest::Approx(2.0 / 5.0));
    CHECK_THROWS_AS(m.record_confirmation(5, latency_class::intra, 3, 2), error);

    const auto j = m.summary();
    CHECK(j["pending"] == 1);
    CHECK(j["rejected_by_reason"]["InsufficientBalance"] == 1);
}

TEST_CASE("heatmap rows sum to per-epoch workload")
{
    metrics_recorder m(3);
    m.add_workload(0, 0, 4);
    m.add_workload(0, 2, 6);
    m.add_workload(2, 1, 5);
    REQUIRE(m.workload_matrix().size() == 3);
    CHECK(m.workload_per_shard() == std::vector<std::uint64_t>{4, 5, 6});
    std::ostringstream os;
    m.write_heatmap_csv(os);
    CHECK(os.str() == "epoch,shard_0,shard_1,shard_2\n0,4,0,6\n1,0,0,0\n2,0,5,0\n");
    const auto j = m.summary();
    CHECK(j["workload"]["total"] == 15);
    CHECK(j["workload"]["per_epoch"].size() == 3);
}
