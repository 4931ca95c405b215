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

// Acceptance gate: one PASS/FAIL line per headline property, nonzero exit on
// any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "brokershard/baselines/policies.hpp"
#include "brokershard/metrics/metrics.hpp"
#include "brokershard/partition/partitioner.hpp"
#include "brokershard/security/failure_probability.hpp"
#include "brokershard/sim/simulator.hpp"
#include "oracles/partition_oracle.hpp"
#include "oracles/security_oracle.hpp"

using namespace brokershard;

namespace {

struct verdict {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(const char *name, double budget_s, const std::function<verdict()> &body)
{
    const auto t0 = std::chrono::steady_clock::now();
    verdict v;
    try {
        v = body();
    } catch (const std::exception &e) {
        v = {false, std::string{"exception: "} + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > budget_s) {
        v.pass = false;
        v.detail += " (over time budget)";
    }
    if (!v.pass)
        ++failures;
    std::printf("%s %s: %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char *f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

/// Shared by the atomicity and exclusivity checks: uniform traffic across
/// eight shards, one-second blocks, slow lossy links and nonce racers.
const run_output &adversarial_run()
{
    static const run_output out = [] {
        synthetic_spec w;
        w.n_accounts = 3000;
        w.n_txs = 14000;
        w.seed = 606;
        sim_config c;
        c.shards = 8;
        c.brokers = 24;
        c.txs_per_epoch = 3500;
        c.arrival_rate = 400;
        c.block_interval_s = 1;
        c.block_capacity = 400;
        c.epoch_blocks = 10;
        // Recalibrated after the first epoch to 20x the mean CTX latency.
        c.h_lock_auto = true;
        c.network = {200, 150, 0.3};
        c.adversary = {0.05, 0.05};
        c.seed = 606;
        c.record_logs = false;
        return run_simulation(c, generate_synthetic(w));
    }();
    return out;
}

std::vector<workload_tx> zipf_community(std::size_t n, std::uint64_t seed)
{
    synthetic_spec w;
    w.n_accounts = 2000;
    w.n_txs = n;
    w.pop = popularity::zipf;
    w.zipf_exponent = 1.0;
    w.community = community_model{8, 0.9};
    w.seed = seed;
    return generate_synthetic(w);
}

} // namespace

int main()
{
    criterion("ctx_ratio_analytic", 5 * 60, [] {
        verdict v{true, ""};
        for (std::size_t s : {2U, 4U, 8U, 16U, 32U}) {
            synthetic_spec w;
            w.n_accounts = 20000;
            w.n_txs = 20000;
            w.seed = 100 + s;
            sim_config c;
            c.policy = policy_kind::monoxide;
            c.shards = s;
            c.txs_per_epoch = w.n_txs;
            c.arrival_rate = 2000;
            c.block_interval_s = 1;
            c.block_capacity = 4000;
            c.record_logs = false;
            c.audit = false;
            const auto t0 = std::chrono::steady_clock::now();
            const auto out = run_simulation(c, generate_synthetic(w));
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const double ratio = out.metrics.ctx_ratio();
            const double expect = static_cast<double>(s - 1) / static_cast<double>(s);
            const bool ok = std::fabs(ratio - expect) <= 0.02 && (s != 32 || ratio >= 0.96) && secs < 60;
            v.pass = v.pass && ok;
            v.detail += "S=" + std::to_string(s) + " " + fmt("%.4f", ratio) + " vs " + fmt("%.4f", expect) + "; ";
        }
        return v;
    });

    criterion("amplified_fraction", 1, [] {
        const double a = static_cast<double>(amplified_malicious_fraction(0.2, 0.9));
        const double b = static_cast<double>(amplified_malicious_fraction(0.2, 0.5));
        return verdict{std::fabs(a - 0.217) <= 0.0005 && std::fabs(b - 0.333) <= 0.001,
                       "upsilon(0.2,0.9)=" + fmt("%.6f", a) + " upsilon(0.2,0.5)=" + fmt("%.6f", b)};
    });

    criterion("pshard_boundary_and_monte_carlo", 60, [] {
        const auto p = pshard_failure_prob(250, 0.21);
        const auto goal = std::ldexp(1.0L, -18);
        const auto exact = static_cast<double>(pshard_failure_prob(60, 0.25));
        const auto mc = monte_carlo_pshard(60, 0.25, 1'000'000, 20240601);
        const double z = std::fabs(mc.estimate - exact) / mc.std_error;
        return verdict{p <= goal && z <= 3.0, "P(250,0.21)=" + fmt("%.4e", static_cast<double>(p)) + " <= "
                                                   + fmt("%.4e", static_cast<double>(goal)) + "; MC(60,0.25) "
                                                   + fmt("%.6f", mc.estimate) + " vs " + fmt("%.6f", exact)
                                                   + " z=" + fmt("%.2f", z)};
    });

    criterion("mshard_exact_and_union_bound", 60, [] {
        long double worst = 0;
        for (unsigned theta = 1; theta <= 5; ++theta)
            for (unsigned s = 1; s <= 3; ++s)
                for (double phi : {0.1, 0.25, 0.4})
                    worst = std::max(worst, std::fabs(mshard_failure_prob(theta, s, phi)
                                                      - oracle::enumerate_mshard_failure(theta, s, phi)));
        std::mt19937_64 rng{50};
        int dominated = 0;
        for (int i = 0; i < 50; ++i) {
            const std::uint64_t theta = 1 + rng() % 80;
            const std::uint64_t s = 1 + rng() % 20;
            const double phi = 0.01 + 0.45 * static_cast<double>(rng() % 10000) / 10000.0;
            dominated += mshard_failure_upper_bound(theta, s, phi) >= mshard_failure_prob(theta, s, phi);
        }
        return verdict{worst <= 1e-12L && dominated == 50, "max |conv - enum| = "
                                                               + fmt("%.3e", static_cast<double>(worst))
                                                               + "; bound dominates " + std::to_string(dominated)
                                                               + "/50"};
    });

    criterion("mshard_tolerance_crossing", 5 * 60, [] {
        const double phi = mshard_tolerance(4000 / 16, 16, 18);
        return verdict{phi >= 0.17 && phi <= 0.23, "phi* = " + fmt("%.5f", phi) + " for theta*S = 4000, S = 16"};
    });

    criterion("eventual_atomicity", 5 * 60, [] {
        const auto &out = adversarial_run();
        std::size_t resolved = 0;
        for (const auto &[id, r] : out.ctxs)
            resolved += r.phase == ctx_phase::succeeded || r.phase == ctx_phase::refunded;
        const auto &a = out.audit;
        const bool ok = out.ctxs.size() >= 10000 && resolved == out.ctxs.size() && a.atomicity_violations == 0
                        && a.min_resolution_slack >= 0 && a.conservation_violations == 0
                        && a.conservation_checks == a.blocks && !a.terminated_by_cap && a.dropped_messages > 0;
        return verdict{ok, std::to_string(resolved) + "/" + std::to_string(out.ctxs.size()) + " CTXs resolved; "
                               + std::to_string(a.atomicity_violations) + " late or unresolved; "
                               + std::to_string(a.dropped_messages) + " messages dropped; conservation "
                               + std::to_string(a.conservation_checks) + " checks, "
                               + std::to_string(a.conservation_violations) + " violations; min slack "
                               + std::to_string(a.min_resolution_slack) + " blocks; H_lock " + std::to_string(out.h_lock_effective)};
    });

    criterion("destination_exclusivity", 5 * 60, [] {
        const auto &out = adversarial_run();
        const auto &a = out.audit;
        const bool ok = out.ctxs.size() >= 10000 && a.exclusivity_violations == 0 && a.party_violations == 0
                        && a.threat1_attempts > 0 && a.threat2_attempts > 0;
        return verdict{ok, "exclusivity violations " + std::to_string(a.exclusivity_violations)
                               + "; party violations " + std::to_string(a.party_violations) + "; threat1 "
                               + std::to_string(a.threat1_wins) + "/" + std::to_string(a.threat1_attempts)
                               + " races won; threat2 " + std::to_string(a.threat2_wins) + "/"
                               + std::to_string(a.threat2_attempts) + " races won"};
    });

    criterion("partitioner_vs_brute_force", 2 * 60, [] {
        std::mt19937_64 rng{12};
        int feasible = 0, infeasible = 0, infeasible_flagged = 0, within = 0;
        double worst = 0;
        while (feasible < 100) {
            const std::size_t n = 4 + rng() % 9;
            const std::size_t s = 2 + rng() % 3;
            const auto g = oracle::random_graph(rng, n, 0.4, 4);
            const auto exact = oracle::brute_force_min_cut(g, s, 0.1);
            const auto res = partition_graph(g, s);
            if (!exact.best_cut) {
                ++infeasible;
                infeasible_flagged += !res.feasible;
                continue;
            }
            ++feasible;
            const double ratio = *exact.best_cut == 0 ? (res.cut == 0 ? 1.0 : INFINITY)
                                                      : static_cast<double>(res.cut) / *exact.best_cut;
            worst = std::max(worst, ratio);
            within += res.feasible && static_cast<double>(res.cut) <= 1.5 * static_cast<double>(*exact.best_cut);
        }
        return verdict{within == 100 && infeasible_flagged == infeasible,
                       std::to_string(within) + "/100 within 1.5x (worst ratio " + fmt("%.3f", worst) + "); "
                           + std::to_string(infeasible_flagged) + "/" + std::to_string(infeasible)
                           + " infeasible instances reported infeasible"};
    });

    criterion("policy_ordering", 10 * 60, [] {
        const auto w = zipf_community(20000, 7);
        sim_config c;
        c.shards = 8;
        c.brokers = 16;
        c.txs_per_epoch = 4000;
        c.arrival_rate = 500;
        c.block_interval_s = 8;
        c.block_capacity = 2000;
        c.record_logs = false;
        std::map<policy_kind, run_output> runs;
        for (auto p : {policy_kind::brokerchain, policy_kind::metis_only, policy_kind::monoxide}) {
            c.policy = p;
            runs.emplace(p, run_simulation(c, w));
        }
        auto ratio = [&](policy_kind p) { return runs.at(p).metrics.ctx_ratio(); };
        auto stats = [&](policy_kind p) { return compute_workload_stats(runs.at(p).metrics.workload_per_shard()); };
        const auto bc = stats(policy_kind::brokerchain);
        const auto mx = stats(policy_kind::monoxide);
        const bool ok = ratio(policy_kind::brokerchain) < ratio(policy_kind::metis_only)
                        && ratio(policy_kind::metis_only) < ratio(policy_kind::monoxide)
                        && bc.variance <= 0.5 * mx.variance && bc.total < mx.total;
        return verdict{ok, "ctx ratio brokerchain " + fmt("%.3f", ratio(policy_kind::brokerchain)) + " < metis "
                               + fmt("%.3f", ratio(policy_kind::metis_only)) + " < monoxide "
                               + fmt("%.3f", ratio(policy_kind::monoxide)) + "; variance "
                               + fmt("%.0f", bc.variance) + " vs " + fmt("%.0f", mx.variance) + "; total "
                               + std::to_string(bc.total) + " vs " + std::to_string(mx.total)};
    });

    criterion("throughput_latency_ordering", 10 * 60, [] {
        const auto w = zipf_community(50000, 7);
        sim_config c;
        c.shards = 16;
        c.brokers = 40;
        c.txs_per_epoch = 10000;
        c.arrival_rate = 125;
        c.block_interval_s = 8;
        c.block_capacity = 125;
        c.record_logs = false;
        std::map<policy_kind, std::pair<double, double>> r;
        for (auto p : {policy_kind::brokerchain, policy_kind::lbf, policy_kind::monoxide}) {
            c.policy = p;
            const auto out = run_simulation(c, w);
            r[p] = {out.metrics.latency().mean_ms, out.metrics.tps()};
        }
        const auto &bc = r[policy_kind::brokerchain];
        const auto &lbf = r[policy_kind::lbf];
        const auto &mx = r[policy_kind::monoxide];
        const bool ok = bc.first < lbf.first && lbf.first < mx.first && bc.second >= lbf.second
                        && bc.second >= mx.second;
        return verdict{ok, "mean latency s brokerchain " + fmt("%.2f", bc.first / 1000) + " < lbf "
                               + fmt("%.2f", lbf.first / 1000) + " < monoxide " + fmt("%.2f", mx.first / 1000)
                               + "; TPS " + fmt("%.1f", bc.second) + " vs " + fmt("%.1f", lbf.second) + ", "
                               + fmt("%.1f", mx.second)};
    });

    criterion("determinism", 5 * 60, [] {
        const auto w = zipf_community(6000, 9);
        sim_config c;
        c.shards = 4;
        c.brokers = 8;
        c.txs_per_epoch = 2000;
        c.block_interval_s = 2;
        c.network = {300, 200, 0.2};
        c.adversary = {0.05, 0.05};
        const auto a = summary_digest(run_simulation(c, w).summary_text());
        const auto b = summary_digest(run_simulation(c, w).summary_text());
        return verdict{a == b, "summary digests " + a.substr(0, 16) + " / " + b.substr(0, 16)};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
