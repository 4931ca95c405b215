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

#include <filesystem>
#include <map>
#include <string>

#include "brokershard/broker/ctx_record.hpp"
#include "brokershard/metrics/metrics.hpp"
#include "brokershard/sim/config.hpp"
#include "brokershard/workload/workload.hpp"

namespace brokershard {

/// Safety checks accumulated while the event loop runs. Every violation
/// counter is zero in a correct run.
struct sim_audit {
    std::uint64_t blocks = 0;
    std::uint64_t conservation_checks = 0;
    std::uint64_t conservation_violations = 0;
    /// CTXs with both Θ2 and the destination-leg Θ1 in destination blocks,
    /// or either more than once.
    std::uint64_t exclusivity_violations = 0;
    /// CTXs unresolved at the end or resolved past H_source + H_lock + 1.
    std::uint64_t atomicity_violations = 0;
    /// CTXs whose payer, payee or broker net effect is not the expected one.
    std::uint64_t party_violations = 0;
    /// Smallest (bound − resolution height) over resolved CTXs.
    std::int64_t min_resolution_slack = 0;
    /// Largest gap between a source shard's height and the destination's view
    /// of it when a Θ2 confirmed.
    height_t max_header_staleness = 0;
    std::uint64_t threat1_attempts = 0, threat1_wins = 0;
    std::uint64_t threat2_attempts = 0, threat2_wins = 0;
    std::uint64_t relay_fallbacks = 0;
    std::uint64_t dropped_messages = 0;
    std::uint64_t migrations = 0;
    std::uint64_t reinjected = 0;
    bool terminated_by_cap = false;
};

struct run_output {
    sim_config config;
    metrics_recorder metrics;
    sim_audit audit;
    std::map<digest, cross_tx_record> ctxs;
    height_t h_lock_effective = 0;
    std::size_t epochs = 0;
    digest workload_digest;
    std::vector<address> brokers;
    std::vector<std::uint64_t> partition_cuts;
    std::string blocks_csv;
    std::string ctx_audit_csv;

    nlohmann::json summary() const;
    /// Pretty-printed summary with a trailing newline; stable for identical runs.
    std::string summary_text() const;
};

/// Runs epochs until the workload is injected and every transfer, CTX and
/// lock is resolved, or the drain cap is hit. Pure function of its inputs.
/// Throws config_invalid.
run_output run_simulation(const sim_config &cfg, const std::vector<workload_tx> &workload);

/// summary.json plus latency, pool, workload, heatmap, ctx_ratio, blocks and
/// ctx_audit CSVs.
void write_run_artifacts(const std::filesystem::path &dir, const run_output &out);

} // namespace brokershard
