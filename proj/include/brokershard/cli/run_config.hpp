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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "brokershard/sim/config.hpp"
#include "brokershard/workload/workload.hpp"

namespace brokershard {

/// Exactly one of `synthetic` and `trace` is set.
struct workload_source {
    std::optional<synthetic_spec> synthetic;
    /// When unset, the synthetic seed is derived from the run seed.
    std::optional<std::uint64_t> synthetic_seed;
    std::optional<std::filesystem::path> trace;

    bool operator==(const workload_source &) const = default;
};

struct run_config {
    sim_config sim;
    workload_source workload = default_workload();
    std::filesystem::path output_dir = "out";

    static workload_source default_workload();
    /// Throws config_invalid.
    void validate() const;
    bool operator==(const run_config &) const = default;
};

/// Canonical form: every field present, sim fields at top level next to
/// `workload` and `output_dir`.
nlohmann::json to_json(const run_config &c);
/// Missing keys keep defaults; unknown keys throw config_invalid.
run_config run_config_from_json(const nlohmann::json &j);
/// Throws io_error, parse_error, config_invalid.
run_config load_run_config(const std::filesystem::path &path);

/// Short names accepted by overrides and sweeps.
std::string canonical_key(std::string_view key);

/// Applies `key=value` where key is a dotted path into the canonical JSON
/// (aliases S, K, N_TX allowed). The value is read as JSON when it parses,
/// else as a string. Throws config_invalid.
void apply_override(run_config &c, std::string_view assignment);

/// BROKERSHARD_OUT, when set and non-empty, replaces output_dir.
void apply_environment(run_config &c);

/// Generates or loads the configured workload.
std::vector<workload_tx> materialize_workload(const run_config &c);

struct sweep_axis {
    std::string key;
    std::vector<std::string> values;
};

/// Parses `key=v1,v2,...`; throws config_invalid.
sweep_axis parse_sweep_axis(std::string_view text);

/// One row of the comparison tables written by multi-run commands.
struct run_digest_row {
    std::string label;
    nlohmann::json summary;
};

/// Runs one configuration into `dir` and returns its summary.
nlohmann::json run_into(const run_config &c, const std::vector<workload_tx> &workload,
                        const std::filesystem::path &dir);

/// Runs the four policies on one workload, each into `<output_dir>/<policy>`,
/// and writes `policies.csv`.
std::vector<run_digest_row> run_all_policies(const run_config &c);

/// One run per axis value into `<output_dir>/<key>_<value>`, plus `sweep.csv`.
/// The workload is regenerated per point so size-dependent keys take effect.
std::vector<run_digest_row> run_sweep(const run_config &c, const sweep_axis &axis);

/// Header plus one line per row: label, digest and headline metrics.
std::string comparison_csv(const std::string &label_column, const std::vector<run_digest_row> &rows);

} // namespace brokershard
