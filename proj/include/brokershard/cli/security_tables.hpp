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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace brokershard {

/// One point of a committee-failure sweep. For P-shards `size` is m and
/// `shards` is 1; for M-shards `size` is ϑ. `bound` is the union bound and
/// exists for M-shards only; Monte Carlo columns exist when trials > 0.
struct security_row {
    std::string kind;
    std::uint64_t size = 0;
    std::uint64_t shards = 1;
    double phi = 0.0;
    double upsilon = 0.0;
    double probability = 0.0;
    std::optional<double> bound;
    std::optional<double> mc_estimate;
    std::optional<double> mc_se;
};

/// Parses comma-separated items, each a number or an inclusive range
/// `lo..hi` walked by `step`. Throws domain_error.
std::vector<double> parse_number_list(std::string_view text, double step);

/// P̂(m, υ(φ, α)) for every m × φ.
std::vector<security_row> pshard_table(const std::vector<double> &ms, const std::vector<double> &phis, double alpha,
                                       std::uint64_t mc_trials, std::uint64_t seed);

/// P̄(ϑ, S, φ) with ϑ = ⌊total / S⌋ for every S × φ. Throws domain_error
/// when S exceeds total.
std::vector<security_row> mshard_table(std::uint64_t total, const std::vector<double> &shards,
                                       const std::vector<double> &phis, std::uint64_t mc_trials, std::uint64_t seed);

/// Columns kind,size,shards,phi,upsilon,probability,bound,mc_estimate,mc_se.
std::string param_sweep_csv(const std::vector<security_row> &rows);

} // namespace brokershard
