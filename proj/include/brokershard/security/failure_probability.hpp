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

#include <cstdint>
#include <vector>

namespace brokershard {

using real_t = long double;

struct security_params {
    double alpha = 0.9;
    double phi = 0.2;
    std::uint64_t m = 250;
    std::uint64_t theta = 250;
    std::uint64_t shards = 16;
    std::uint32_t lambda = 18;

    /// Fraction of all nodes that sit in the P-shard: m / (m + ϑS).
    real_t kappa() const;
};

/// υ = φ / (φ + α(1 − φ)). Throws domain_error outside φ ∈ [0,1), α ∈ (0,1].
real_t amplified_malicious_fraction(double phi, double alpha);

/// Largest number of faulty members a committee of n tolerates: ⌊(n − 1)/3⌋.
constexpr std::uint64_t fault_threshold(std::uint64_t n) noexcept { return n == 0 ? 0 : (n - 1) / 3; }

/// P[Binomial(n, p) ≥ k], summed in log space.
real_t binomial_upper_tail(std::uint64_t n, real_t p, std::uint64_t k);

/// P̂: probability that more than ⌊(m−1)/3⌋ of m P-shard members are malicious.
real_t pshard_failure_prob(std::uint64_t m, double upsilon);

/// Coefficients of (Σ_{j≤β} C(ϑ,j) φ^j (1−φ)^{ϑ−j} x^j)^k for k = 0..S, each
/// coefficient being the probability that k shards hold exactly N malicious
/// nodes in total with none above β.
std::vector<std::vector<real_t>> mshard_safe_polynomials(std::uint64_t theta, std::uint64_t shards, double phi);

/// P̄ by polynomial convolution. Accumulated as the probability that shard k
/// is the first failing one, which avoids the cancellation in 1 − Σ coef.
real_t mshard_failure_prob(std::uint64_t theta, std::uint64_t shards, double phi);
/// 1 − Σ_N coef_N of the S-th power; equal to mshard_failure_prob up to rounding.
real_t mshard_failure_prob_complement(std::uint64_t theta, std::uint64_t shards, double phi);
/// Closed form 1 − (1 − tail)^S with tail the single-shard failure probability.
real_t mshard_failure_prob_factored(std::uint64_t theta, std::uint64_t shards, double phi);
/// Union bound S × P[Binomial(ϑ, φ) > β].
real_t mshard_failure_upper_bound(std::uint64_t theta, std::uint64_t shards, double phi);

struct committee_target {
    enum class kind { pshard, mshard } which = kind::pshard;
    double upsilon = 0.0;
    std::uint64_t shards = 1;
    double phi = 0.0;

    static committee_target pshard(double upsilon) { return {kind::pshard, upsilon, 1, 0.0}; }
    static committee_target mshard(std::uint64_t shards, double phi) { return {kind::mshard, 0.0, shards, phi}; }
};

/// Smallest committee size whose failure probability is ≤ 2^−λ. Scans upward
/// so the result is minimal even where the tail is not monotone. Throws
/// infeasible when the malicious fraction is ≥ 1/3 or nothing qualifies
/// up to `cap`.
std::uint64_t min_committee_size(const committee_target &target, std::uint32_t lambda, std::uint64_t cap = 10'000);

/// Largest φ (to within `tol`) with P̄(ϑ, S, φ) ≤ 2^−λ, found by bisection
/// on [0, 1/2] since P̄ is non-decreasing in φ.
double mshard_tolerance(std::uint64_t theta, std::uint64_t shards, std::uint32_t lambda, double tol = 1e-6);

struct mc_estimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
};

mc_estimate monte_carlo_pshard(std::uint64_t m, double upsilon, std::uint64_t trials, std::uint64_t seed);
/// Each of ϑS nodes is malicious with probability φ; nodes are then dealt to
/// S shards of ϑ uniformly at random.
mc_estimate monte_carlo_mshard(std::uint64_t theta, std::uint64_t shards, double phi, std::uint64_t trials,
                               std::uint64_t seed);
/// Mean over trials and shards of the per-shard malicious fraction under the
/// same random assignment; concentrates at φ.
mc_estimate monte_carlo_shard_fraction(std::uint64_t theta, std::uint64_t shards, double phi, std::uint64_t trials,
                                       std::uint64_t seed);

} // namespace brokershard
