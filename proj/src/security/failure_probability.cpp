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

#include "brokershard/security/failure_probability.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "brokershard/common/error.hpp"

namespace brokershard {

namespace {

void require_fraction(double x, const char *name, bool allow_zero = false)
{
    if (!(allow_zero ? x >= 0.0 : x > 0.0) || !(x < 1.0))
        throw error(errc::domain_error, std::string{name} + " = " + std::to_string(x) + " outside its domain");
}

real_t log_choose(std::uint64_t n, std::uint64_t k)
{
    return std::lgamma(static_cast<real_t>(n) + 1) - std::lgamma(static_cast<real_t>(k) + 1)
           - std::lgamma(static_cast<real_t>(n - k) + 1);
}

/// Log-space running sum.
class log_sum {
public:
    void add(real_t log_term)
    {
        if (log_term == -std::numeric_limits<real_t>::infinity())
            return;
        if (log_term <= _max) {
            _acc += std::exp(log_term - _max);
        } else {
            _acc = _acc * std::exp(_max - log_term) + 1;
            _max = log_term;
        }
    }
    real_t value() const { return _acc == 0 ? 0 : _acc * std::exp(_max); }

private:
    real_t _max = -std::numeric_limits<real_t>::infinity();
    real_t _acc = 0;
};

/// C(n,j) p^j (1−p)^{n−j} for j = 0..upto.
std::vector<real_t> binomial_pmf_prefix(std::uint64_t n, real_t p, std::uint64_t upto)
{
    std::vector<real_t> out(upto + 1, 0);
    if (p == 0) {
        out[0] = 1;
        return out;
    }
    const real_t lp = std::log(p);
    const real_t lq = std::log1p(-p);
    for (std::uint64_t j = 0; j <= upto && j <= n; ++j)
        out[j] = std::exp(log_choose(n, j) + static_cast<real_t>(j) * lp + static_cast<real_t>(n - j) * lq);
    return out;
}

} // namespace

real_t security_params::kappa() const
{
    return static_cast<real_t>(m) / static_cast<real_t>(m + theta * shards);
}

real_t amplified_malicious_fraction(double phi, double alpha)
{
    require_fraction(phi, "phi", true);
    if (!(alpha > 0.0) || alpha > 1.0)
        throw error(errc::domain_error, "alpha = " + std::to_string(alpha) + " outside (0, 1]");
    const real_t f = phi;
    const real_t a = alpha;
    return f / (f + a * (1 - f));
}

real_t binomial_upper_tail(std::uint64_t n, real_t p, std::uint64_t k)
{
    if (k == 0)
        return 1;
    if (k > n || p <= 0)
        return 0;
    if (p >= 1)
        return 1;
    const real_t lp = std::log(p);
    const real_t lq = std::log1p(-p);
    const real_t lratio = lp - lq;
    real_t lt = log_choose(n, k) + static_cast<real_t>(k) * lp + static_cast<real_t>(n - k) * lq;
    log_sum sum;
    for (std::uint64_t i = k;; ++i) {
        sum.add(lt);
        if (i == n)
            break;
        lt += std::log(static_cast<real_t>(n - i)) - std::log(static_cast<real_t>(i + 1)) + lratio;
    }
    return std::min<real_t>(sum.value(), 1);
}

real_t pshard_failure_prob(std::uint64_t m, double upsilon)
{
    if (m == 0)
        throw error(errc::domain_error, "committee size must be positive");
    require_fraction(upsilon, "upsilon", true);
    return binomial_upper_tail(m, upsilon, fault_threshold(m) + 1);
}

std::vector<std::vector<real_t>> mshard_safe_polynomials(std::uint64_t theta, std::uint64_t shards, double phi)
{
    if (theta == 0 || shards == 0)
        throw error(errc::domain_error, "theta and S must be positive");
    require_fraction(phi, "phi", true);
    const auto beta = fault_threshold(theta);
    const auto q = binomial_pmf_prefix(theta, phi, beta);
    std::vector<std::vector<real_t>> powers;
    powers.reserve(shards + 1);
    powers.push_back({1});
    for (std::uint64_t k = 1; k <= shards; ++k) {
        const auto &prev = powers.back();
        std::vector<real_t> next(prev.size() + beta, 0);
        for (std::size_t i = 0; i < prev.size(); ++i) {
            if (prev[i] == 0)
                continue;
            for (std::size_t j = 0; j <= beta; ++j)
                next[i + j] += prev[i] * q[j];
        }
        powers.push_back(std::move(next));
    }
    return powers;
}

real_t mshard_failure_prob(std::uint64_t theta, std::uint64_t shards, double phi)
{
    const auto powers = mshard_safe_polynomials(theta, shards, phi);
    const auto tail = binomial_upper_tail(theta, phi, fault_threshold(theta) + 1);
    real_t total = 0;
    for (std::uint64_t k = 0; k < shards; ++k) {
        real_t ok = 0;
        for (auto c : powers[k])
            ok += c;
        total += ok * tail;
    }
    return std::min<real_t>(total, 1);
}

real_t mshard_failure_prob_complement(std::uint64_t theta, std::uint64_t shards, double phi)
{
    const auto powers = mshard_safe_polynomials(theta, shards, phi);
    real_t ok = 0;
    for (auto c : powers.back())
        ok += c;
    return 1 - ok;
}

real_t mshard_failure_prob_factored(std::uint64_t theta, std::uint64_t shards, double phi)
{
    if (theta == 0 || shards == 0)
        throw error(errc::domain_error, "theta and S must be positive");
    require_fraction(phi, "phi", true);
    const auto tail = binomial_upper_tail(theta, phi, fault_threshold(theta) + 1);
    return -std::expm1(static_cast<real_t>(shards) * std::log1p(-tail));
}

real_t mshard_failure_upper_bound(std::uint64_t theta, std::uint64_t shards, double phi)
{
    if (theta == 0 || shards == 0)
        throw error(errc::domain_error, "theta and S must be positive");
    require_fraction(phi, "phi", true);
    return static_cast<real_t>(shards) * binomial_upper_tail(theta, phi, fault_threshold(theta) + 1);
}

std::uint64_t min_committee_size(const committee_target &target, std::uint32_t lambda, std::uint64_t cap)
{
    const bool pshard = target.which == committee_target::kind::pshard;
    const double frac = pshard ? target.upsilon : target.phi;
    require_fraction(frac, pshard ? "upsilon" : "phi", true);
    if (frac >= 1.0 / 3.0)
        throw error(errc::infeasible, "malicious fraction " + std::to_string(frac) + " is at least 1/3");
    const real_t goal = std::ldexp(real_t{1}, -static_cast<int>(lambda));
    for (std::uint64_t n = 1; n <= cap; ++n) {
        const auto p = pshard ? pshard_failure_prob(n, frac) : mshard_failure_prob_factored(n, target.shards, frac);
        if (p <= goal)
            return n;
    }
    throw error(errc::infeasible, "no committee size up to " + std::to_string(cap) + " reaches 2^-"
                                      + std::to_string(lambda));
}

double mshard_tolerance(std::uint64_t theta, std::uint64_t shards, std::uint32_t lambda, double tol)
{
    if (theta == 0 || shards == 0)
        throw error(errc::domain_error, "theta and shards must be positive");
    if (!(tol > 0.0))
        throw error(errc::domain_error, "tolerance must be positive");
    const real_t goal = std::ldexp(real_t{1}, -static_cast<int>(lambda));
    double lo = 0.0;
    double hi = 0.5;
    if (mshard_failure_prob(theta, shards, hi) <= goal)
        return hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mshard_failure_prob(theta, shards, mid) <= goal)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

namespace {

mc_estimate finish(std::uint64_t hits, std::uint64_t trials)
{
    mc_estimate e;
    e.trials = trials;
    e.hits = hits;
    e.estimate = static_cast<double>(hits) / static_cast<double>(trials);
    e.std_error = std::sqrt(e.estimate * (1 - e.estimate) / static_cast<double>(trials));
    return e;
}

/// Malicious count per shard after dealing `malicious` of `theta * shards`
/// nodes uniformly into shards of size theta.
template<typename Rng, typename Fn>
void deal(Rng &rng, std::uint64_t theta, std::uint64_t shards, std::uint64_t malicious, Fn &&per_shard)
{
    std::uint64_t rem_total = theta * shards;
    std::uint64_t rem_mal = malicious;
    std::uniform_int_distribution<std::uint64_t> pick;
    for (std::uint64_t s = 0; s < shards; ++s) {
        std::uint64_t here = 0;
        for (std::uint64_t i = 0; i < theta; ++i) {
            if (rem_mal > 0 && pick(rng, decltype(pick)::param_type{0, rem_total - 1}) < rem_mal) {
                ++here;
                --rem_mal;
            }
            --rem_total;
        }
        per_shard(here);
    }
}

} // namespace

mc_estimate monte_carlo_pshard(std::uint64_t m, double upsilon, std::uint64_t trials, std::uint64_t seed)
{
    if (trials == 0 || m == 0)
        throw error(errc::domain_error, "trials and m must be positive");
    require_fraction(upsilon, "upsilon", true);
    std::mt19937_64 rng{seed};
    std::binomial_distribution<std::uint64_t> draw{m, upsilon};
    const auto limit = fault_threshold(m);
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t)
        if (draw(rng) > limit)
            ++hits;
    return finish(hits, trials);
}

mc_estimate monte_carlo_mshard(std::uint64_t theta, std::uint64_t shards, double phi, std::uint64_t trials,
                               std::uint64_t seed)
{
    if (trials == 0 || theta == 0 || shards == 0)
        throw error(errc::domain_error, "trials, theta and S must be positive");
    require_fraction(phi, "phi", true);
    std::mt19937_64 rng{seed};
    std::binomial_distribution<std::uint64_t> draw{theta * shards, phi};
    const auto limit = fault_threshold(theta);
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        bool failed = false;
        deal(rng, theta, shards, draw(rng), [&](std::uint64_t here) { failed = failed || here > limit; });
        if (failed)
            ++hits;
    }
    return finish(hits, trials);
}

mc_estimate monte_carlo_shard_fraction(std::uint64_t theta, std::uint64_t shards, double phi, std::uint64_t trials,
                                       std::uint64_t seed)
{
    if (trials == 0 || theta == 0 || shards == 0)
        throw error(errc::domain_error, "trials, theta and S must be positive");
    require_fraction(phi, "phi", true);
    std::mt19937_64 rng{seed};
    std::binomial_distribution<std::uint64_t> draw{theta * shards, phi};
    double sum = 0;
    double sum_sq = 0;
    std::uint64_t samples = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        double trial_mean = 0;
        deal(rng, theta, shards, draw(rng), [&](std::uint64_t here) {
            trial_mean += static_cast<double>(here) / static_cast<double>(theta);
        });
        trial_mean /= static_cast<double>(shards);
        sum += trial_mean;
        sum_sq += trial_mean * trial_mean;
        ++samples;
    }
    mc_estimate e;
    e.trials = trials;
    e.estimate = sum / static_cast<double>(samples);
    const double var = std::max(0.0, sum_sq / static_cast<double>(samples) - e.estimate * e.estimate);
    e.std_error = std::sqrt(var / static_cast<double>(samples));
    return e;
}

} // namespace brokershard
