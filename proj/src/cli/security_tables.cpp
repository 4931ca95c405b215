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

#include "brokershard/cli/security_tables.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "brokershard/common/error.hpp"
#include "brokershard/security/failure_probability.hpp"

namespace brokershard {

namespace {

double parse_number(std::string_view s)
{
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw error(errc::domain_error, "not a number: '" + std::string{s} + "'");
    return v;
}

std::uint64_t as_count(double v, const char *what)
{
    if (!(v >= 1.0) || v != std::floor(v))
        throw error(errc::domain_error, std::string{what} + " must be a positive integer");
    return static_cast<std::uint64_t>(v);
}

void put(std::ostream &os, const std::optional<double> &v)
{
    if (v)
        os << *v;
}

} // namespace

std::vector<double> parse_number_list(std::string_view text, double step)
{
    if (!(step > 0.0))
        throw error(errc::domain_error, "step must be positive");
    std::vector<double> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = text.substr(0, comma);
        if (const auto dots = item.find(".."); dots != std::string_view::npos) {
            const double lo = parse_number(item.substr(0, dots));
            const double hi = parse_number(item.substr(dots + 2));
            if (hi < lo)
                throw error(errc::domain_error, "empty range '" + std::string{item} + "'");
            // Index-based walk keeps the end point despite rounding.
            const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
            for (std::size_t i = 0; i <= n; ++i)
                out.push_back(lo + static_cast<double>(i) * step);
        } else {
            out.push_back(parse_number(item));
        }
        if (comma == std::string_view::npos)
            break;
        text = text.substr(comma + 1);
    }
    if (out.empty())
        throw error(errc::domain_error, "empty list");
    return out;
}

std::vector<security_row> pshard_table(const std::vector<double> &ms, const std::vector<double> &phis, double alpha,
                                       std::uint64_t mc_trials, std::uint64_t seed)
{
    std::vector<security_row> rows;
    for (double phi : phis) {
        const double upsilon = static_cast<double>(amplified_malicious_fraction(phi, alpha));
        for (double mv : ms) {
            security_row r;
            r.kind = "pshard";
            r.size = as_count(mv, "m");
            r.phi = phi;
            r.upsilon = upsilon;
            r.probability = static_cast<double>(pshard_failure_prob(r.size, upsilon));
            if (mc_trials > 0) {
                const auto mc = monte_carlo_pshard(r.size, upsilon, mc_trials, seed + rows.size());
                r.mc_estimate = mc.estimate;
                r.mc_se = mc.std_error;
            }
            rows.push_back(r);
        }
    }
    return rows;
}

std::vector<security_row> mshard_table(std::uint64_t total, const std::vector<double> &shards,
                                       const std::vector<double> &phis, std::uint64_t mc_trials, std::uint64_t seed)
{
    std::vector<security_row> rows;
    for (double sv : shards) {
        const auto s = as_count(sv, "S");
        if (total < s)
            throw error(errc::domain_error,
                        "S = " + std::to_string(s) + " exceeds " + std::to_string(total) + " nodes");
        for (double phi : phis) {
            security_row r;
            r.kind = "mshard";
            r.size = total / s;
            r.shards = s;
            r.phi = phi;
            r.upsilon = phi;
            r.probability = static_cast<double>(mshard_failure_prob(r.size, s, phi));
            r.bound = static_cast<double>(mshard_failure_upper_bound(r.size, s, phi));
            if (mc_trials > 0) {
                const auto mc = monte_carlo_mshard(r.size, s, phi, mc_trials, seed + rows.size());
                r.mc_estimate = mc.estimate;
                r.mc_se = mc.std_error;
            }
            rows.push_back(r);
        }
    }
    return rows;
}

std::string param_sweep_csv(const std::vector<security_row> &rows)
{
    std::ostringstream os;
    os.precision(12);
    os << "kind,size,shards,phi,upsilon,probability,bound,mc_estimate,mc_se\n";
    for (const auto &r : rows) {
        os << r.kind << ',' << r.size << ',' << r.shards << ',' << r.phi << ',' << r.upsilon << ','
           << r.probability << ',';
        put(os, r.bound);
        os << ',';
        put(os, r.mc_estimate);
        os << ',';
        put(os, r.mc_se);
        os << '\n';
    }
    return os.str();
}

} // namespace brokershard
