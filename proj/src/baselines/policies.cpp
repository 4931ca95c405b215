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

#include "brokershard/baselines/policies.hpp"

#include <algorithm>
#include <bit>

#include "brokershard/common/error.hpp"

namespace brokershard {

std::string_view to_string(policy_kind p) noexcept
{
    switch (p) {
    case policy_kind::brokerchain: return "brokerchain";
    case policy_kind::monoxide: return "monoxide";
    case policy_kind::lbf: return "lbf";
    case policy_kind::metis_only: return "metis";
    }
    return "unknown";
}

policy_kind parse_policy(std::string_view s)
{
    if (s == "brokerchain")
        return policy_kind::brokerchain;
    if (s == "monoxide")
        return policy_kind::monoxide;
    if (s == "lbf")
        return policy_kind::lbf;
    if (s == "metis" || s == "metis_only")
        return policy_kind::metis_only;
    throw error(errc::config_invalid, "unknown policy '" + std::string{s} + "'");
}

shard_id monoxide_placement(const address &a, std::size_t shard_count)
{
    if (shard_count == 0)
        throw error(errc::config_invalid, "shard count must be positive");
    const auto bits = static_cast<unsigned>(std::bit_width(shard_count - 1));
    if (bits == 0)
        return 0;
    std::uint64_t lead = 0;
    for (std::size_t i = 0; i < 8; ++i)
        lead = (lead << 8) | a.data[i];
    return static_cast<shard_id>((lead >> (64 - bits)) % shard_count);
}

std::map<address, shard_id> lbf_reassign(const std::map<address, std::uint64_t> &activity, std::size_t shard_count)
{
    if (shard_count == 0)
        throw error(errc::config_invalid, "shard count must be positive");
    std::vector<std::pair<address, std::uint64_t>> order(activity.begin(), activity.end());
    std::stable_sort(order.begin(), order.end(), [](const auto &x, const auto &y) { return x.second > y.second; });
    std::vector<std::uint64_t> load(shard_count, 0);
    std::map<address, shard_id> out;
    for (const auto &[a, w] : order) {
        const auto s = static_cast<shard_id>(std::min_element(load.begin(), load.end()) - load.begin());
        load[s] += w;
        out.emplace(a, s);
    }
    return out;
}

partition_result metis_only_policy(const state_graph &g, std::size_t shard_count, const partition_options &opts)
{
    if (!g.pinned().empty())
        throw error(errc::config_invalid, "partition-only policy has no brokers to pin");
    return partition_graph(g, shard_count, opts);
}

} // namespace brokershard
