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

#include <map>
#include <string_view>

#include "brokershard/partition/partitioner.hpp"

namespace brokershard {

enum class policy_kind { brokerchain, monoxide, lbf, metis_only };
std::string_view to_string(policy_kind p) noexcept;
/// Accepts brokerchain, monoxide, lbf, metis (or metis_only). Throws config_invalid.
policy_kind parse_policy(std::string_view s);
inline constexpr policy_kind all_policies[] = {policy_kind::brokerchain, policy_kind::monoxide, policy_kind::lbf,
                                               policy_kind::metis_only};

/// Leading ⌈log2 S⌉ address bits as an integer, reduced mod S.
shard_id monoxide_placement(const address &a, std::size_t shard_count);

/// Greedy least-loaded assignment in descending activity order; ties in
/// activity by address, ties in load by lowest shard.
std::map<address, shard_id> lbf_reassign(const std::map<address, std::uint64_t> &activity, std::size_t shard_count);

/// Balanced partition with no brokers; cross-shard transfers relay.
partition_result metis_only_policy(const state_graph &g, std::size_t shard_count, const partition_options &opts = {});

} // namespace brokershard
