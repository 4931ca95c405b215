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

#include <json.hpp>

#include "brokershard/baselines/policies.hpp"
#include "brokershard/ledger/types.hpp"

namespace brokershard {

struct network_config {
    double latency_ms = 100.0;
    /// Uniform jitter half-width around latency_ms.
    double jitter_ms = 20.0;
    /// Per-message loss, applied to second halves and failure proofs only.
    double drop_prob = 0.0;
    bool operator==(const network_config &) const = default;
};

/// Per-CTX probabilities that the payer (threat1) or the broker (threat2)
/// races the CTX with a conflicting transfer on the same nonce.
struct adversary_config {
    double threat1_prob = 0.0;
    double threat2_prob = 0.0;
    bool operator==(const adversary_config &) const = default;
};

struct sim_config {
    policy_kind policy = policy_kind::brokerchain;
    std::size_t shards = 8;
    std::size_t brokers = 40;
    std::size_t txs_per_epoch = 10000;
    double arrival_rate = 500.0;
    double block_interval_s = 8.0;
    std::size_t block_capacity = 2000;
    std::size_t epoch_blocks = 10;
    height_t h_lock = 40;
    /// Replace h_lock after the first epoch by the recommendation derived
    /// from the measured mean CTX latency.
    bool h_lock_auto = false;
    double epsilon = 0.1;
    network_config network;
    adversary_config adversary;
    bool trusted_brokers = false;
    std::uint64_t seed = 1;
    std::uint64_t account_balance = 1'000'000'000;
    /// Total genesis stake per broker, segmented evenly across shards.
    std::uint64_t broker_stake = 1'000'000'000;
    /// Epochs allowed after the last workload epoch for outstanding work.
    std::size_t drain_epochs = 100;
    /// Check token conservation after every block.
    bool audit = true;
    /// Keep per-block and CTX-transition logs in the run output.
    bool record_logs = true;

    /// Throws config_invalid.
    void validate() const;
    bool operator==(const sim_config &) const = default;
};

nlohmann::json to_json(const sim_config &c);
/// Missing keys keep their defaults; unknown keys throw config_invalid.
sim_config sim_config_from_json(const nlohmann::json &j);

} // namespace brokershard
