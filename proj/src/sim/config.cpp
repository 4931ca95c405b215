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

#include "brokershard/sim/config.hpp"

#include <cmath>
#include <set>
#include <type_traits>

#include "brokershard/common/error.hpp"

namespace brokershard {

void sim_config::validate() const
{
    auto fail = [](const std::string &m) { throw error(errc::config_invalid, m); };
    if (shards == 0)
        fail("shards must be positive");
    if (txs_per_epoch == 0)
        fail("txs_per_epoch must be positive");
    if (!(arrival_rate > 0.0) || !std::isfinite(arrival_rate))
        fail("arrival_rate must be positive");
    if (!(block_interval_s > 0.0) || !std::isfinite(block_interval_s))
        fail("block_interval_s must be positive");
    if (block_capacity == 0)
        fail("block_capacity must be positive");
    if (epoch_blocks == 0)
        fail("epoch_blocks must be positive");
    if (h_lock < 2)
        fail("h_lock must be at least 2");
    if (!(epsilon >= 0.0))
        fail("epsilon must be non-negative");
    if (!(network.latency_ms >= 0.0) || !(network.jitter_ms >= 0.0))
        fail("latency and jitter must be non-negative");
    if (!(network.drop_prob >= 0.0 && network.drop_prob < 1.0))
        fail("drop_prob must be in [0, 1)");
    for (double p : {adversary.threat1_prob, adversary.threat2_prob})
        if (!(p >= 0.0 && p <= 1.0))
            fail("threat probabilities must be in [0, 1]");
    if (policy == policy_kind::brokerchain && brokers == 0)
        fail("brokerchain needs at least one broker");
    if (policy == policy_kind::brokerchain && broker_stake < shards)
        fail("broker_stake must cover one unit per shard");
}

nlohmann::json to_json(const sim_config &c)
{
    return {
        {"policy", std::string{to_string(c.policy)}},
        {"shards", c.shards},
        {"brokers", c.brokers},
        {"txs_per_epoch", c.txs_per_epoch},
        {"arrival_rate", c.arrival_rate},
        {"block_interval_s", c.block_interval_s},
        {"block_capacity", c.block_capacity},
        {"epoch_blocks", c.epoch_blocks},
        {"h_lock", c.h_lock_auto ? nlohmann::json("auto") : nlohmann::json(c.h_lock)},
        {"epsilon", c.epsilon},
        {"network", {{"latency_ms", c.network.latency_ms}, {"jitter_ms", c.network.jitter_ms},
                     {"drop_prob", c.network.drop_prob}}},
        {"adversary", {{"threat1_prob", c.adversary.threat1_prob}, {"threat2_prob", c.adversary.threat2_prob}}},
        {"trusted_brokers", c.trusted_brokers},
        {"seed", c.seed},
        {"account_balance", c.account_balance},
        {"broker_stake", c.broker_stake},
        {"drain_epochs", c.drain_epochs},
        {"audit", c.audit},
        {"record_logs", c.record_logs},
    };
}

namespace {

void reject_unknown(const nlohmann::json &j, std::initializer_list<std::string_view> keys, const std::string &where)
{
    if (!j.is_object())
        throw error(errc::config_invalid, where + " must be an object");
    const std::set<std::string_view> known(keys);
    for (const auto &[k, _] : j.items())
        if (!known.contains(k))
            throw error(errc::config_invalid, "unknown key '" + k + "' in " + where);
}

template<typename T>
void read(const nlohmann::json &j, const char *key, T &out)
{
    if (!j.contains(key))
        return;
    if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>)
        if (!j.at(key).is_number_unsigned())
            throw error(errc::config_invalid, std::string{key} + " must be a non-negative integer");
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception &e) {
        throw error(errc::config_invalid, std::string{key} + ": " + e.what());
    }
}

} // namespace

sim_config sim_config_from_json(const nlohmann::json &j)
{
    reject_unknown(j,
                   {"policy", "shards", "brokers", "txs_per_epoch", "arrival_rate", "block_interval_s",
                    "block_capacity", "epoch_blocks", "h_lock", "epsilon", "network", "adversary", "trusted_brokers",
                    "seed", "account_balance", "broker_stake", "drain_epochs", "audit", "record_logs"},
                   "config");
    sim_config c;
    if (j.contains("policy")) {
        if (!j["policy"].is_string())
            throw error(errc::config_invalid, "policy must be a string");
        c.policy = parse_policy(j["policy"].get<std::string>());
    }
    read(j, "shards", c.shards);
    read(j, "brokers", c.brokers);
    read(j, "txs_per_epoch", c.txs_per_epoch);
    read(j, "arrival_rate", c.arrival_rate);
    read(j, "block_interval_s", c.block_interval_s);
    read(j, "block_capacity", c.block_capacity);
    read(j, "epoch_blocks", c.epoch_blocks);
    if (j.contains("h_lock")) {
        const auto &h = j["h_lock"];
        if (h.is_string()) {
            if (h.get<std::string>() != "auto")
                throw error(errc::config_invalid, "h_lock must be an integer or \"auto\"");
            c.h_lock_auto = true;
        } else {
            read(j, "h_lock", c.h_lock);
        }
    }
    read(j, "epsilon", c.epsilon);
    if (j.contains("network")) {
        const auto &n = j["network"];
        reject_unknown(n, {"latency_ms", "jitter_ms", "drop_prob"}, "network");
        read(n, "latency_ms", c.network.latency_ms);
        read(n, "jitter_ms", c.network.jitter_ms);
        read(n, "drop_prob", c.network.drop_prob);
    }
    if (j.contains("adversary")) {
        const auto &a = j["adversary"];
        reject_unknown(a, {"threat1_prob", "threat2_prob"}, "adversary");
        read(a, "threat1_prob", c.adversary.threat1_prob);
        read(a, "threat2_prob", c.adversary.threat2_prob);
    }
    read(j, "trusted_brokers", c.trusted_brokers);
    read(j, "seed", c.seed);
    read(j, "account_balance", c.account_balance);
    read(j, "broker_stake", c.broker_stake);
    read(j, "drain_epochs", c.drain_epochs);
    read(j, "audit", c.audit);
    read(j, "record_logs", c.record_logs);
    return c;
}

} // namespace brokershard
