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
#include <variant>

#include "brokershard/ledger/crypto.hpp"
#include "brokershard/ledger/encoding.hpp"
#include "brokershard/ledger/merkle.hpp"

namespace brokershard {

enum class tx_kind : std::uint8_t { plain, theta1, theta2, relay, failure_proof };
std::string_view to_string(tx_kind k) noexcept;

/// Which shard a Θ1 inclusion targets: the payer's source shard (lock) or the
/// destination shard on the failure path (consumes the broker nonce).
enum class ctx_leg : std::uint8_t { source, destination };

/// Θ_raw. The payer address is carried explicitly because mock signatures do
/// not support public-key recovery.
struct raw_cross_tx {
    address payer;
    address payee;
    amount_t value = 0;
    address broker;
    height_t lock_duration = 0;
    nonce_t payer_nonce = 0;
    nonce_t broker_nonce = 0;
    signature payer_sig;

    /// What σ_A signs: ⟨B, v, C, H_lock, η_payer, η_broker⟩.
    bytes signed_payload() const;
    encoder encode() const;
    /// Identifier of the cross-shard transaction: digest of Θ_raw.
    digest id() const;
    bool operator==(const raw_cross_tx &) const = default;
};

enum class half_kind : std::uint8_t { type1, type2 };

struct half_tx {
    half_kind kind = half_kind::type1;
    raw_cross_tx raw;
    std::optional<height_t> current_height;
    signature broker_sig;

    bytes signed_payload() const;
    encoder encode() const;
    digest ctx_id() const { return raw.id(); }
    bool operator==(const half_tx &) const = default;
};

struct failure_proof {
    half_tx theta1;
    shard_id dest = 0;
    height_t dest_height = 0;
    merkle_path path;

    encoder encode() const;
    bool operator==(const failure_proof &) const = default;
};

struct relay_deposit {
    std::uint64_t seq = 0;
    /// False for credits forwarded after a migration; those do not confirm
    /// the originating workload transaction a second time.
    bool confirms_origin = true;
    bool operator==(const relay_deposit &) const = default;
};

using tx_payload = std::variant<std::monostate, half_tx, failure_proof, relay_deposit>;

struct transaction {
    address from;
    address to;
    amount_t value = 0;
    nonce_t nonce = 0;
    tx_kind kind = tx_kind::plain;
    ctx_leg leg = ctx_leg::source;
    tx_payload payload;
    sim_time timestamp = 0;
    /// Workload transaction this one belongs to; 0 for system or adversarial traffic.
    std::uint64_t origin = 0;

    encoder encode() const;
    digest id() const;

    const half_tx &half() const { return std::get<half_tx>(payload); }
    const failure_proof &proof() const { return std::get<failure_proof>(payload); }
    const relay_deposit &relay() const { return std::get<relay_deposit>(payload); }

    bool operator==(const transaction &) const = default;
};

transaction make_plain(const address &from, const address &to, amount_t value, nonce_t nonce,
                       sim_time at = 0, std::uint64_t origin = 0);
transaction make_theta1_tx(const half_tx &theta1, ctx_leg leg, sim_time at, std::uint64_t origin);
transaction make_theta2_tx(const half_tx &theta2, sim_time at, std::uint64_t origin);
transaction make_failure_proof_tx(const failure_proof &gamma, sim_time at, std::uint64_t origin);
/// Relay deposit credited at the destination (leg = destination).
transaction make_relay_tx(const address &from, const address &to, amount_t value, relay_deposit body,
                          sim_time at, std::uint64_t origin);
/// Relay deduction debited from the payer at the source (leg = source).
transaction make_relay_deduct(const address &from, const address &to, amount_t value, nonce_t nonce,
                              std::uint64_t seq, sim_time at, std::uint64_t origin);

} // namespace brokershard
