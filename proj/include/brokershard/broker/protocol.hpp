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

#include "brokershard/broker/ctx_record.hpp"
#include "brokershard/ledger/block.hpp"
#include "brokershard/msst/placement_registry.hpp"

namespace brokershard {

/// Θ2 deadline in source-shard heights: H_current + ⌊H_lock / 2⌋.
constexpr height_t theta2_deadline(height_t h_current, height_t h_lock) noexcept { return h_current + h_lock / 2; }

/// Payer-signed raw CTX with explicitly reserved nonces. Requires H_lock ≥ 2 and a payer
/// balance of at least `value` in the source shard.
raw_cross_tx create_raw_ctx(const address &payer, const address &payee, amount_t value, const address &broker,
                            height_t h_lock, nonce_t payer_nonce, nonce_t broker_nonce, amount_t payer_balance,
                            const key_ring &keys);
/// Raw CTX taking η from the live slices: the payer's in the source shard and the
/// broker's in the destination shard.
raw_cross_tx create_raw_ctx(const address &payee, amount_t value, height_t h_lock, const account_state &payer_state,
                            const account_state &broker_state, const key_ring &keys);

/// First half: broker checks σ_A and signs ⟨Type1, Θ_raw, H_current⟩.
half_tx create_theta1(const raw_cross_tx &raw, height_t h_current, const key_ring &keys);
/// Second half: broker signs ⟨Type2, Θ_raw⟩.
half_tx create_theta2(const raw_cross_tx &raw, const key_ring &keys);

bool verify_payer_signature(const raw_cross_tx &raw, const key_ring &keys);
bool verify_broker_signature(const half_tx &half, const key_ring &keys);

struct ctx_route {
    shard_id source = 0;
    shard_id dest = 0;
};

/// Θ1 admission: signatures, source and destination from Ψ, and payer η and ω in
/// the source tree. Throws bad_signature, nonce_mismatch, insufficient_balance.
ctx_route validate_and_route_theta1(const half_tx &theta1, const placement_registry &registry,
                                    const shard_state_tree &source_tree, const key_ring &keys);

/// Θ1 at the source: debits the payer, consumes η_payer and locks v over
/// [H_source, H_source + H_lock]. Throws already_resolved if the CTX already
/// has a lock entry (including a refund marker), nonce_mismatch,
/// insufficient_balance. Nothing changes on error.
lock_entry confirm_theta1(shard_state_tree &source, const half_tx &theta1, height_t h_source);

/// Pool admission for Θ2 at the destination.
void check_theta2_admissible(const shard_state_tree &dest, const half_tx &theta2);

struct theta2_effect {
    /// False when the payee no longer lives in this shard; the caller must
    /// forward `value` to the payee's current home.
    bool payee_credited = true;
};

/// Θ2 at the destination: pays the payee from the broker's destination slice if the latest
/// known source height is still below the deadline. Throws deadline_exceeded,
/// already_resolved, nonce_mismatch, insufficient_broker_balance. Nothing
/// changes on error.
theta2_effect confirm_theta2(shard_state_tree &dest, const half_tx &theta2, height_t latest_known_source_height,
                             height_t deadline);

/// Canonical destination-leg Θ1 transaction; γ's Merkle leaf is its digest.
transaction make_theta1_dest_tx(const half_tx &theta1);

/// Failure path: records Θ1 at the destination and consumes η_broker so Θ2 can never
/// confirm. Returns whether η_broker was still fresh (false when the broker
/// already spent it). Throws already_resolved if Θ2 was confirmed first.
bool include_theta1_at_dest(shard_state_tree &dest, const half_tx &theta1);

/// Failure proof γ = ⟨Θ1, dest, H_dest, Merkle path⟩ for the destination-leg Θ1 of
/// `ctx` in `block`. Throws not_included.
failure_proof build_failure_proof(const tx_block &block, const digest &ctx);

struct refund_effect {
    /// False when no lock existed; a zero-amount refund marker was stored.
    bool lock_refunded = false;
    amount_t amount = 0;
};

/// Refund: verifies γ against the destination header and refunds the lock,
/// also after lock_end while the lock is still held. Throws bad_proof,
/// lock_expired (released to the broker), already_resolved.
refund_effect confirm_failure_proof(shard_state_tree &source, const failure_proof &gamma,
                                    const block_header &dest_header, height_t current_source_height);

/// Returns the broker's payout after strict expiry of a lock whose CTX
/// succeeded. Throws premature_release, not_succeeded, already_resolved.
amount_t release_lock(shard_state_tree &source, const digest &ctx, height_t current_source_height, bool succeeded);

/// ⌈20 × average CTX latency / block interval⌉, at least 2.
height_t recommend_lock_duration(double avg_ctx_latency_s, double block_interval_s);

} // namespace brokershard
