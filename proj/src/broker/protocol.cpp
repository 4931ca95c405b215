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

#include "brokershard/broker/protocol.hpp"

#include <cmath>

#include "brokershard/common/error.hpp"

namespace brokershard {

raw_cross_tx create_raw_ctx(const address &payer, const address &payee, amount_t value, const address &broker,
                            height_t h_lock, nonce_t payer_nonce, nonce_t broker_nonce, amount_t payer_balance,
                            const key_ring &keys)
{
    if (h_lock < 2)
        throw error(errc::config_invalid, "H_lock must be at least 2, got " + std::to_string(h_lock));
    if (payer_balance < value)
        throw error(errc::insufficient_balance, payer.hex() + " holds " + to_string(payer_balance) + " < "
                                                    + to_string(value));
    raw_cross_tx raw;
    raw.payer = payer;
    raw.payee = payee;
    raw.value = value;
    raw.broker = broker;
    raw.lock_duration = h_lock;
    raw.payer_nonce = payer_nonce;
    raw.broker_nonce = broker_nonce;
    raw.payer_sig = sign(raw.signed_payload(), payer, keys.secret_for(payer));
    return raw;
}

raw_cross_tx create_raw_ctx(const address &payee, amount_t value, height_t h_lock, const account_state &payer_state,
                            const account_state &broker_state, const key_ring &keys)
{
    return create_raw_ctx(payer_state.addr, payee, value, broker_state.addr, h_lock, payer_state.nonce.next(),
                          broker_state.nonce.next(), payer_state.value, keys);
}

bool verify_payer_signature(const raw_cross_tx &raw, const key_ring &keys)
{
    return verify(raw.signed_payload(), raw.payer_sig, raw.payer, keys.secret_for(raw.payer));
}

bool verify_broker_signature(const half_tx &half, const key_ring &keys)
{
    return verify(half.signed_payload(), half.broker_sig, half.raw.broker, keys.secret_for(half.raw.broker));
}

namespace {

half_tx broker_sign(half_tx h, const key_ring &keys)
{
    h.broker_sig = sign(h.signed_payload(), h.raw.broker, keys.secret_for(h.raw.broker));
    return h;
}

} // namespace

half_tx create_theta1(const raw_cross_tx &raw, height_t h_current, const key_ring &keys)
{
    if (!verify_payer_signature(raw, keys))
        throw error(errc::bad_payer_signature, "sigma_A does not verify for " + raw.payer.hex());
    return broker_sign(half_tx{half_kind::type1, raw, h_current, {}}, keys);
}

half_tx create_theta2(const raw_cross_tx &raw, const key_ring &keys)
{
    return broker_sign(half_tx{half_kind::type2, raw, std::nullopt, {}}, keys);
}

ctx_route validate_and_route_theta1(const half_tx &theta1, const placement_registry &registry,
                                    const shard_state_tree &source_tree, const key_ring &keys)
{
    if (theta1.kind != half_kind::type1 || !theta1.current_height)
        throw error(errc::validation_failed, "not a first-half transaction");
    if (!verify_payer_signature(theta1.raw, keys))
        throw error(errc::bad_signature, "payer signature");
    if (!verify_broker_signature(theta1, keys))
        throw error(errc::bad_signature, "broker signature");
    const ctx_route route{registry.home_of(theta1.raw.payer), registry.home_of(theta1.raw.payee)};
    if (route.source != source_tree.shard())
        throw error(errc::validation_failed, "payer lives in shard " + std::to_string(route.source));
    const auto &payer = source_tree.get(theta1.raw.payer);
    if (payer.nonce.is_consumed(theta1.raw.payer_nonce))
        throw error(errc::nonce_mismatch, "payer nonce " + std::to_string(theta1.raw.payer_nonce) + " already used");
    if (payer.value < theta1.raw.value)
        throw error(errc::insufficient_balance, theta1.raw.payer.hex());
    return route;
}

lock_entry confirm_theta1(shard_state_tree &source, const half_tx &theta1, height_t h_source)
{
    const auto ctx = theta1.ctx_id();
    if (source.find_lock(ctx))
        throw error(errc::already_resolved, "ctx " + ctx.hex() + " already has a lock entry");
    const auto &payer = source.get(theta1.raw.payer);
    if (payer.nonce.is_consumed(theta1.raw.payer_nonce))
        throw error(errc::nonce_mismatch, "payer nonce " + std::to_string(theta1.raw.payer_nonce) + " already used");
    if (payer.value < theta1.raw.value)
        throw error(errc::insufficient_balance, theta1.raw.payer.hex());
    source.consume_nonce(theta1.raw.payer, theta1.raw.payer_nonce);
    source.debit(theta1.raw.payer, theta1.raw.value);
    lock_entry lock;
    lock.ctx_id = ctx;
    lock.owner_broker = theta1.raw.broker;
    lock.refund_to = theta1.raw.payer;
    lock.amount = theta1.raw.value;
    lock.lock_start = h_source;
    lock.lock_end = h_source + theta1.raw.lock_duration;
    source.put_lock(lock);
    return lock;
}

void check_theta2_admissible(const shard_state_tree &dest, const half_tx &theta2)
{
    if (dest.dest_outcome_of(theta2.ctx_id()))
        throw error(errc::already_resolved, "ctx already resolved at destination");
    const auto &broker = dest.get(theta2.raw.broker);
    if (broker.nonce.is_consumed(theta2.raw.broker_nonce))
        throw error(errc::nonce_mismatch, "broker nonce " + std::to_string(theta2.raw.broker_nonce) + " already used");
    if (broker.value < theta2.raw.value)
        throw error(errc::insufficient_broker_balance, theta2.raw.broker.hex());
}

theta2_effect confirm_theta2(shard_state_tree &dest, const half_tx &theta2, height_t latest_known_source_height,
                             height_t deadline)
{
    if (latest_known_source_height >= deadline)
        throw error(errc::deadline_exceeded, "source height " + std::to_string(latest_known_source_height)
                                                 + " >= deadline " + std::to_string(deadline));
    check_theta2_admissible(dest, theta2);
    const auto &raw = theta2.raw;
    dest.consume_nonce(raw.broker, raw.broker_nonce);
    dest.debit(raw.broker, raw.value);
    theta2_effect effect;
    if (dest.contains(raw.payee))
        dest.credit(raw.payee, raw.value);
    else
        effect.payee_credited = false;
    dest.set_dest_outcome(theta2.ctx_id(), dest_outcome::theta2_confirmed);
    return effect;
}

transaction make_theta1_dest_tx(const half_tx &theta1)
{
    return make_theta1_tx(theta1, ctx_leg::destination, 0, 0);
}

bool include_theta1_at_dest(shard_state_tree &dest, const half_tx &theta1)
{
    if (dest.dest_outcome_of(theta1.ctx_id()))
        throw error(errc::already_resolved, "ctx already resolved at destination");
    const bool fresh = dest.try_consume_nonce(theta1.raw.broker, theta1.raw.broker_nonce);
    dest.set_dest_outcome(theta1.ctx_id(), dest_outcome::theta1_included);
    return fresh;
}

failure_proof build_failure_proof(const tx_block &block, const digest &ctx)
{
    const auto leaves = block.tx_digests();
    for (std::size_t i = 0; i < block.txs.size(); ++i) {
        const auto &tx = block.txs[i];
        if (tx.kind != tx_kind::theta1 || tx.leg != ctx_leg::destination || tx.half().ctx_id() != ctx)
            continue;
        failure_proof gamma;
        gamma.theta1 = tx.half();
        gamma.dest = block.header.shard;
        gamma.dest_height = block.header.height;
        gamma.path = build_merkle_path(leaves, i);
        return gamma;
    }
    throw error(errc::not_included, "ctx " + ctx.hex() + " not in block " + std::to_string(block.header.height));
}

refund_effect confirm_failure_proof(shard_state_tree &source, const failure_proof &gamma,
                                    const block_header &dest_header, height_t current_source_height)
{
    if (dest_header.shard != gamma.dest || dest_header.height != gamma.dest_height)
        throw error(errc::bad_proof, "header does not match the proof's block");
    const auto leaf = make_theta1_dest_tx(gamma.theta1).id();
    if (!verify_merkle_path(leaf, gamma.path, dest_header.tx_root))
        throw error(errc::bad_proof, "merkle path does not reach tx_root");
    const auto ctx = gamma.theta1.ctx_id();
    refund_effect effect;
    if (const auto *existing = source.find_lock(ctx)) {
        if (existing->status == lock_status::refunded_to_payer)
            throw error(errc::already_resolved, "ctx already refunded");
        // A lock still held past lock_end can only have failed: release
        // requires a confirmed second half, which the included Θ1 rules out.
        if (existing->status == lock_status::released_to_broker)
            throw error(errc::lock_expired, "lock released to the broker at " + std::to_string(existing->lock_end));
        if (!source.contains(existing->refund_to))
            throw error(errc::unknown_account, existing->refund_to.hex() + " left the source shard");
        auto &lock = source.lock_at(ctx);
        source.credit(lock.refund_to, lock.amount);
        lock.status = lock_status::refunded_to_payer;
        effect.lock_refunded = true;
        effect.amount = lock.amount;
        return effect;
    }
    lock_entry marker;
    marker.ctx_id = ctx;
    marker.owner_broker = gamma.theta1.raw.broker;
    marker.refund_to = gamma.theta1.raw.payer;
    marker.amount = 0;
    marker.lock_start = current_source_height;
    marker.lock_end = current_source_height + 1;
    marker.status = lock_status::refunded_to_payer;
    source.put_lock(marker);
    return effect;
}

amount_t release_lock(shard_state_tree &source, const digest &ctx, height_t current_source_height, bool succeeded)
{
    auto &lock = source.lock_at(ctx);
    if (lock.status != lock_status::locked)
        throw error(errc::already_resolved, "lock is " + std::string{to_string(lock.status)});
    if (current_source_height <= lock.lock_end)
        throw error(errc::premature_release, "height " + std::to_string(current_source_height) + " <= lock end "
                                                 + std::to_string(lock.lock_end));
    if (!succeeded)
        throw error(errc::not_succeeded, "ctx " + ctx.hex() + " has not succeeded");
    source.credit(lock.owner_broker, lock.amount);
    lock.status = lock_status::released_to_broker;
    return lock.amount;
}

height_t recommend_lock_duration(double avg_ctx_latency_s, double block_interval_s)
{
    if (!(avg_ctx_latency_s > 0) || !(block_interval_s > 0))
        throw error(errc::domain_error, "latency and block interval must be positive");
    const auto blocks = std::ceil(20.0 * avg_ctx_latency_s / block_interval_s - 1e-9);
    return std::max<height_t>(2, static_cast<height_t>(blocks));
}

} // namespace brokershard
