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

#include "brokershard/ledger/transaction.hpp"

#include <cstdint>

namespace brokershard {

std::string_view to_string(tx_kind k) noexcept
{
    switch (k) {
    case tx_kind::plain: return "plain";
    case tx_kind::theta1: return "theta1";
    case tx_kind::theta2: return "theta2";
    case tx_kind::relay: return "relay";
    case tx_kind::failure_proof: return "failure_proof";
    }
    return "?";
}

bytes raw_cross_tx::signed_payload() const
{
    encoder e;
    e.fixed(payee).amount(value).fixed(broker).u64(lock_duration).u64(payer_nonce).u64(broker_nonce);
    return std::move(e).take();
}

encoder raw_cross_tx::encode() const
{
    encoder e;
    e.fixed(payer).fixed(payee).amount(value).fixed(broker).u64(lock_duration).u64(payer_nonce).u64(broker_nonce)
        .fixed(payer_sig.value);
    return e;
}

digest raw_cross_tx::id() const
{
    return sha256(byte_span{encode().buffer()});
}

bytes half_tx::signed_payload() const
{
    encoder e;
    e.u8(static_cast<std::uint8_t>(kind)).nested(raw.encode()).u8(current_height ? 1 : 0).u64(current_height.value_or(0));
    return std::move(e).take();
}

encoder half_tx::encode() const
{
    encoder e;
    e.field(byte_span{signed_payload()}).fixed(broker_sig.value);
    return e;
}

encoder failure_proof::encode() const
{
    encoder e;
    e.nested(theta1.encode()).u64(dest).u64(dest_height).u64(path.size());
    for (const auto &step : path)
        e.fixed(step.sibling).u8(static_cast<std::uint8_t>(step.side));
    return e;
}

encoder transaction::encode() const
{
    encoder e;
    e.fixed(from).fixed(to).amount(value).u64(nonce).u8(static_cast<std::uint8_t>(kind))
        .u8(static_cast<std::uint8_t>(leg)).u64(static_cast<std::uint64_t>(timestamp)).u64(origin);
    std::visit(
        [&](const auto &p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, std::monostate>)
                e.u8(0);
            else if constexpr (std::is_same_v<T, relay_deposit>)
                e.u8(3).u64(p.seq).u8(p.confirms_origin ? 1 : 0);
            else
                e.nested(p.encode());
        },
        payload);
    return e;
}

digest transaction::id() const
{
    return sha256(byte_span{encode().buffer()});
}

transaction make_plain(const address &from, const address &to, amount_t value, nonce_t nonce, sim_time at,
                       std::uint64_t origin)
{
    transaction tx;
    tx.from = from;
    tx.to = to;
    tx.value = value;
    tx.nonce = nonce;
    tx.kind = tx_kind::plain;
    tx.timestamp = at;
    tx.origin = origin;
    return tx;
}

transaction make_theta1_tx(const half_tx &theta1, ctx_leg leg, sim_time at, std::uint64_t origin)
{
    transaction tx;
    tx.from = theta1.raw.payer;
    tx.to = theta1.raw.broker;
    tx.value = theta1.raw.value;
    tx.nonce = leg == ctx_leg::source ? theta1.raw.payer_nonce : theta1.raw.broker_nonce;
    tx.kind = tx_kind::theta1;
    tx.leg = leg;
    tx.payload = theta1;
    tx.timestamp = at;
    tx.origin = origin;
    return tx;
}

transaction make_theta2_tx(const half_tx &theta2, sim_time at, std::uint64_t origin)
{
    transaction tx;
    tx.from = theta2.raw.broker;
    tx.to = theta2.raw.payee;
    tx.value = theta2.raw.value;
    tx.nonce = theta2.raw.broker_nonce;
    tx.kind = tx_kind::theta2;
    tx.payload = theta2;
    tx.timestamp = at;
    tx.origin = origin;
    return tx;
}

transaction make_failure_proof_tx(const failure_proof &gamma, sim_time at, std::uint64_t origin)
{
    transaction tx;
    tx.from = gamma.theta1.raw.broker;
    tx.to = gamma.theta1.raw.payer;
    tx.value = gamma.theta1.raw.value;
    tx.kind = tx_kind::failure_proof;
    tx.payload = gamma;
    tx.timestamp = at;
    tx.origin = origin;
    return tx;
}

transaction make_relay_tx(const address &from, const address &to, amount_t value, relay_deposit body, sim_time at,
                          std::uint64_t origin)
{
    transaction tx;
    tx.from = from;
    tx.to = to;
    tx.value = value;
    tx.kind = tx_kind::relay;
    tx.leg = ctx_leg::destination;
    tx.payload = body;
    tx.timestamp = at;
    tx.origin = origin;
    return tx;
}

transaction make_relay_deduct(const address &from, const address &to, amount_t value, nonce_t nonce,
                              std::uint64_t seq, sim_time at, std::uint64_t origin)
{
    transaction tx;
    tx.from = from;
    tx.to = to;
    tx.value = value;
    tx.nonce = nonce;
    tx.kind = tx_kind::relay;
    tx.leg = ctx_leg::source;
    tx.payload = relay_deposit{seq, true};
    tx.timestamp = at;
    tx.origin = origin;
    return tx;
}

} // namespace brokershard
