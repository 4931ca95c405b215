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

#include <iosfwd>
#include <optional>

#include "brokershard/ledger/transaction.hpp"

namespace brokershard {

enum class ctx_phase : std::uint8_t {
    created,
    theta1_pending,
    theta1_confirmed,
    theta2_pending,
    succeeded,
    failure_detected,
    theta1_at_dest_confirmed,
    proof_sent,
    refunded,
};

std::string_view to_string(ctx_phase p) noexcept;
bool is_terminal(ctx_phase p) noexcept;
/// Edges of the lifecycle graph: one success chain, one failure chain that
/// branches off any pre-success phase, and a direct Θ1-pending to Θ2-pending
/// edge used only by trusted brokers.
bool is_allowed_transition(ctx_phase from, ctx_phase to) noexcept;

/// CSV sink with header `sim_time_ms,ctx_id,phase_from,phase_to,shard,height`.
class ctx_audit_log {
public:
    ctx_audit_log() = default;
    explicit ctx_audit_log(std::ostream *out);

    void record(sim_time at, const digest &ctx, ctx_phase from, ctx_phase to, shard_id shard, height_t height);
    std::size_t lines() const noexcept { return _lines; }

private:
    std::ostream *_out = nullptr;
    std::size_t _lines = 0;
};

using signed_amount = __int128;

struct cross_tx_record {
    digest ctx_id;
    raw_cross_tx raw;
    shard_id source = 0;
    shard_id dest = 0;
    height_t h_current = 0;
    std::optional<height_t> h_source;
    height_t deadline = 0;
    std::optional<height_t> lock_end;
    ctx_phase phase = ctx_phase::created;
    sim_time created_at = 0;
    std::optional<sim_time> resolved_at;
    /// Source-shard height at which the record resolved.
    std::optional<height_t> resolved_source_height;
    std::uint64_t origin = 0;
    bool trusted = false;

    /// Per-party token effects attributable to this CTX.
    signed_amount payer_delta = 0;
    signed_amount payee_delta = 0;
    signed_amount broker_delta = 0;
    std::uint32_t theta2_inclusions = 0;
    std::uint32_t theta1_dest_inclusions = 0;
    std::uint32_t proofs_sent = 0;

    /// Throws illegal_transition if the edge is not in the lifecycle graph.
    void transition(ctx_phase to, sim_time at, shard_id shard, height_t height, ctx_audit_log *log = nullptr);
    bool resolved() const noexcept { return is_terminal(phase); }
};

} // namespace brokershard
