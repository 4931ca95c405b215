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

#include "brokershard/broker/ctx_record.hpp"

#include <ostream>

#include "brokershard/common/error.hpp"

namespace brokershard {

std::string_view to_string(ctx_phase p) noexcept
{
    switch (p) {
    case ctx_phase::created: return "Created";
    case ctx_phase::theta1_pending: return "Theta1Pending";
    case ctx_phase::theta1_confirmed: return "Theta1Confirmed";
    case ctx_phase::theta2_pending: return "Theta2Pending";
    case ctx_phase::succeeded: return "Succeeded";
    case ctx_phase::failure_detected: return "FailureDetected";
    case ctx_phase::theta1_at_dest_confirmed: return "Theta1AtDestConfirmed";
    case ctx_phase::proof_sent: return "ProofSent";
    case ctx_phase::refunded: return "Refunded";
    }
    return "?";
}

bool is_terminal(ctx_phase p) noexcept
{
    return p == ctx_phase::succeeded || p == ctx_phase::refunded;
}

bool is_allowed_transition(ctx_phase from, ctx_phase to) noexcept
{
    using enum ctx_phase;
    switch (from) {
    case created: return to == theta1_pending;
    case theta1_pending: return to == theta1_confirmed || to == failure_detected || to == theta2_pending;
    case theta1_confirmed: return to == theta2_pending || to == failure_detected;
    case theta2_pending: return to == succeeded || to == failure_detected;
    case failure_detected: return to == theta1_at_dest_confirmed;
    case theta1_at_dest_confirmed: return to == proof_sent;
    case proof_sent: return to == refunded;
    case succeeded:
    case refunded: return false;
    }
    return false;
}

ctx_audit_log::ctx_audit_log(std::ostream *out) : _out{out}
{
    if (_out)
        *_out << "sim_time_ms,ctx_id,phase_from,phase_to,shard,height\n";
}

void ctx_audit_log::record(sim_time at, const digest &ctx, ctx_phase from, ctx_phase to, shard_id shard,
                           height_t height)
{
    ++_lines;
    if (_out)
        *_out << to_ms(at) << ',' << ctx.hex() << ',' << to_string(from) << ',' << to_string(to) << ',' << shard << ','
              << height << '\n';
}

void cross_tx_record::transition(ctx_phase to, sim_time at, shard_id shard, height_t height, ctx_audit_log *log)
{
    if (!is_allowed_transition(phase, to)) [[unlikely]]
        throw error(errc::illegal_transition, std::string{to_string(phase)} + " -> " + std::string{to_string(to)});
    if (log)
        log->record(at, ctx_id, phase, to, shard, height);
    phase = to;
    if (is_terminal(to))
        resolved_at = at;
}

} // namespace brokershard
