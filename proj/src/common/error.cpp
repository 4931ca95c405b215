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

#include "brokershard/common/error.hpp"

namespace brokershard {

std::string_view to_string(errc code) noexcept
{
    switch (code) {
    case errc::unknown_account: return "UnknownAccount";
    case errc::empty_list: return "EmptyList";
    case errc::insufficient_balance: return "InsufficientBalance";
    case errc::nonce_mismatch: return "NonceMismatch";
    case errc::infeasible_balance: return "InfeasibleBalance";
    case errc::uncovered_vertex: return "UncoveredVertex";
    case errc::insufficient_broker_stake: return "InsufficientBrokerStake";
    case errc::bad_payer_signature: return "BadPayerSignature";
    case errc::bad_signature: return "BadSignature";
    case errc::insufficient_broker_balance: return "InsufficientBrokerBalance";
    case errc::deadline_exceeded: return "DeadlineExceeded";
    case errc::already_resolved: return "AlreadyResolved";
    case errc::not_included: return "NotIncluded";
    case errc::bad_proof: return "BadProof";
    case errc::lock_expired: return "LockExpired";
    case errc::premature_release: return "PrematureRelease";
    case errc::not_succeeded: return "NotSucceeded";
    case errc::no_eligible_broker: return "NoEligibleBroker";
    case errc::duplicate: return "Duplicate";
    case errc::validation_failed: return "ValidationFailed";
    case errc::height_gap: return "HeightGap";
    case errc::inconsistent_migration: return "InconsistentMigration";
    case errc::illegal_transition: return "IllegalTransition";
    case errc::config_invalid: return "ConfigInvalid";
    case errc::domain_error: return "DomainError";
    case errc::infeasible: return "Infeasible";
    case errc::parse_error: return "ParseError";
    case errc::missing_column: return "MissingColumn";
    case errc::negative_latency: return "NegativeLatency";
    case errc::io_error: return "IoError";
    }
    return "Unknown";
}

} // namespace brokershard
