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

#include <stdexcept>
#include <string>
#include <string_view>

namespace brokershard {

enum class errc {
    unknown_account,
    empty_list,
    insufficient_balance,
    nonce_mismatch,
    infeasible_balance,
    uncovered_vertex,
    insufficient_broker_stake,
    bad_payer_signature,
    bad_signature,
    insufficient_broker_balance,
    deadline_exceeded,
    already_resolved,
    not_included,
    bad_proof,
    lock_expired,
    premature_release,
    not_succeeded,
    no_eligible_broker,
    duplicate,
    validation_failed,
    height_gap,
    inconsistent_migration,
    illegal_transition,
    config_invalid,
    domain_error,
    infeasible,
    parse_error,
    missing_column,
    negative_latency,
    io_error,
};

std::string_view to_string(errc code) noexcept;

class error : public std::runtime_error {
public:
    error(errc code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), _code{code}
    {
    }

    explicit error(errc code)
        : std::runtime_error(std::string(to_string(code))), _code{code}
    {
    }

    errc code() const noexcept { return _code; }

private:
    errc _code;
};

} // namespace brokershard
