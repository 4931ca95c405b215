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

#include <set>

#include "brokershard/ledger/encoding.hpp"
#include "brokershard/ledger/storage_map.hpp"

namespace brokershard {

/// Per-(account, shard) replay counter η.
///
/// `next()` is the lowest nonce not yet consumed. A nonce may be consumed at
/// most once; consuming `next()` advances η by one (and past any nonces that
/// were already consumed out of order). Out-of-order consumption lets
/// concurrently reserved CTX nonces of one broker confirm independently.
class nonce_window {
public:
    nonce_window() = default;
    explicit nonce_window(nonce_t next) : _next{next} {}

    nonce_t next() const noexcept { return _next; }
    bool is_consumed(nonce_t n) const noexcept { return n < _next || _ahead.contains(n); }
    /// Returns false (and changes nothing) if `n` was already consumed.
    bool consume(nonce_t n);
    const std::set<nonce_t> &consumed_ahead() const noexcept { return _ahead; }

    void encode(encoder &e) const;
    bool operator==(const nonce_window &) const = default;

private:
    nonce_t _next = 0;
    std::set<nonce_t> _ahead;
};

enum class code_kind : std::uint8_t { user, contract };

/// 𝕊_μ = {X_μ | Ψ, η, ω, ζ}, the shard-local slice of one account.
struct account_state {
    address addr;
    storage_map storage;
    nonce_window nonce;
    amount_t value = 0;
    code_kind code = code_kind::user;
    digest code_hash; // meaningful only for contracts; never executed

    /// address ‖ Ψ ‖ η ‖ ω ‖ ζ, each length-prefixed.
    encoder encode() const;
    digest leaf() const;
    bool operator==(const account_state &) const = default;
};

/// Fresh user-account slice with η = 0.
account_state make_account(const address &a, storage_map m, amount_t value);

} // namespace brokershard
