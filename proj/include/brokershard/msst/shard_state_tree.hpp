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

#include <map>
#include <optional>

#include "brokershard/ledger/merkle.hpp"
#include "brokershard/msst/account_state.hpp"

namespace brokershard {

enum class lock_status : std::uint8_t { locked, released_to_broker, refunded_to_payer };
std::string_view to_string(lock_status s) noexcept;

struct lock_entry {
    digest ctx_id;
    address owner_broker;
    address refund_to;
    amount_t amount = 0;
    height_t lock_start = 0;
    height_t lock_end = 0;
    lock_status status = lock_status::locked;

    bool operator==(const lock_entry &) const = default;
};

/// What the destination shard recorded for a CTX: exactly one of the two
/// halves may ever be included there.
enum class dest_outcome : std::uint8_t { theta2_confirmed, theta1_included };

/// mSST of one shard: account slices whose Ψ bit for this shard is set, the
/// token locks created by Θ1, and destination-side CTX outcomes.
class shard_state_tree {
public:
    shard_state_tree() = default;
    shard_state_tree(shard_id shard, std::size_t shard_count) : _shard{shard}, _shard_count{shard_count} {}

    shard_id shard() const noexcept { return _shard; }
    std::size_t shard_count() const noexcept { return _shard_count; }

    bool contains(const address &a) const { return _accounts.contains(a); }
    const account_state &get(const address &a) const;
    const account_state *find(const address &a) const;
    const std::map<address, account_state> &accounts() const noexcept { return _accounts; }

    /// Inserts a slice; requires storage bit for this shard.
    void insert(account_state st);
    account_state remove(const address &a);

    /// from.ω −= value; to.ω += value; consumes `expected_nonce` for `from`.
    void apply_transfer(const address &from, const address &to, amount_t value, nonce_t expected_nonce);
    void credit(const address &a, amount_t value);
    void debit(const address &a, amount_t value);
    /// Throws nonce_mismatch if already consumed.
    void consume_nonce(const address &a, nonce_t n);
    /// Attempts to consume; returns whether it was fresh.
    bool try_consume_nonce(const address &a, nonce_t n);
    void set_storage_map(const address &a, const storage_map &m);

    const std::map<digest, lock_entry> &locks() const noexcept { return _locks; }
    const lock_entry *find_lock(const digest &ctx) const;
    void put_lock(lock_entry entry);
    lock_entry &lock_at(const digest &ctx);

    const std::map<digest, dest_outcome> &dest_outcomes() const noexcept { return _dest; }
    std::optional<dest_outcome> dest_outcome_of(const digest &ctx) const;
    void set_dest_outcome(const digest &ctx, dest_outcome o);

    amount_t total_value() const;
    amount_t total_locked() const;

    /// Merkle root over account leaves in address order; empty_root() when empty.
    digest compute_state_root() const;

    bool operator==(const shard_state_tree &) const = default;

private:
    account_state &mut(const address &a);

    shard_id _shard = 0;
    std::size_t _shard_count = 1;
    std::map<address, account_state> _accounts;
    std::map<digest, lock_entry> _locks;
    std::map<digest, dest_outcome> _dest;
};

} // namespace brokershard
