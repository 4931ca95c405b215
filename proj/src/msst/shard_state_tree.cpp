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

#include "brokershard/msst/shard_state_tree.hpp"

#include "brokershard/common/error.hpp"
#include "brokershard/ledger/merkle.hpp"

namespace brokershard {

std::string_view to_string(lock_status s) noexcept
{
    switch (s) {
    case lock_status::locked: return "Locked";
    case lock_status::released_to_broker: return "ReleasedToBroker";
    case lock_status::refunded_to_payer: return "RefundedToPayer";
    }
    return "?";
}

const account_state *shard_state_tree::find(const address &a) const
{
    const auto it = _accounts.find(a);
    return it == _accounts.end() ? nullptr : &it->second;
}

const account_state &shard_state_tree::get(const address &a) const
{
    if (const auto *st = find(a)) [[likely]]
        return *st;
    throw error(errc::unknown_account, a.hex() + " not in shard " + std::to_string(_shard));
}

account_state &shard_state_tree::mut(const address &a)
{
    const auto it = _accounts.find(a);
    if (it == _accounts.end()) [[unlikely]]
        throw error(errc::unknown_account, a.hex() + " not in shard " + std::to_string(_shard));
    return it->second;
}

void shard_state_tree::insert(account_state st)
{
    if (!st.storage.test(_shard))
        throw error(errc::inconsistent_migration, st.addr.hex() + " has no storage bit for shard " + std::to_string(_shard));
    if (_accounts.contains(st.addr))
        throw error(errc::duplicate, st.addr.hex() + " already in shard " + std::to_string(_shard));
    const auto key = st.addr;
    _accounts.emplace(key, std::move(st));
}

account_state shard_state_tree::remove(const address &a)
{
    const auto it = _accounts.find(a);
    if (it == _accounts.end())
        throw error(errc::unknown_account, a.hex() + " not in shard " + std::to_string(_shard));
    auto st = std::move(it->second);
    _accounts.erase(it);
    return st;
}

void shard_state_tree::apply_transfer(const address &from, const address &to, amount_t value, nonce_t expected_nonce)
{
    auto &src = mut(from);
    auto &dst = mut(to);
    if (src.value < value)
        throw error(errc::insufficient_balance, from.hex() + " holds " + brokershard::to_string(src.value) + " < " + brokershard::to_string(value));
    if (src.nonce.is_consumed(expected_nonce))
        throw error(errc::nonce_mismatch, from.hex() + " nonce " + std::to_string(expected_nonce) + " already used");
    src.nonce.consume(expected_nonce);
    src.value -= value;
    dst.value += value;
}

void shard_state_tree::credit(const address &a, amount_t value)
{
    mut(a).value += value;
}

void shard_state_tree::debit(const address &a, amount_t value)
{
    auto &st = mut(a);
    if (st.value < value)
        throw error(errc::insufficient_balance, a.hex() + " holds " + brokershard::to_string(st.value) + " < " + brokershard::to_string(value));
    st.value -= value;
}

void shard_state_tree::consume_nonce(const address &a, nonce_t n)
{
    if (!mut(a).nonce.consume(n))
        throw error(errc::nonce_mismatch, a.hex() + " nonce " + std::to_string(n) + " already used");
}

bool shard_state_tree::try_consume_nonce(const address &a, nonce_t n)
{
    return mut(a).nonce.consume(n);
}

void shard_state_tree::set_storage_map(const address &a, const storage_map &m)
{
    mut(a).storage = m;
}

const lock_entry *shard_state_tree::find_lock(const digest &ctx) const
{
    const auto it = _locks.find(ctx);
    return it == _locks.end() ? nullptr : &it->second;
}

void shard_state_tree::put_lock(lock_entry entry)
{
    if (_locks.contains(entry.ctx_id))
        throw error(errc::duplicate, "lock " + entry.ctx_id.hex() + " exists");
    const auto key = entry.ctx_id;
    _locks.emplace(key, std::move(entry));
}

lock_entry &shard_state_tree::lock_at(const digest &ctx)
{
    const auto it = _locks.find(ctx);
    if (it == _locks.end())
        throw error(errc::not_included, "no lock for " + ctx.hex());
    return it->second;
}

std::optional<dest_outcome> shard_state_tree::dest_outcome_of(const digest &ctx) const
{
    const auto it = _dest.find(ctx);
    if (it == _dest.end())
        return std::nullopt;
    return it->second;
}

void shard_state_tree::set_dest_outcome(const digest &ctx, dest_outcome o)
{
    if (!_dest.emplace(ctx, o).second)
        throw error(errc::already_resolved, "ctx " + ctx.hex() + " already resolved at destination");
}

amount_t shard_state_tree::total_value() const
{
    amount_t sum = 0;
    for (const auto &[_, st] : _accounts)
        sum += st.value;
    return sum;
}

amount_t shard_state_tree::total_locked() const
{
    amount_t sum = 0;
    for (const auto &[_, l] : _locks)
        if (l.status == lock_status::locked)
            sum += l.amount;
    return sum;
}

digest shard_state_tree::compute_state_root() const
{
    if (_accounts.empty())
        return empty_root();
    std::vector<digest> leaves;
    leaves.reserve(_accounts.size());
    for (const auto &[_, st] : _accounts)
        leaves.push_back(st.leaf());
    return merkle_root(leaves);
}

} // namespace brokershard
