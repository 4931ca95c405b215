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

#include "brokershard/shard/shard_engine.hpp"

#include <ostream>

#include "brokershard/common/error.hpp"

namespace brokershard {

shard_engine::shard_engine(shard_id shard, std::size_t shard_count, engine_config cfg, shard_state_tree genesis,
                           sim_time at)
    : _shard{shard}, _shard_count{shard_count}, _cfg{cfg}, _tree{std::move(genesis)}, _headers(shard_count),
      _latest(shard_count, 0)
{
    if (_tree.shard() != shard)
        throw error(errc::config_invalid, "genesis tree belongs to shard " + std::to_string(_tree.shard()));
    _chain.push_back(seal_block(shard, 0, digest{}, {}, _tree.compute_state_root(), at));
    _headers[shard].emplace(0, _chain.back().header);
}

void shard_engine::check_admission(const transaction &tx) const
{
    auto require_present = [&](const address &a) {
        if (!_tree.contains(a))
            throw error(errc::unknown_account, a.hex() + " not in shard " + std::to_string(_shard));
    };
    auto require_spendable = [&](const address &a, nonce_t n, amount_t v) {
        require_present(a);
        const auto &st = _tree.get(a);
        if (st.nonce.is_consumed(n))
            throw error(errc::nonce_mismatch, a.hex() + " nonce " + std::to_string(n));
        if (st.value < v)
            throw error(errc::insufficient_balance, a.hex());
    };
    switch (tx.kind) {
    case tx_kind::plain:
        require_spendable(tx.from, tx.nonce, tx.value);
        require_present(tx.to);
        return;
    case tx_kind::theta1: {
        if (tx.leg != ctx_leg::source)
            throw error(errc::validation_failed, "destination-leg first half is produced locally");
        const auto &raw = tx.half().raw;
        if (_tree.find_lock(raw.id()))
            throw error(errc::already_resolved, "ctx already has a lock entry");
        require_spendable(raw.payer, raw.payer_nonce, raw.value);
        return;
    }
    case tx_kind::theta2: {
        const auto w = _watch.find(tx.half().ctx_id());
        if (w == _watch.end())
            throw error(errc::validation_failed, "no first half known for this ctx");
        if (known_height(w->second.source) >= w->second.deadline)
            throw error(errc::deadline_exceeded, "deadline " + std::to_string(w->second.deadline));
        check_theta2_admissible(_tree, tx.half());
        return;
    }
    case tx_kind::failure_proof: {
        const auto &gamma = tx.proof();
        const auto *hdr = known_header(gamma.dest, gamma.dest_height);
        if (!hdr)
            throw error(errc::bad_proof, "destination header not yet known");
        if (!verify_merkle_path(make_theta1_dest_tx(gamma.theta1).id(), gamma.path, hdr->tx_root))
            throw error(errc::bad_proof, "merkle path does not reach tx_root");
        const auto *lock = _tree.find_lock(gamma.theta1.ctx_id());
        if (lock && lock->status != lock_status::locked)
            throw error(errc::already_resolved, "lock is " + std::string{to_string(lock->status)});
        return;
    }
    case tx_kind::relay:
        if (tx.leg == ctx_leg::source)
            require_spendable(tx.from, tx.nonce, tx.value);
        return;
    }
}

admission shard_engine::submit_tx(transaction tx, sim_time now)
{
    try {
        check_admission(tx);
        _pool.submit(std::move(tx), now);
    } catch (const error &e) {
        return admission{false, e.code()};
    }
    return {};
}

void shard_engine::apply_tx(const transaction &tx, height_t h, block_report &report)
{
    switch (tx.kind) {
    case tx_kind::plain:
        if (!_tree.contains(tx.from) || !_tree.contains(tx.to))
            throw error(errc::unknown_account, "plain transfer endpoints not both in shard " + std::to_string(_shard));
        _tree.apply_transfer(tx.from, tx.to, tx.value, tx.nonce);
        return;
    case tx_kind::theta1: {
        const auto &half = tx.half();
        if (tx.leg == ctx_leg::source) {
            confirm_theta1(_tree, half, h);
            report.receipts.push_back({half.ctx_id(), receipt_kind::theta1_locked, _shard});
            return;
        }
        const auto w = _watch.find(half.ctx_id());
        if (w == _watch.end())
            throw error(errc::validation_failed, "no watch entry for destination first half");
        include_theta1_at_dest(_tree, half);
        w->second.included_at = h;
        report.failures_detected.push_back(half.ctx_id());
        return;
    }
    case tx_kind::theta2: {
        const auto &half = tx.half();
        const auto w = _watch.find(half.ctx_id());
        if (w == _watch.end())
            throw error(errc::validation_failed, "no first half known for this ctx");
        const auto source = w->second.source;
        const auto eff = confirm_theta2(_tree, half, known_height(source), w->second.deadline);
        if (!eff.payee_credited)
            report.forwards.push_back(make_relay_tx(half.raw.broker, half.raw.payee, half.raw.value,
                                                    relay_deposit{fixed_bytes_hash{}(half.ctx_id()), false}, tx.timestamp,
                                                    tx.origin));
        report.receipts.push_back({half.ctx_id(), receipt_kind::theta2_confirmed, source});
        _watch.erase(w);
        return;
    }
    case tx_kind::failure_proof: {
        const auto &gamma = tx.proof();
        const auto *hdr = known_header(gamma.dest, gamma.dest_height);
        if (!hdr)
            throw error(errc::bad_proof, "destination header not yet known");
        confirm_failure_proof(_tree, gamma, *hdr, h);
        report.receipts.push_back({gamma.theta1.ctx_id(), receipt_kind::refunded, gamma.dest});
        return;
    }
    case tx_kind::relay:
        if (tx.leg == ctx_leg::source) {
            if (!_tree.contains(tx.from))
                throw error(errc::unknown_account, tx.from.hex());
            const auto &st = _tree.get(tx.from);
            if (st.nonce.is_consumed(tx.nonce))
                throw error(errc::nonce_mismatch, tx.from.hex() + " nonce " + std::to_string(tx.nonce));
            if (st.value < tx.value)
                throw error(errc::insufficient_balance, tx.from.hex());
            _tree.consume_nonce(tx.from, tx.nonce);
            _tree.debit(tx.from, tx.value);
            return;
        }
        if (_tree.contains(tx.to))
            _tree.credit(tx.to, tx.value);
        else
            report.forwards.push_back(tx);
        return;
    }
}

block_report shard_engine::produce_block(sim_time now)
{
    const height_t h = height() + 1;
    block_report report;
    std::vector<transaction> included;

    for (auto it = _succeeded.begin(); it != _succeeded.end();) {
        const auto *lock = _tree.find_lock(*it);
        if (lock && lock->status != lock_status::locked) {
            it = _succeeded.erase(it);
            continue;
        }
        if (lock && h > lock->lock_end) {
            report.released.emplace_back(*it, release_lock(_tree, *it, h, true));
            it = _succeeded.erase(it);
            continue;
        }
        ++it;
    }

    for (auto &[ctx, w] : _watch) {
        if (included.size() >= _cfg.capacity)
            break;
        if (w.included_at || _tree.dest_outcome_of(ctx) || known_height(w.source) < w.deadline)
            continue;
        auto tx = make_theta1_dest_tx(w.theta1);
        try {
            apply_tx(tx, h, report);
            included.push_back(std::move(tx));
        } catch (const error &e) {
            report.skipped.push_back({std::move(tx), e.code()});
        }
    }

    while (included.size() < _cfg.capacity) {
        auto e = _pool.pop();
        if (!e)
            break;
        try {
            apply_tx(e->tx, h, report);
            included.push_back(std::move(e->tx));
        } catch (const error &err) {
            report.skipped.push_back({std::move(e->tx), err.code()});
        }
    }

    _chain.push_back(seal_block(_shard, h, _chain.back().header.hash(), std::move(included),
                                _tree.compute_state_root(), now));
    _headers[_shard].emplace(h, _chain.back().header);
    _latest[_shard] = h;

    for (auto &[ctx, w] : _watch) {
        if (!w.included_at)
            continue;
        if (!w.proof)
            w.proof = build_failure_proof(_chain.at(*w.included_at), ctx);
        report.proofs.push_back(*w.proof);
    }

    report.block = _chain.back();
    report.pool_after = _pool.size();
    return report;
}

void shard_engine::apply_block(const tx_block &block)
{
    if (block.header.shard != _shard || block.header.height != height() + 1
        || block.header.prev_hash != _chain.back().header.hash())
        throw error(errc::height_gap, "block " + std::to_string(block.header.height) + " does not extend height "
                                          + std::to_string(height()));
    if (compute_tx_root(block.txs) != block.header.tx_root)
        throw error(errc::validation_failed, "tx_root mismatch");
    block_report scratch;
    for (const auto &tx : block.txs) {
        try {
            apply_tx(tx, block.header.height, scratch);
        } catch (const error &e) {
            throw error(errc::validation_failed, "transaction " + tx.id().hex() + ": " + e.what());
        }
    }
    _chain.push_back(block);
    _headers[_shard].emplace(block.header.height, block.header);
    _latest[_shard] = block.header.height;
}

void shard_engine::receive_header(const header_gossip &g)
{
    const auto s = g.header.shard;
    _headers.at(s).emplace(g.header.height, g.header);
    _latest[s] = std::max(_latest[s], g.header.height);
    for (const auto &r : g.receipts) {
        if (r.counterpart != _shard)
            continue;
        if (r.kind == receipt_kind::theta2_confirmed)
            _succeeded.insert(r.ctx);
        else if (r.kind == receipt_kind::refunded)
            _watch.erase(r.ctx);
    }
}

height_t shard_engine::known_height(shard_id s) const
{
    return _latest.at(s);
}

const block_header *shard_engine::known_header(shard_id s, height_t h) const
{
    const auto &m = _headers.at(s);
    const auto it = m.find(h);
    return it == m.end() ? nullptr : &it->second;
}

void shard_engine::watch(const half_tx &theta1, shard_id source)
{
    const auto ctx = theta1.ctx_id();
    if (_watch.contains(ctx) || _tree.dest_outcome_of(ctx))
        return;
    _watch.emplace(ctx, watch_entry{theta1, source,
                                    theta2_deadline(theta1.current_height.value_or(0), theta1.raw.lock_duration),
                                    std::nullopt, std::nullopt});
}

void shard_engine::reconfigure_state(const state_block &blk)
{
    if (migrations_root(blk.migrations) != blk.header.state_updating_root)
        throw error(errc::inconsistent_migration, "migration payload does not match the state-updating root");
    for (const auto &m : blk.migrations) {
        if (m.from != _shard)
            continue;
        if (_tree.get(m.addr) != m.carried)
            throw error(errc::inconsistent_migration, m.addr.hex() + " carried state differs from the tree");
    }
    for (const auto &m : blk.migrations)
        if (m.from == _shard)
            _tree.remove(m.addr);
    for (const auto &m : blk.migrations) {
        if (m.to != _shard)
            continue;
        auto st = m.carried;
        st.storage = storage_map::single(_shard_count, _shard);
        _tree.insert(std::move(st));
    }
}

std::vector<pool_entry> shard_engine::extract_misplaced()
{
    return _pool.extract_if([&](const pool_entry &e) {
        const auto &tx = e.tx;
        switch (tx.kind) {
        case tx_kind::plain: return !_tree.contains(tx.from) || !_tree.contains(tx.to);
        case tx_kind::relay: return !_tree.contains(tx.leg == ctx_leg::source ? tx.from : tx.to);
        case tx_kind::theta1: return !_tree.contains(tx.half().raw.payer);
        case tx_kind::theta2:
        case tx_kind::failure_proof: return false;
        }
        return false;
    });
}

void shard_engine::write_block_log_header(std::ostream &os)
{
    os << "sim_time_ms,shard,height,n_txs,pool_size,state_root_prefix\n";
}

void shard_engine::write_block_log(std::ostream &os, const block_report &r)
{
    const auto &h = r.block.header;
    os << to_ms(h.produced_at) << ',' << h.shard << ',' << h.height << ',' << h.tx_count << ',' << r.pool_after << ','
       << h.state_root.hex().substr(0, 8) << '\n';
}

} // namespace brokershard
