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

#include "brokershard/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <sstream>
#include <variant>

#include "brokershard/broker/broker_directory.hpp"
#include "brokershard/broker/protocol.hpp"
#include "brokershard/common/seed.hpp"
#include "brokershard/partition/state_block.hpp"
#include "brokershard/shard/shard_engine.hpp"

namespace brokershard {

namespace {

struct ev_inject {
    std::size_t index;
};
struct ev_tick {
    shard_id shard;
    std::size_t slot; // 1-based block slot within the epoch
};
struct ev_boundary {};
/// Transaction in flight to `shard`. Reroutable transfers are re-resolved
/// against the live placement on arrival.
struct ev_tx {
    transaction tx;
    shard_id shard;
    bool reroutable;
};
struct ev_header {
    shard_id to;
    header_gossip gossip;
};
struct ev_watch {
    shard_id to;
    half_tx theta1;
    shard_id source;
};
struct ev_lock_seen {
    digest ctx;
};

using event_body = std::variant<ev_inject, ev_tick, ev_boundary, ev_tx, ev_header, ev_watch, ev_lock_seen>;

struct event {
    sim_time at;
    std::uint64_t seq;
    event_body body;
};

struct later {
    bool operator()(const event &a, const event &b) const
    {
        return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
};

struct adversarial_tx {
    digest ctx;
    int threat;
};

class simulator {
public:
    simulator(const sim_config &cfg, const std::vector<workload_tx> &workload);
    run_output run();

private:
    void genesis();
    std::vector<address> pick_brokers() const;

    void schedule(sim_time at, event_body body);
    sim_time link_delay();
    bool lossy_drop();
    void start_epoch(sim_time at);

    void on_inject(sim_time now, std::size_t i);
    void on_tick(sim_time now, const ev_tick &e);
    void on_boundary(sim_time now);
    void deliver(sim_time now, transaction tx, shard_id shard, bool reroutable);
    void on_lock_seen(sim_time now, const digest &ctx);

    void route(std::uint64_t origin, const address &from, const address &to, amount_t value,
               std::optional<nonce_t> nonce, sim_time now);
    void create_ctx(std::uint64_t origin, const address &from, const address &to, amount_t value,
                    const address &broker, shard_id src, shard_id dst, nonce_t payer_nonce, sim_time now);
    void send_relay(std::uint64_t origin, const address &from, const address &to, amount_t value, nonce_t nonce,
                    shard_id src, sim_time now);
    void submit(shard_id s, transaction tx, sim_time now);
    void reject(const transaction &tx, errc reason);

    nonce_t reserve_nonce(const address &a, shard_id s);
    bool is_broker(const address &a) const { return _broker_set.contains(a); }
    shard_id home(const address &a) const { return _registry.home_of(a); }
    std::size_t chunk_count() const;

    void handle_report(sim_time now, shard_id s, block_report &r);
    void check_conservation(shard_id refreshed);
    void finish_audit();
    bool done() const;
    std::map<address, shard_id> relabel(const std::map<address, shard_id> &desired, const state_graph &g) const;

    cross_tx_record &record(const digest &ctx) { return _ctxs.at(ctx); }
    void advance(cross_tx_record &r, ctx_phase to, sim_time at, shard_id shard, height_t h);

    sim_config _cfg;
    const std::vector<workload_tx> &_workload;
    sim_time _delta;
    key_ring _keys;

    placement_registry _registry;
    std::vector<shard_engine> _engines;
    broker_directory _dir;
    std::set<address> _broker_set;
    std::vector<address> _sinks;

    std::priority_queue<event, std::vector<event>, later> _queue;
    std::uint64_t _seq = 0;
    std::mt19937_64 _net_rng, _adv_rng;
    std::uint64_t _partition_seed;

    std::map<address, nonce_t> _nonce;
    std::map<std::pair<address, shard_id>, nonce_t> _broker_nonce;
    std::vector<sim_time> _injected_at;
    std::size_t _next_index = 0;
    sim_time _next_inject_at = 0;

    std::map<digest, cross_tx_record> _ctxs;
    std::map<digest, half_tx> _theta1;
    std::map<digest, adversarial_tx> _adversarial;
    std::size_t _unresolved = 0;
    height_t _h_lock;

    std::size_t _epoch = 0;
    sim_time _epoch_start = 0;
    std::vector<height_t> _epoch_start_height;
    std::optional<state_block> _prev_state_block;

    amount_t _genesis_total = 0;
    std::vector<amount_t> _shard_total;
    amount_t _in_flight = 0;

    metrics_recorder _metrics;
    sim_audit _audit;
    std::vector<std::uint64_t> _cuts;
    std::ostringstream _blocks_log, _ctx_log_stream;
    ctx_audit_log _ctx_log;
    bool _stopped = false;
};

simulator::simulator(const sim_config &cfg, const std::vector<workload_tx> &workload)
    : _cfg{cfg}, _workload{workload}, _delta{static_cast<sim_time>(std::llround(cfg.block_interval_s * 1e9))},
      _registry{cfg.shards}, _net_rng{derive_seed(cfg.seed, "network")}, _adv_rng{derive_seed(cfg.seed, "adversary")},
      _partition_seed{derive_seed(cfg.seed, "partition")}, _injected_at(workload.size(), 0), _h_lock{cfg.h_lock},
      _metrics{cfg.shards}
{
    _cfg.validate();
    if (workload.empty())
        throw error(errc::config_invalid, "workload is empty");
    if (_cfg.record_logs) {
        _ctx_log = ctx_audit_log{&_ctx_log_stream};
        shard_engine::write_block_log_header(_blocks_log);
    }
    _audit.min_resolution_slack = std::numeric_limits<std::int64_t>::max();
}

std::size_t simulator::chunk_count() const
{
    return (_workload.size() + _cfg.txs_per_epoch - 1) / _cfg.txs_per_epoch;
}

std::vector<address> simulator::pick_brokers() const
{
    // Most active endpoints of the first epoch's transactions.
    std::map<address, std::uint64_t> activity;
    const auto first = std::min(_workload.size(), _cfg.txs_per_epoch);
    for (std::size_t i = 0; i < first; ++i) {
        ++activity[_workload[i].from];
        if (_workload[i].to != _workload[i].from)
            ++activity[_workload[i].to];
    }
    std::vector<std::pair<address, std::uint64_t>> order(activity.begin(), activity.end());
    std::stable_sort(order.begin(), order.end(), [](const auto &a, const auto &b) { return a.second > b.second; });
    std::vector<address> out;
    for (std::size_t i = 0; i < order.size() && out.size() < _cfg.brokers; ++i)
        out.push_back(order[i].first);
    return out;
}

void simulator::genesis()
{
    const auto S = _cfg.shards;
    std::set<address> accounts;
    for (const auto &tx : _workload) {
        accounts.insert(tx.from);
        accounts.insert(tx.to);
    }
    if (_cfg.policy == policy_kind::brokerchain) {
        if (_cfg.brokers > accounts.size())
            throw error(errc::config_invalid, "more brokers than accounts");
        for (const auto &b : pick_brokers())
            _broker_set.insert(b);
    }
    std::vector<shard_state_tree> trees;
    for (shard_id s = 0; s < S; ++s)
        trees.emplace_back(s, S);

    for (const auto &a : accounts) {
        if (is_broker(a))
            continue;
        const auto s = monoxide_placement(a, S);
        _registry.place(a, s);
        trees[s].insert(make_account(a, storage_map::single(S, s), _cfg.account_balance));
    }
    if (!_broker_set.empty()) {
        std::map<address, amount_t> stake;
        for (const auto &b : _broker_set)
            stake[b] = _cfg.broker_stake;
        const auto plan = segment_brokers(_broker_set, stake, S);
        for (const auto &[b, slices] : plan) {
            _registry.place_everywhere(b);
            for (shard_id s = 0; s < S; ++s)
                trees[s].insert(make_account(b, storage_map::all(S), slices[s]));
        }
    }
    if (_cfg.adversary.threat1_prob > 0 || _cfg.adversary.threat2_prob > 0) {
        for (shard_id s = 0; s < S; ++s) {
            const auto sink = address::from_label("adversary/sink/" + std::to_string(s));
            _sinks.push_back(sink);
            _registry.place(sink, s);
            trees[s].insert(make_account(sink, storage_map::single(S, s), 0));
        }
    }

    const engine_config ecfg{_delta, _cfg.block_capacity};
    for (shard_id s = 0; s < S; ++s) {
        const auto t = trees[s].total_value() + trees[s].total_locked();
        _shard_total.push_back(t);
        _genesis_total += t;
        _engines.emplace_back(s, S, ecfg, std::move(trees[s]), 0);
    }
    _dir = broker_directory{_broker_set, S};
    for (const auto &e : _engines)
        _dir.sync(e.tree());
    _epoch_start_height.assign(S, 0);
}

void simulator::schedule(sim_time at, event_body body)
{
    _queue.push(event{at, _seq++, std::move(body)});
}

sim_time simulator::link_delay()
{
    const auto &n = _cfg.network;
    double ms = n.latency_ms;
    if (n.jitter_ms > 0)
        ms += std::uniform_real_distribution<double>{-n.jitter_ms, n.jitter_ms}(_net_rng);
    return std::max<sim_time>(0, static_cast<sim_time>(std::llround(ms * 1e6)));
}

bool simulator::lossy_drop()
{
    if (_cfg.network.drop_prob <= 0)
        return false;
    const bool lost = std::bernoulli_distribution{_cfg.network.drop_prob}(_net_rng);
    if (lost)
        ++_audit.dropped_messages;
    return lost;
}

void simulator::start_epoch(sim_time at)
{
    _epoch_start = at;
    for (shard_id s = 0; s < _cfg.shards; ++s)
        schedule(at + _delta, ev_tick{s, 1});
    // One idle slot after the last block carries the state-block consensus.
    schedule(at + static_cast<sim_time>(_cfg.epoch_blocks + 1) * _delta, ev_boundary{});
    const auto first = _epoch * _cfg.txs_per_epoch;
    if (first < _workload.size() && _next_index == first) {
        _next_inject_at = std::max(_next_inject_at, at);
        schedule(_next_inject_at, ev_inject{first});
    }
}

nonce_t simulator::reserve_nonce(const address &a, shard_id s)
{
    if (is_broker(a))
        return _broker_nonce[{a, s}]++;
    return _nonce[a]++;
}

void simulator::on_inject(sim_time now, std::size_t i)
{
    const auto &w = _workload[i];
    _injected_at[i] = now;
    _next_index = i + 1;
    const auto cls = _registry.classify(w.from, w.to);
    _metrics.record_injection(_epoch, std::holds_alternative<cross_shard>(cls));
    route(i + 1, w.from, w.to, w.value, std::nullopt, now);

    const auto chunk_end = std::min(_workload.size(), (i / _cfg.txs_per_epoch + 1) * _cfg.txs_per_epoch);
    const auto chunk_start = (i / _cfg.txs_per_epoch) * _cfg.txs_per_epoch;
    const auto offset = [&](std::size_t j) {
        return static_cast<sim_time>(std::llround(static_cast<double>(j - chunk_start) * 1e9 / _cfg.arrival_rate));
    };
    const auto chunk_t0 = now - offset(i);
    _next_inject_at = chunk_t0 + offset(i + 1);
    if (i + 1 < chunk_end)
        schedule(_next_inject_at, ev_inject{i + 1});
}

void simulator::route(std::uint64_t origin, const address &from, const address &to, amount_t value,
                      std::optional<nonce_t> nonce, sim_time now)
{
    const auto cls = _registry.classify(from, to);
    if (const auto *intra = std::get_if<intra_shard>(&cls)) {
        auto s = intra->shard;
        // Broker-to-broker transfers would otherwise all land in shard 0.
        if (is_broker(from) && is_broker(to))
            s = static_cast<shard_id>(origin % _cfg.shards);
        const auto n = (nonce && !is_broker(from)) ? *nonce : reserve_nonce(from, s);
        schedule(now + link_delay(), ev_tx{make_plain(from, to, value, n, now, origin), s, true});
        return;
    }
    const auto &cross = std::get<cross_shard>(cls);
    const auto n = nonce ? *nonce : reserve_nonce(from, cross.source);
    if (_cfg.policy == policy_kind::brokerchain && !_dir.empty()) {
        try {
            const auto broker = select_broker(_dir, cross.source, cross.dest, value);
            create_ctx(origin, from, to, value, broker, cross.source, cross.dest, n, now);
            return;
        } catch (const error &e) {
            if (e.code() != errc::no_eligible_broker)
                throw;
            ++_audit.relay_fallbacks;
        }
    }
    send_relay(origin, from, to, value, n, cross.source, now);
}

void simulator::send_relay(std::uint64_t origin, const address &from, const address &to, amount_t value,
                           nonce_t nonce, shard_id src, sim_time now)
{
    schedule(now + link_delay(), ev_tx{make_relay_deduct(from, to, value, nonce, origin, now, origin), src, true});
}

void simulator::create_ctx(std::uint64_t origin, const address &from, const address &to, amount_t value,
                           const address &broker, shard_id src, shard_id dst, nonce_t payer_nonce, sim_time now)
{
    const auto &payer_state = _engines[src].tree().get(from);
    raw_cross_tx raw;
    try {
        raw = create_raw_ctx(from, to, value, broker, _h_lock, payer_nonce, reserve_nonce(broker, dst),
                             payer_state.value, _keys);
    } catch (const error &e) {
        reject(make_plain(from, to, value, payer_nonce, now, origin), e.code());
        return;
    }
    const auto theta1 = create_theta1(raw, _engines[src].height(), _keys);
    const auto id = raw.id();

    cross_tx_record rec;
    rec.ctx_id = id;
    rec.raw = raw;
    rec.source = src;
    rec.dest = dst;
    rec.h_current = _engines[src].height();
    rec.deadline = theta2_deadline(rec.h_current, raw.lock_duration);
    rec.created_at = now;
    rec.origin = origin;
    rec.trusted = _cfg.trusted_brokers;
    auto &r = _ctxs.emplace(id, rec).first->second;
    _theta1.emplace(id, theta1);
    ++_unresolved;
    _dir.reserve(id, broker, dst, value);

    // Payer to broker, then broker to both shards.
    const auto hop1 = link_delay();
    const auto to_src = now + hop1 + link_delay();
    const auto to_dst = now + hop1 + link_delay();
    advance(r, ctx_phase::theta1_pending, now, src, rec.h_current);
    schedule(to_src, ev_tx{make_theta1_tx(theta1, ctx_leg::source, now, origin), src, false});
    schedule(to_dst, ev_watch{dst, theta1, src});
    if (_cfg.trusted_brokers) {
        advance(r, ctx_phase::theta2_pending, now, dst, _engines[dst].height());
        if (!lossy_drop())
            schedule(to_dst, ev_tx{make_theta2_tx(create_theta2(raw, _keys), now, origin), dst, false});
    }

    const auto &adv = _cfg.adversary;
    if (adv.threat1_prob > 0 && std::bernoulli_distribution{adv.threat1_prob}(_adv_rng)) {
        ++_audit.threat1_attempts;
        auto race = make_plain(from, _sinks[src], value, payer_nonce, now, 0);
        _adversarial.emplace(race.id(), adversarial_tx{id, 1});
        schedule(now + link_delay(), ev_tx{std::move(race), src, false});
    }
    if (adv.threat2_prob > 0 && std::bernoulli_distribution{adv.threat2_prob}(_adv_rng)) {
        ++_audit.threat2_attempts;
        auto race = make_plain(broker, _sinks[dst], value, raw.broker_nonce, now, 0);
        _adversarial.emplace(race.id(), adversarial_tx{id, 2});
        schedule(to_dst, ev_tx{std::move(race), dst, false});
    }
}

void simulator::advance(cross_tx_record &r, ctx_phase to, sim_time at, shard_id shard, height_t h)
{
    r.transition(to, at, shard, h, &_ctx_log);
}

void simulator::reject(const transaction &tx, errc reason)
{
    if (tx.origin != 0)
        _metrics.record_rejection(tx.origin, reason);
}

void simulator::submit(shard_id s, transaction tx, sim_time now)
{
    const auto adm = _engines[s].submit_tx(tx, now);
    if (adm.admitted)
        return;
    const bool workload_leg = tx.origin != 0 && (tx.kind == tx_kind::plain
                                                 || (tx.kind == tx_kind::relay && tx.leg == ctx_leg::source));
    if (workload_leg)
        reject(tx, adm.reason);
    // Relay credits are never rejected by admission; protocol halves and
    // proofs that fail admission leave the CTX to its failure path.
}

void simulator::deliver(sim_time now, transaction tx, shard_id shard, bool reroutable)
{
    if (!reroutable) {
        if (tx.kind == tx_kind::theta2) {
            const auto ctx = tx.half().ctx_id();
            _engines[shard].watch(_theta1.at(ctx), record(ctx).source);
        }
        submit(shard, std::move(tx), now);
        return;
    }
    if (tx.kind == tx_kind::plain) {
        const auto cls = _registry.classify(tx.from, tx.to);
        const auto *intra = std::get_if<intra_shard>(&cls);
        const bool stays = intra && (intra->shard == shard || (is_broker(tx.from) && is_broker(tx.to)));
        if (stays) {
            submit(shard, std::move(tx), now);
            return;
        }
        ++_audit.reinjected;
        route(tx.origin, tx.from, tx.to, tx.value, tx.nonce, now);
        return;
    }
    // Relay legs follow the account they touch.
    const auto &target = tx.leg == ctx_leg::source ? tx.from : tx.to;
    const auto s = is_broker(target) ? shard : home(target);
    submit(s, std::move(tx), now);
}

void simulator::on_lock_seen(sim_time now, const digest &ctx)
{
    auto &r = record(ctx);
    if (r.phase != ctx_phase::theta1_confirmed)
        return;
    advance(r, ctx_phase::theta2_pending, now, r.dest, _engines[r.dest].height());
    if (lossy_drop())
        return;
    schedule(now + link_delay(), ev_tx{make_theta2_tx(create_theta2(r.raw, _keys), now, r.origin), r.dest, false});
}

void simulator::on_tick(sim_time now, const ev_tick &e)
{
    const auto s = e.shard;
    auto report = _engines[s].produce_block(now);
    handle_report(now, s, report);
    if (e.slot < _cfg.epoch_blocks)
        schedule(now + _delta, ev_tick{s, e.slot + 1});
    if (s + 1 == _cfg.shards && done())
        _stopped = true;
}

void simulator::handle_report(sim_time now, shard_id s, block_report &r)
{
    const auto h = r.block.header.height;
    ++_audit.blocks;
    _metrics.add_workload(_epoch, s, r.block.txs.size());
    _metrics.record_pool(now, s, r.pool_after);

    std::set<digest> forwarded;
    for (const auto &f : r.forwards)
        forwarded.insert(f.id());

    for (const auto &tx : r.block.txs) {
        switch (tx.kind) {
        case tx_kind::plain:
            if (tx.origin != 0) {
                _metrics.record_confirmation(tx.origin, latency_class::intra, _injected_at[tx.origin - 1], now);
            } else if (const auto a = _adversarial.find(tx.id()); a != _adversarial.end()) {
                ++(a->second.threat == 1 ? _audit.threat1_wins : _audit.threat2_wins);
            }
            break;
        case tx_kind::theta1:
            if (tx.leg == ctx_leg::destination)
                ++record(tx.half().ctx_id()).theta1_dest_inclusions;
            break;
        case tx_kind::theta2: ++record(tx.half().ctx_id()).theta2_inclusions; break;
        case tx_kind::relay:
            if (tx.leg == ctx_leg::source) {
                _in_flight += tx.value;
                auto credit = make_relay_tx(tx.from, tx.to, tx.value, relay_deposit{tx.relay().seq, true}, now,
                                            tx.origin);
                const auto dst = is_broker(tx.to) ? s : home(tx.to);
                schedule(now + link_delay(), ev_tx{std::move(credit), dst, true});
            } else {
                _in_flight -= tx.value;
                if (tx.relay().confirms_origin && !forwarded.contains(tx.id()) && tx.origin != 0)
                    _metrics.record_confirmation(tx.origin, latency_class::relay, _injected_at[tx.origin - 1], now);
            }
            break;
        case tx_kind::failure_proof: break;
        }
    }

    for (const auto &sk : r.skipped) {
        const auto &tx = sk.tx;
            const bool workload_leg = tx.origin != 0 && (tx.kind == tx_kind::plain
                                                     || (tx.kind == tx_kind::relay && tx.leg == ctx_leg::source));
        if (!workload_leg)
            continue;
        if (sk.reason == errc::unknown_account) {
            ++_audit.reinjected;
            route(tx.origin, tx.from, tx.to, tx.value, tx.nonce, now);
        } else {
            reject(tx, sk.reason);
        }
    }

    for (const auto &ctx : r.failures_detected) {
        auto &rec = record(ctx);
        advance(rec, ctx_phase::failure_detected, now, s, h);
        advance(rec, ctx_phase::theta1_at_dest_confirmed, now, s, h);
        _dir.release(ctx);
    }

    for (const auto &rc : r.receipts) {
        auto &rec = record(rc.ctx);
        switch (rc.kind) {
        case receipt_kind::theta1_locked: {
            const auto *lock = _engines[s].tree().find_lock(rc.ctx);
            rec.h_source = lock->lock_start;
            rec.lock_end = lock->lock_end;
            rec.payer_delta -= static_cast<signed_amount>(lock->amount);
            if (rec.phase == ctx_phase::theta1_pending) {
                advance(rec, ctx_phase::theta1_confirmed, now, s, h);
                schedule(now + link_delay(), ev_lock_seen{rc.ctx});
            }
            break;
        }
        case receipt_kind::theta2_confirmed: {
            advance(rec, ctx_phase::succeeded, now, s, h);
            rec.payee_delta += static_cast<signed_amount>(rec.raw.value);
            rec.broker_delta -= static_cast<signed_amount>(rec.raw.value);
            const auto src_h = _engines[rec.source].height();
            rec.resolved_source_height = src_h;
            _audit.max_header_staleness =
                std::max(_audit.max_header_staleness, src_h - _engines[s].known_height(rec.source));
            _metrics.record_confirmation(rec.origin, latency_class::cross, _injected_at[rec.origin - 1], now);
            _dir.release(rc.ctx);
            --_unresolved;
            break;
        }
        case receipt_kind::refunded: {
            const auto *lock = _engines[s].tree().find_lock(rc.ctx);
            rec.payer_delta += static_cast<signed_amount>(lock->amount);
            advance(rec, ctx_phase::refunded, now, s, h);
            rec.resolved_source_height = h;
            _metrics.record_confirmation(rec.origin, latency_class::refund, _injected_at[rec.origin - 1], now);
            _dir.release(rc.ctx);
            --_unresolved;
            break;
        }
        }
    }

    for (const auto &[ctx, amount] : r.released)
        record(ctx).broker_delta += static_cast<signed_amount>(amount);

    for (const auto &gamma : r.proofs) {
        auto &rec = record(gamma.theta1.ctx_id());
        ++rec.proofs_sent;
        if (rec.phase == ctx_phase::theta1_at_dest_confirmed)
            advance(rec, ctx_phase::proof_sent, now, s, h);
        if (!lossy_drop())
            schedule(now + link_delay(), ev_tx{make_failure_proof_tx(gamma, now, rec.origin), rec.source, false});
    }

    for (auto &f : r.forwards) {
        _in_flight += f.value;
        const auto dst = home(f.to);
        schedule(now + link_delay(), ev_tx{std::move(f), dst, true});
    }

    for (shard_id o = 0; o < _cfg.shards; ++o)
        if (o != s)
            schedule(now + link_delay(), ev_header{o, header_gossip{r.block.header, r.receipts}});

    if (!_broker_set.empty())
        _dir.sync(_engines[s].tree());
    if (_cfg.record_logs)
        shard_engine::write_block_log(_blocks_log, r);
    if (_cfg.audit)
        check_conservation(s);
}

void simulator::check_conservation(shard_id refreshed)
{
    const auto &t = _engines[refreshed].tree();
    _shard_total[refreshed] = t.total_value() + t.total_locked();
    amount_t sum = _in_flight;
    for (auto v : _shard_total)
        sum += v;
    ++_audit.conservation_checks;
    if (sum != _genesis_total)
        ++_audit.conservation_violations;
}

std::map<address, shard_id> simulator::relabel(const std::map<address, shard_id> &desired, const state_graph &g) const
{
    // Partition labels are arbitrary; map them onto shards so that as much
    // vertex weight as possible stays where it is.
    const auto S = _cfg.shards;
    std::vector<std::vector<std::uint64_t>> overlap(S, std::vector<std::uint64_t>(S, 0));
    for (const auto &[a, p] : desired)
        overlap[p][home(a)] += std::max<std::uint64_t>(g.vertex_weight(a), 1);
    std::vector<std::tuple<std::uint64_t, shard_id, shard_id>> cells;
    for (shard_id p = 0; p < S; ++p)
        for (shard_id q = 0; q < S; ++q)
            cells.emplace_back(overlap[p][q], p, q);
    std::stable_sort(cells.begin(), cells.end(),
                     [](const auto &x, const auto &y) { return std::get<0>(x) > std::get<0>(y); });
    std::vector<std::optional<shard_id>> label(S);
    std::vector<bool> taken(S, false);
    for (const auto &[w, p, q] : cells) {
        if (label[p] || taken[q])
            continue;
        label[p] = q;
        taken[q] = true;
    }
    std::map<address, shard_id> out;
    for (const auto &[a, p] : desired)
        out.emplace(a, *label[p]);
    return out;
}

void simulator::on_boundary(sim_time now)
{
    const auto S = _cfg.shards;
    std::vector<tx_block> blocks;
    std::vector<digest> finals;
    for (shard_id s = 0; s < S; ++s) {
        const auto &chain = _engines[s].chain();
        for (auto h = _epoch_start_height[s] + 1; h < chain.size(); ++h)
            blocks.push_back(chain[h]);
        finals.push_back(chain.back().header.hash());
        _epoch_start_height[s] = _engines[s].height();
    }
    const auto graph = build_state_graph(blocks, _broker_set);
    blocks.clear();

    std::map<address, shard_id> desired;
    std::uint64_t cut = 0;
    partition_options opts;
    opts.epsilon = _cfg.epsilon;
    opts.seed = _partition_seed + _epoch;
    switch (_cfg.policy) {
    case policy_kind::brokerchain: {
        const auto res = partition_graph(graph, S, opts);
        desired = res.map.assignment;
        cut = res.cut;
        break;
    }
    case policy_kind::metis_only: {
        const auto res = metis_only_policy(graph, S, opts);
        desired = res.map.assignment;
        cut = res.cut;
        break;
    }
    case policy_kind::lbf: desired = lbf_reassign(graph.vertices(), S); break;
    case policy_kind::monoxide: break;
    }
    if (!desired.empty())
        desired = relabel(desired, graph);
    if (_cfg.policy == policy_kind::lbf || _cfg.policy == policy_kind::monoxide) {
        partition_map pm{desired, _epoch};
        for (const auto &[a, w] : graph.vertices())
            if (!graph.is_pinned(a))
                pm.assignment.emplace(a, home(a));
        cut = edge_cut(graph, pm);
    }
    _cuts.push_back(cut);

    // Payers of unresolved CTXs stay put until their lock resolves.
    std::set<address> held(_sinks.begin(), _sinks.end());
    for (const auto &[id, rec] : _ctxs)
        if (!rec.resolved())
            held.insert(rec.raw.payer);

    partition_map pm;
    pm.epoch = _epoch + 1;
    std::map<address, shard_id> prev;
    for (const auto &[a, s] : desired) {
        if (is_broker(a) || held.contains(a))
            continue;
        pm.assignment.emplace(a, s);
        prev.emplace(a, home(a));
    }
    std::vector<const shard_state_tree *> trees;
    for (const auto &e : _engines)
        trees.push_back(&e.tree());
    auto blk = build_state_block(pm, {}, _prev_state_block ? &*_prev_state_block : nullptr, finals, prev,
                                 std::span<const shard_state_tree *const>{trees});
    for (auto &e : _engines)
        e.reconfigure_state(blk);
    for (const auto &m : blk.migrations)
        _registry.place(m.addr, m.to);
    _audit.migrations += blk.migrations.size();
    for (shard_id s = 0; s < S; ++s)
        _shard_total[s] = _engines[s].tree().total_value() + _engines[s].tree().total_locked();

    for (shard_id s = 0; s < S; ++s) {
        for (auto &entry : _engines[s].extract_misplaced()) {
            if (entry.tx.kind == tx_kind::plain && entry.tx.origin == 0)
                continue; // adversarial race whose payer moved
            ++_audit.reinjected;
            deliver(now, std::move(entry.tx), s, true);
        }
    }
    blk.migrations.clear();
    _prev_state_block = std::move(blk);

    if (_cfg.h_lock_auto && _epoch == 0) {
        const auto cross = _metrics.latency(latency_class::cross);
        if (cross.count > 0)
            _h_lock = recommend_lock_duration(cross.mean_ms / 1000.0, _cfg.block_interval_s);
    }

    if (done()) {
        _stopped = true;
        return;
    }
    ++_epoch;
    if (_epoch >= chunk_count() + _cfg.drain_epochs) {
        _audit.terminated_by_cap = true;
        _stopped = true;
        return;
    }
    start_epoch(now);
}

bool simulator::done() const
{
    if (_next_index < _workload.size() || _metrics.pending() != 0 || _unresolved != 0 || _in_flight != 0)
        return false;
    for (const auto &e : _engines)
        for (const auto &[id, lock] : e.tree().locks())
            if (lock.status == lock_status::locked)
                return false;
    return true;
}

void simulator::finish_audit()
{
    for (const auto &[id, r] : _ctxs) {
        const auto v = static_cast<signed_amount>(r.raw.value);
        if (!r.resolved()) {
            ++_audit.atomicity_violations;
            continue;
        }
        const auto base = r.h_source.value_or(r.h_current);
        const auto bound = static_cast<std::int64_t>(base + r.raw.lock_duration + 1);
        const auto slack = bound - static_cast<std::int64_t>(*r.resolved_source_height);
        _audit.min_resolution_slack = std::min(_audit.min_resolution_slack, slack);
        if (slack < 0)
            ++_audit.atomicity_violations;

        const bool succeeded = r.phase == ctx_phase::succeeded;
        const bool exclusive = succeeded ? (r.theta2_inclusions == 1 && r.theta1_dest_inclusions == 0)
                                         : (r.theta2_inclusions == 0 && r.theta1_dest_inclusions == 1);
        if (!exclusive)
            ++_audit.exclusivity_violations;
        const bool parties = succeeded ? (r.payer_delta == -v && r.payee_delta == v && r.broker_delta == 0)
                                       : (r.payer_delta == 0 && r.payee_delta == 0 && r.broker_delta == 0);
        if (!parties)
            ++_audit.party_violations;
    }
    if (_ctxs.empty())
        _audit.min_resolution_slack = 0;
}

run_output simulator::run()
{
    genesis();
    start_epoch(0);
    while (!_queue.empty() && !_stopped) {
        auto ev = _queue.top();
        _queue.pop();
        const auto now = ev.at;
        std::visit(
            [&](auto &b) {
                using T = std::decay_t<decltype(b)>;
                if constexpr (std::is_same_v<T, ev_inject>)
                    on_inject(now, b.index);
                else if constexpr (std::is_same_v<T, ev_tick>)
                    on_tick(now, b);
                else if constexpr (std::is_same_v<T, ev_boundary>)
                    on_boundary(now);
                else if constexpr (std::is_same_v<T, ev_tx>)
                    deliver(now, std::move(b.tx), b.shard, b.reroutable);
                else if constexpr (std::is_same_v<T, ev_header>)
                    _engines[b.to].receive_header(b.gossip);
                else if constexpr (std::is_same_v<T, ev_watch>)
                    _engines[b.to].watch(b.theta1, b.source);
                else if constexpr (std::is_same_v<T, ev_lock_seen>)
                    on_lock_seen(now, b.ctx);
            },
            ev.body);
    }
    finish_audit();

    run_output out;
    out.config = _cfg;
    out.metrics = std::move(_metrics);
    out.audit = _audit;
    out.ctxs = std::move(_ctxs);
    out.h_lock_effective = _h_lock;
    out.epochs = _epoch + 1;
    out.workload_digest = workload_digest(_workload);
    out.brokers.assign(_broker_set.begin(), _broker_set.end());
    out.partition_cuts = std::move(_cuts);
    if (_cfg.record_logs) {
        out.blocks_csv = _blocks_log.str();
        out.ctx_audit_csv = "sim_time_ms,ctx_id,phase_from,phase_to,shard,height\n" + _ctx_log_stream.str();
    }
    return out;
}

} // namespace

run_output run_simulation(const sim_config &cfg, const std::vector<workload_tx> &workload)
{
    simulator sim{cfg, workload};
    return sim.run();
}

nlohmann::json run_output::summary() const
{
    auto j = metrics.summary();
    j["config"] = to_json(config);
    j["workload_digest"] = workload_digest.hex();
    j["workload_size"] = metrics.injected();
    j["epochs"] = epochs;
    j["h_lock_effective"] = h_lock_effective;
    j["brokers"] = brokers.size();
    j["partition_cuts"] = partition_cuts;

    std::uint64_t succeeded = 0, refunded = 0, unresolved = 0;
    for (const auto &[id, r] : ctxs) {
        if (r.phase == ctx_phase::succeeded)
            ++succeeded;
        else if (r.phase == ctx_phase::refunded)
            ++refunded;
        else
            ++unresolved;
    }
    j["ctx"] = {{"created", ctxs.size()}, {"succeeded", succeeded}, {"refunded", refunded}, {"unresolved", unresolved}};
    j["audit"] = {
        {"blocks", audit.blocks},
        {"conservation_checks", audit.conservation_checks},
        {"conservation_violations", audit.conservation_violations},
        {"exclusivity_violations", audit.exclusivity_violations},
        {"atomicity_violations", audit.atomicity_violations},
        {"party_violations", audit.party_violations},
        {"min_resolution_slack", audit.min_resolution_slack},
        {"max_header_staleness", audit.max_header_staleness},
        {"threat1_attempts", audit.threat1_attempts},
        {"threat1_wins", audit.threat1_wins},
        {"threat2_attempts", audit.threat2_attempts},
        {"threat2_wins", audit.threat2_wins},
        {"relay_fallbacks", audit.relay_fallbacks},
        {"dropped_messages", audit.dropped_messages},
        {"migrations", audit.migrations},
        {"reinjected", audit.reinjected},
        {"terminated_by_cap", audit.terminated_by_cap},
    };
    return j;
}

std::string run_output::summary_text() const
{
    return summary().dump(2) + "\n";
}

void write_run_artifacts(const std::filesystem::path &dir, const run_output &out)
{
    const auto csv = [&](const char *name, auto &&writer) {
        std::ostringstream os;
        writer(os);
        write_text_file(dir, name, os.str());
    };
    write_text_file(dir, "summary.json", out.summary_text());
    csv("latency.csv", [&](std::ostream &os) { out.metrics.write_latency_csv(os); });
    csv("pool.csv", [&](std::ostream &os) { out.metrics.write_pool_csv(os); });
    csv("workload.csv", [&](std::ostream &os) { out.metrics.write_workload_csv(os); });
    csv("heatmap.csv", [&](std::ostream &os) { out.metrics.write_heatmap_csv(os); });
    csv("ctx_ratio.csv", [&](std::ostream &os) { out.metrics.write_ctx_ratio_csv(os); });
    if (out.config.record_logs) {
        write_text_file(dir, "blocks.csv", out.blocks_csv);
        write_text_file(dir, "ctx_audit.csv", out.ctx_audit_csv);
    }
}

} // namespace brokershard
