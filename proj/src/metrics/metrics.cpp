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

#include "brokershard/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>

#include "brokershard/ledger/crypto.hpp"

namespace brokershard {

std::string_view to_string(latency_class c) noexcept
{
    switch (c) {
    case latency_class::intra: return "intra";
    case latency_class::cross: return "cross";
    case latency_class::relay: return "relay";
    case latency_class::refund: return "refund";
    }
    return "unknown";
}

latency_stats summarize_latency(std::vector<double> samples)
{
    latency_stats s;
    s.count = samples.size();
    if (samples.empty())
        return s;
    std::sort(samples.begin(), samples.end());
    const auto rank = [&](double q) {
        const auto r = static_cast<std::size_t>(std::ceil(q * static_cast<double>(samples.size())));
        return samples[std::max<std::size_t>(r, 1) - 1];
    };
    // Summing sorted values keeps the mean independent of arrival order.
    s.mean_ms = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
    s.p50_ms = rank(0.50);
    s.p95_ms = rank(0.95);
    s.max_ms = samples.back();
    return s;
}

workload_stats compute_workload_stats(std::span<const std::uint64_t> per_shard)
{
    workload_stats w;
    if (per_shard.empty())
        return w;
    for (auto u : per_shard) {
        w.total += u;
        w.max = std::max(w.max, u);
    }
    const double mean = static_cast<double>(w.total) / static_cast<double>(per_shard.size());
    double acc = 0;
    for (auto u : per_shard)
        acc += (static_cast<double>(u) - mean) * (static_cast<double>(u) - mean);
    w.variance = acc / static_cast<double>(per_shard.size());
    return w;
}

metrics_recorder::metrics_recorder(std::size_t shard_count) : _shards{shard_count}
{
    if (shard_count == 0)
        throw error(errc::config_invalid, "metrics need at least one shard");
}

void metrics_recorder::ensure_epoch(std::size_t epoch)
{
    if (_epoch_injected.size() <= epoch) {
        _epoch_injected.resize(epoch + 1, 0);
        _epoch_cross.resize(epoch + 1, 0);
    }
    if (_workload.size() <= epoch)
        _workload.resize(epoch + 1, std::vector<std::uint64_t>(_shards, 0));
}

void metrics_recorder::record_injection(std::size_t epoch, bool cross)
{
    ensure_epoch(epoch);
    ++_injected;
    ++_epoch_injected[epoch];
    if (cross)
        ++_epoch_cross[epoch];
}

void metrics_recorder::record_confirmation(std::uint64_t tx_id, latency_class cls, sim_time injected_at,
                                           sim_time confirmed_at)
{
    if (confirmed_at < injected_at)
        throw error(errc::negative_latency, "tx " + std::to_string(tx_id));
    _latency.push_back({tx_id, cls, injected_at, confirmed_at});
    if (cls == latency_class::refund) {
        ++_refunded;
        return;
    }
    ++_confirmed;
    _last_confirmed_at = std::max(_last_confirmed_at, confirmed_at);
}

void metrics_recorder::record_rejection(std::uint64_t, errc reason)
{
    ++_rejected;
    ++_reject_reasons[reason];
}

void metrics_recorder::record_pool(sim_time at, shard_id shard, std::size_t size)
{
    _pool.push_back({at, shard, size});
}

void metrics_recorder::add_workload(std::size_t epoch, shard_id shard, std::uint64_t units)
{
    ensure_epoch(epoch);
    _workload[epoch].at(shard) += units;
}

std::vector<double> metrics_recorder::ctx_ratio_per_epoch() const
{
    std::vector<double> out;
    for (std::size_t e = 0; e < _epoch_injected.size(); ++e)
        out.push_back(_epoch_injected[e] ? static_cast<double>(_epoch_cross[e]) / static_cast<double>(_epoch_injected[e])
                                         : 0.0);
    return out;
}

double metrics_recorder::ctx_ratio() const
{
    const auto cross = std::accumulate(_epoch_cross.begin(), _epoch_cross.end(), std::uint64_t{0});
    return _injected ? static_cast<double>(cross) / static_cast<double>(_injected) : 0.0;
}

std::vector<std::uint64_t> metrics_recorder::workload_per_shard() const
{
    std::vector<std::uint64_t> out(_shards, 0);
    for (const auto &row : _workload)
        for (std::size_t s = 0; s < _shards; ++s)
            out[s] += row[s];
    return out;
}

latency_stats metrics_recorder::latency(std::optional<latency_class> cls) const
{
    std::vector<double> v;
    for (const auto &l : _latency) {
        if (cls ? l.cls != *cls : l.cls == latency_class::refund)
            continue;
        v.push_back(to_ms(l.confirmed_at - l.injected_at));
    }
    return summarize_latency(std::move(v));
}

double metrics_recorder::tps() const
{
    if (_confirmed == 0 || _last_confirmed_at <= 0)
        return 0.0;
    return static_cast<double>(_confirmed) / to_seconds(_last_confirmed_at);
}

namespace {

nlohmann::json to_json(const latency_stats &s)
{
    return {{"count", s.count}, {"mean_ms", s.mean_ms}, {"p50_ms", s.p50_ms}, {"p95_ms", s.p95_ms},
            {"max_ms", s.max_ms}};
}

nlohmann::json to_json(const workload_stats &w)
{
    return {{"total", w.total}, {"variance", w.variance}, {"max", w.max}};
}

} // namespace

nlohmann::json metrics_recorder::summary() const
{
    nlohmann::json j;
    j["injected"] = _injected;
    j["confirmed"] = _confirmed;
    j["refunded"] = _refunded;
    j["rejected"] = _rejected;
    j["pending"] = pending();
    nlohmann::json reasons = nlohmann::json::object();
    for (const auto &[code, n] : _reject_reasons)
        reasons[std::string{to_string(code)}] = n;
    j["rejected_by_reason"] = reasons;
    j["tps"] = tps();
    j["duration_s"] = to_seconds(_last_confirmed_at);

    nlohmann::json lat;
    lat["all"] = to_json(latency());
    for (auto c : {latency_class::intra, latency_class::cross, latency_class::relay, latency_class::refund})
        lat[std::string{to_string(c)}] = to_json(latency(c));
    j["latency"] = lat;

    j["ctx_ratio"] = ctx_ratio();
    j["ctx_ratio_per_epoch"] = ctx_ratio_per_epoch();

    const auto per_shard = workload_per_shard();
    auto wl = to_json(compute_workload_stats(per_shard));
    wl["per_shard"] = per_shard;
    nlohmann::json per_epoch = nlohmann::json::array();
    double var_sum = 0;
    for (const auto &row : _workload) {
        const auto w = compute_workload_stats(row);
        var_sum += w.variance;
        per_epoch.push_back(to_json(w));
    }
    wl["per_epoch"] = per_epoch;
    wl["mean_epoch_variance"] = _workload.empty() ? 0.0 : var_sum / static_cast<double>(_workload.size());
    j["workload"] = wl;
    return j;
}

void metrics_recorder::write_latency_csv(std::ostream &os) const
{
    os << "tx_id,class,injected_ms,confirmed_ms\n";
    for (const auto &l : _latency)
        os << l.tx_id << ',' << to_string(l.cls) << ',' << to_ms(l.injected_at) << ',' << to_ms(l.confirmed_at)
           << '\n';
}

void metrics_recorder::write_pool_csv(std::ostream &os) const
{
    os << "sim_ms,shard,size\n";
    for (const auto &p : _pool)
        os << to_ms(p.at) << ',' << p.shard << ',' << p.size << '\n';
}

void metrics_recorder::write_workload_csv(std::ostream &os) const
{
    os << "epoch,shard,units\n";
    for (std::size_t e = 0; e < _workload.size(); ++e)
        for (std::size_t s = 0; s < _shards; ++s)
            os << e << ',' << s << ',' << _workload[e][s] << '\n';
}

void metrics_recorder::write_heatmap_csv(std::ostream &os) const
{
    os << "epoch";
    for (std::size_t s = 0; s < _shards; ++s)
        os << ",shard_" << s;
    os << '\n';
    for (std::size_t e = 0; e < _workload.size(); ++e) {
        os << e;
        for (auto u : _workload[e])
            os << ',' << u;
        os << '\n';
    }
}

void metrics_recorder::write_ctx_ratio_csv(std::ostream &os) const
{
    os << "epoch,injected,cross,ratio\n";
    const auto ratio = ctx_ratio_per_epoch();
    for (std::size_t e = 0; e < _epoch_injected.size(); ++e)
        os << e << ',' << _epoch_injected[e] << ',' << _epoch_cross[e] << ',' << ratio[e] << '\n';
}

void write_text_file(const std::filesystem::path &dir, const std::string &name, const std::string &text)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw error(errc::io_error, "cannot create " + dir.string() + ": " + ec.message());
    std::ofstream out{dir / name, std::ios::binary};
    if (!out)
        throw error(errc::io_error, "cannot write " + (dir / name).string());
    out << text;
    if (!out)
        throw error(errc::io_error, "short write to " + (dir / name).string());
}

std::string summary_digest(const std::string &summary_text)
{
    return sha256(std::string_view{summary_text}).hex();
}

} // namespace brokershard
