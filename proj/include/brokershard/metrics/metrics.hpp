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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "brokershard/common/error.hpp"
#include "brokershard/ledger/types.hpp"

namespace brokershard {

/// intra: plain transfer; cross: broker-mediated success; relay: relay
/// deposit; refund: cross-shard transfer resolved by a failure proof.
enum class latency_class : std::uint8_t { intra, cross, relay, refund };
std::string_view to_string(latency_class c) noexcept;

struct latency_stats {
    std::size_t count = 0;
    double mean_ms = 0, p50_ms = 0, p95_ms = 0, max_ms = 0;
};

/// Nearest-rank percentiles over the samples (in ms).
latency_stats summarize_latency(std::vector<double> samples_ms);

struct workload_stats {
    std::uint64_t total = 0;
    /// Population variance.
    double variance = 0;
    std::uint64_t max = 0;
};

workload_stats compute_workload_stats(std::span<const std::uint64_t> per_shard);

struct latency_sample {
    std::uint64_t tx_id = 0;
    latency_class cls = latency_class::intra;
    sim_time injected_at = 0;
    sim_time confirmed_at = 0;
};

struct pool_sample {
    sim_time at = 0;
    shard_id shard = 0;
    std::size_t size = 0;
};

/// Append-only sink fed by the event loop; aggregation happens in summary().
class metrics_recorder {
public:
    explicit metrics_recorder(std::size_t shard_count = 1);

    std::size_t shard_count() const noexcept { return _shards; }

    /// `cross` is the classification at injection under the live placement.
    void record_injection(std::size_t epoch, bool cross);
    /// Throws negative_latency if confirmed_at < injected_at. Refunds count as
    /// resolved but not confirmed.
    void record_confirmation(std::uint64_t tx_id, latency_class cls, sim_time injected_at, sim_time confirmed_at);
    void record_rejection(std::uint64_t tx_id, errc reason);
    void record_pool(sim_time at, shard_id shard, std::size_t size);
    void add_workload(std::size_t epoch, shard_id shard, std::uint64_t units);

    std::uint64_t injected() const noexcept { return _injected; }
    std::uint64_t confirmed() const noexcept { return _confirmed; }
    std::uint64_t refunded() const noexcept { return _refunded; }
    std::uint64_t rejected() const noexcept { return _rejected; }
    /// injected − confirmed − refunded − rejected.
    std::uint64_t pending() const noexcept { return _injected - _confirmed - _refunded - _rejected; }

    const std::vector<latency_sample> &latencies() const noexcept { return _latency; }
    const std::vector<pool_sample> &pool_samples() const noexcept { return _pool; }
    /// epoch × shard applied-transaction units.
    const std::vector<std::vector<std::uint64_t>> &workload_matrix() const noexcept { return _workload; }
    std::vector<double> ctx_ratio_per_epoch() const;
    double ctx_ratio() const;
    std::vector<std::uint64_t> workload_per_shard() const;

    latency_stats latency(std::optional<latency_class> cls = std::nullopt) const;
    /// Confirmed transfers per simulated second over [0, last confirmation].
    double tps() const;
    sim_time last_confirmation() const noexcept { return _last_confirmed_at; }

    /// Aggregates as JSON; keys sorted, so identical runs serialize identically.
    nlohmann::json summary() const;

    void write_latency_csv(std::ostream &os) const;
    void write_pool_csv(std::ostream &os) const;
    void write_workload_csv(std::ostream &os) const;
    /// Row per epoch, column per shard.
    void write_heatmap_csv(std::ostream &os) const;
    void write_ctx_ratio_csv(std::ostream &os) const;

private:
    void ensure_epoch(std::size_t epoch);

    std::size_t _shards;
    std::uint64_t _injected = 0, _confirmed = 0, _refunded = 0, _rejected = 0;
    std::map<errc, std::uint64_t> _reject_reasons;
    std::vector<std::uint64_t> _epoch_injected, _epoch_cross;
    std::vector<std::vector<std::uint64_t>> _workload;
    std::vector<latency_sample> _latency;
    std::vector<pool_sample> _pool;
    sim_time _last_confirmed_at = 0;
};

/// Writes `text` to `dir / name`, creating `dir`. Throws io_error.
void write_text_file(const std::filesystem::path &dir, const std::string &name, const std::string &text);

/// Hex sha256 of a serialized summary.
std::string summary_digest(const std::string &summary_text);

} // namespace brokershard
