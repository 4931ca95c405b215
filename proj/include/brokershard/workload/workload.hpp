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
#include <optional>
#include <vector>

#include "brokershard/ledger/types.hpp"

namespace brokershard {

/// One replayable transfer. Order in a workload is chronological.
struct workload_tx {
    std::int64_t timestamp_ms = 0;
    address from;
    address to;
    amount_t value = 0;

    bool operator==(const workload_tx &) const = default;
};

struct trace_load_result {
    std::vector<workload_tx> txs;
    /// Rows with an empty `to` column (contract creations), not replayed.
    std::size_t skipped_creations = 0;
};

/// Reads `timestamp_ms,from_hex,to_hex,value` (header required, extra
/// columns ignored, any column order). Files ending in .gz are inflated.
/// Rows are stably sorted by timestamp. Throws missing_column, parse_error
/// (message carries the 1-based line number), io_error.
trace_load_result load_csv_trace(const std::filesystem::path &path);
trace_load_result parse_csv_trace(std::istream &in);

void write_csv_trace(std::ostream &os, const std::vector<workload_tx> &txs);
/// Writes gzip when `path` ends in .gz.
void write_csv_trace(const std::filesystem::path &path, const std::vector<workload_tx> &txs);

enum class popularity { uniform, zipf };

struct community_model {
    std::size_t clusters = 8;
    /// Probability that the payee is drawn from the payer's cluster.
    double intra_prob = 0.9;
    bool operator==(const community_model &) const = default;
};

struct synthetic_spec {
    std::size_t n_accounts = 1000;
    std::size_t n_txs = 10000;
    popularity pop = popularity::uniform;
    double zipf_exponent = 1.0;
    std::optional<community_model> community;
    std::uint64_t seed = 1;

    /// Throws config_invalid.
    void validate() const;
    bool operator==(const synthetic_spec &) const = default;
};

/// Account `rank` (0 = most popular) of a synthetic population.
address synthetic_account(std::uint64_t seed, std::size_t rank);

/// Payer by popularity; payee by popularity, restricted to the payer's
/// cluster with probability intra_prob when a community model is set. Payer
/// and payee differ. Values uniform in [1, 100]; timestamp = index.
std::vector<workload_tx> generate_synthetic(const synthetic_spec &spec);

/// Digest over the encoded list; equal lists have equal digests.
digest workload_digest(const std::vector<workload_tx> &txs);

} // namespace brokershard
