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

#include "brokershard/workload/workload.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "brokershard/common/error.hpp"
#include "brokershard/ledger/crypto.hpp"
#include "brokershard/ledger/encoding.hpp"

namespace brokershard {

namespace {

bool has_gz_suffix(const std::filesystem::path &p)
{
    return p.extension() == ".gz";
}

std::vector<std::string_view> split_commas(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::string inflate_file(const std::filesystem::path &path)
{
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f)
        throw error(errc::io_error, "cannot open " + path.string());
    std::string out;
    char buf[1 << 16];
    int n = 0;
    while ((n = gzread(f, buf, sizeof buf)) > 0)
        out.append(buf, static_cast<std::size_t>(n));
    const bool failed = n < 0;
    gzclose(f);
    if (failed)
        throw error(errc::io_error, "corrupt gzip stream in " + path.string());
    return out;
}

} // namespace

trace_load_result parse_csv_trace(std::istream &in)
{
    static constexpr std::array<std::string_view, 4> required{"timestamp_ms", "from_hex", "to_hex", "value"};
    std::string line;
    if (!std::getline(in, line))
        throw error(errc::missing_column, "empty trace: no header row");
    const auto header = split_commas(line);
    std::array<std::size_t, 4> col{};
    for (std::size_t r = 0; r < required.size(); ++r) {
        const auto it = std::find_if(header.begin(), header.end(), [&](auto h) { return trim(h) == required[r]; });
        if (it == header.end())
            throw error(errc::missing_column, std::string{required[r]});
        col[r] = static_cast<std::size_t>(it - header.begin());
    }
    const auto width = *std::max_element(col.begin(), col.end()) + 1;

    trace_load_result out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto cells = split_commas(line);
        const auto where = "line " + std::to_string(lineno);
        if (cells.size() < width)
            throw error(errc::parse_error, where + ": expected at least " + std::to_string(width) + " columns");
        const auto to_cell = trim(cells[col[2]]);
        if (to_cell.empty()) {
            ++out.skipped_creations;
            continue;
        }
        workload_tx tx;
        try {
            const auto ts = trim(cells[col[0]]);
            std::size_t used = 0;
            tx.timestamp_ms = std::stoll(std::string{ts}, &used);
            if (used != ts.size())
                throw error(errc::parse_error, "bad timestamp");
            const auto from_cell = trim(cells[col[1]]);
            if (from_cell.empty())
                throw error(errc::parse_error, "empty from address");
            tx.from = address::from_hex(from_cell);
            tx.to = address::from_hex(to_cell);
            tx.value = parse_amount(trim(cells[col[3]]));
        } catch (const error &e) {
            throw error(errc::parse_error, where + ": " + e.what());
        } catch (const std::exception &e) {
            throw error(errc::parse_error, where + ": " + e.what());
        }
        out.txs.push_back(tx);
    }
    std::stable_sort(out.txs.begin(), out.txs.end(),
                     [](const workload_tx &a, const workload_tx &b) { return a.timestamp_ms < b.timestamp_ms; });
    return out;
}

trace_load_result load_csv_trace(const std::filesystem::path &path)
{
    if (has_gz_suffix(path)) {
        std::istringstream in{inflate_file(path)};
        return parse_csv_trace(in);
    }
    std::ifstream in{path};
    if (!in)
        throw error(errc::io_error, "cannot open " + path.string());
    return parse_csv_trace(in);
}

void write_csv_trace(std::ostream &os, const std::vector<workload_tx> &txs)
{
    os << "timestamp_ms,from_hex,to_hex,value\n";
    for (const auto &tx : txs)
        os << tx.timestamp_ms << ",0x" << tx.from.hex() << ",0x" << tx.to.hex() << ',' << to_string(tx.value) << '\n';
}

void write_csv_trace(const std::filesystem::path &path, const std::vector<workload_tx> &txs)
{
    std::ostringstream buf;
    write_csv_trace(buf, txs);
    const auto text = buf.str();
    if (has_gz_suffix(path)) {
        gzFile f = gzopen(path.c_str(), "wb");
        if (!f)
            throw error(errc::io_error, "cannot create " + path.string());
        const auto n = gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
        gzclose(f);
        if (n != static_cast<int>(text.size()))
            throw error(errc::io_error, "short gzip write to " + path.string());
        return;
    }
    std::ofstream out{path, std::ios::binary};
    if (!out)
        throw error(errc::io_error, "cannot create " + path.string());
    out << text;
}

void synthetic_spec::validate() const
{
    if (n_accounts < 2)
        throw error(errc::config_invalid, "workload needs at least 2 accounts");
    if (n_txs == 0)
        throw error(errc::config_invalid, "workload needs at least 1 transaction");
    if (pop == popularity::zipf && !(zipf_exponent > 0.0))
        throw error(errc::config_invalid, "zipf exponent must be positive");
    if (community) {
        if (community->clusters == 0 || community->clusters > n_accounts)
            throw error(errc::config_invalid, "cluster count must be in [1, n_accounts]");
        if (!(community->intra_prob >= 0.0 && community->intra_prob <= 1.0))
            throw error(errc::config_invalid, "intra_prob must be in [0, 1]");
    }
}

address synthetic_account(std::uint64_t seed, std::size_t rank)
{
    return address::from_label("synthetic/" + std::to_string(seed) + "/" + std::to_string(rank));
}

std::vector<workload_tx> generate_synthetic(const synthetic_spec &spec)
{
    spec.validate();
    const auto n = spec.n_accounts;
    std::vector<double> weight(n, 1.0);
    if (spec.pop == popularity::zipf)
        for (std::size_t k = 0; k < n; ++k)
            weight[k] = 1.0 / std::pow(static_cast<double>(k + 1), spec.zipf_exponent);

    // Cluster of rank k is k mod C, so every cluster mixes hot and cold ranks.
    const std::size_t clusters = spec.community ? spec.community->clusters : 1;
    std::vector<std::vector<std::size_t>> members(clusters);
    for (std::size_t k = 0; k < n; ++k)
        members[k % clusters].push_back(k);
    std::vector<std::discrete_distribution<std::size_t>> within;
    for (const auto &m : members) {
        std::vector<double> w;
        for (auto k : m)
            w.push_back(weight[k]);
        within.emplace_back(w.begin(), w.end());
    }

    std::mt19937_64 rng{spec.seed};
    std::discrete_distribution<std::size_t> global(weight.begin(), weight.end());
    std::bernoulli_distribution local{spec.community ? spec.community->intra_prob : 0.0};
    std::uniform_int_distribution<unsigned> value{1, 100};

    std::vector<address> addr(n);
    for (std::size_t k = 0; k < n; ++k)
        addr[k] = synthetic_account(spec.seed, k);

    std::vector<workload_tx> out;
    out.reserve(spec.n_txs);
    for (std::size_t i = 0; i < spec.n_txs; ++i) {
        const auto payer = global(rng);
        const auto c = payer % clusters;
        const bool same_cluster = spec.community && members[c].size() > 1 && local(rng);
        std::size_t payee = payer;
        while (payee == payer)
            payee = same_cluster ? members[c][within[c](rng)] : global(rng);
        out.push_back({static_cast<std::int64_t>(i), addr[payer], addr[payee], value(rng)});
    }
    return out;
}

digest workload_digest(const std::vector<workload_tx> &txs)
{
    encoder e;
    e.u64(txs.size());
    for (const auto &tx : txs)
        e.u64(static_cast<std::uint64_t>(tx.timestamp_ms)).fixed(tx.from).fixed(tx.to).amount(tx.value);
    return sha256(byte_span{e.buffer()});
}

} // namespace brokershard
