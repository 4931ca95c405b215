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

#include <doctest.h>

#include <filesystem>
#include <map>
#include <sstream>

#include "brokershard/common/error.hpp"
#include "brokershard/workload/workload.hpp"

using namespace brokershard;

namespace {

errc code_of(const std::string &csv)
{
    std::istringstream in(csv);
    try {
        parse_csv_trace(in);
    } catch (const error &e) {
        return e.code();
    }
    FAIL("expected an error");
    return errc::io_error;
}

} // namespace

TEST_CASE("trace parsing sorts by timestamp and skips creations")
{
    std::istringstream in("value,to_hex,timestamp_ms,from_hex,extra\n"
                          "5,0xbb,300,0xaa,x\n"
                          "7,,100,0xaa,x\n"
                          "9,0xcc,100,0xbb,y\n"
                          "11,0xaa,200,0xcc,z\n");
    const auto r = parse_csv_trace(in);
    REQUIRE(r.txs.size() == 3);
    CHECK(r.skipped_creations == 1);
    CHECK(r.txs[0].timestamp_ms == 100);
    CHECK(r.txs[0].from == address::from_hex("bb"));
    CHECK(r.txs[0].value == 9);
    CHECK(r.txs[1].timestamp_ms == 200);
    CHECK(r.txs[2].timestamp_ms == 300);
    CHECK(r.txs[2].to == address::from_hex("0xbb"));
}

TEST_CASE("equal timestamps keep file order")
{
    std::istringstream in("timestamp_ms,from_hex,to_hex,value\n1,0x01,0x02,1\n1,0x03,0x04,2\n0,0x05,0x06,3\n");
    const auto r = parse_csv_trace(in);
    REQUIRE(r.txs.size() == 3);
    CHECK(r.txs[0].value == 3);
    CHECK(r.txs[1].value == 1);
    CHECK(r.txs[2].value == 2);
}

TEST_CASE("trace errors")
{
    CHECK(code_of("timestamp_ms,from_hex,value\n1,0x01,3\n") == errc::missing_column);
    CHECK(code_of("") == errc::missing_column);
    CHECK(code_of("timestamp_ms,from_hex,to_hex,value\n1,0x01,0x02,3\n2,0xzz,0x02,3\n") == errc::parse_error);
    try {
        std::istringstream in("timestamp_ms,from_hex,to_hex,value\n1,0x01,0x02,3\n2,0xzz,0x02,3\n");
        parse_csv_trace(in);
    } catch (const error &e) {
        CHECK(std::string{e.what()}.find("line 3") != std::string::npos);
    }
    CHECK(code_of("timestamp_ms,from_hex,to_hex,value\nabc,0x01,0x02,3\n") == errc::parse_error);
    CHECK(code_of("timestamp_ms,from_hex,to_hex,value\n1,0x01\n") == errc::parse_error);
    CHECK_THROWS_AS(load_csv_trace("/nonexistent/trace.csv"), error);
}

TEST_CASE("csv and gzip round trip")
{
    synthetic_spec spec;
    spec.n_accounts = 50;
    spec.n_txs = 300;
    spec.seed = 4;
    const auto txs = generate_synthetic(spec);
    const auto dir = std::filesystem::temp_directory_path() / "brokershard_workload_test";
    std::filesystem::create_directories(dir);
    for (const char *name : {"t.csv", "t.csv.gz"}) {
        write_csv_trace(dir / name, txs);
        const auto back = load_csv_trace(dir / name);
        CHECK(back.txs == txs);
        CHECK(workload_digest(back.txs) == workload_digest(txs));
    }
    CHECK(std::filesystem::file_size(dir / "t.csv.gz") < std::filesystem::file_size(dir / "t.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("synthetic generation is seeded and well formed")
{
    synthetic_spec spec;
    spec.n_accounts = 100;
    spec.n_txs = 2000;
    const auto a = generate_synthetic(spec);
    CHECK(a == generate_synthetic(spec));
    spec.seed = 2;
    CHECK(workload_digest(a) != workload_digest(generate_synthetic(spec)));
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].from != a[i].to);
        CHECK(a[i].value >= 1);
        CHECK(a[i].value <= 100);
        CHECK(a[i].timestamp_ms == static_cast<std::int64_t>(i));
    }
    CHECK_THROWS_AS((synthetic_spec{1, 10}.validate()), error);
}

TEST_CASE("zipf concentrates activity on the head")
{
    synthetic_spec spec;
    spec.n_accounts = 1000;
    spec.n_txs = 20000;
    spec.pop = popularity::zipf;
    const auto txs = generate_synthetic(spec);
    std::map<address, std::size_t> rank;
    for (std::size_t k = 0; k < 10; ++k)
        rank[synthetic_account(spec.seed, k)] = k;
    std::size_t head = 0;
    for (const auto &t : txs)
        head += rank.contains(t.from);
    CHECK(static_cast<double>(head) / static_cast<double>(txs.size()) >= 0.30);
}

TEST_CASE("community model keeps most transfers inside clusters")
{
    auto cross_fraction = [](const synthetic_spec &spec) {
        std::map<address, std::size_t> cluster;
        for (std::size_t k = 0; k < spec.n_accounts; ++k)
            cluster[synthetic_account(spec.seed, k)] = k % 8;
        std::size_t cross = 0;
        const auto txs = generate_synthetic(spec);
        for (const auto &t : txs)
            cross += cluster.at(t.from) != cluster.at(t.to);
        return static_cast<double>(cross) / static_cast<double>(txs.size());
    };
    synthetic_spec spec;
    spec.n_accounts = 800;
    spec.n_txs = 10000;
    const double uniform = cross_fraction(spec);
    spec.community = community_model{8, 0.9};
    const double clustered = cross_fraction(spec);
    CHECK(uniform == doctest::Approx(7.0 / 8.0).epsilon(0.03));
    CHECK(clustered < 0.2 * uniform);
}
