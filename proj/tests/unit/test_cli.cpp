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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "brokershard/cli/run_config.hpp"
#include "brokershard/cli/security_tables.hpp"
#include "brokershard/common/error.hpp"

using namespace brokershard;

namespace {

std::filesystem::path scratch(const std::string &name)
{
    const auto p = std::filesystem::temp_directory_path() / ("brokershard_cli_" + name);
    std::filesystem::remove_all(p);
    return p;
}

errc code_of(const std::function<void()> &f)
{
    try {
        f();
    } catch (const error &e) {
        return e.code();
    }
    FAIL("expected an error");
    return errc::io_error;
}

std::string slurp(const std::filesystem::path &p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

run_config tiny()
{
    run_config c;
    c.sim.shards = 2;
    c.sim.brokers = 4;
    c.sim.txs_per_epoch = 300;
    c.sim.arrival_rate = 200;
    c.sim.block_interval_s = 1;
    c.sim.block_capacity = 200;
    c.sim.epoch_blocks = 3;
    c.sim.h_lock = 10;
    c.workload.synthetic->n_accounts = 100;
    c.workload.synthetic->n_txs = 600;
    return c;
}

} // namespace

TEST_CASE("config round trip is canonical")
{
    run_config c;
    c.sim.policy = policy_kind::lbf;
    c.sim.h_lock_auto = true;
    c.sim.network.drop_prob = 0.25;
    c.workload.synthetic->pop = popularity::zipf;
    c.workload.synthetic->community = community_model{6, 0.8};
    c.workload.synthetic_seed = 9;
    c.output_dir = "results/x";
    const auto j = to_json(c);
    CHECK(run_config_from_json(j) == c);
    CHECK(to_json(run_config_from_json(j)) == j);
    CHECK(j["h_lock"] == "auto");

    const auto partial = nlohmann::json::parse(R"({"shards": 16, "workload": {"kind": "trace", "path": "t.csv"}})");
    const auto p = run_config_from_json(partial);
    CHECK(p.sim.shards == 16);
    CHECK(p.workload.trace == std::filesystem::path{"t.csv"});
    CHECK_FALSE(p.workload.synthetic.has_value());
    CHECK(run_config_from_json(to_json(p)) == p);
}

TEST_CASE("config rejects unknown and ill-typed keys")
{
    auto parse = [](const char *text) { return [text] { run_config_from_json(nlohmann::json::parse(text)); }; };
    CHECK(code_of(parse(R"({"shardz": 4})")) == errc::config_invalid);
    CHECK(code_of(parse(R"({"shards": -4})")) == errc::config_invalid);
    CHECK(code_of(parse(R"({"network": {"loss": 0.1}})")) == errc::config_invalid);
    CHECK(code_of(parse(R"({"workload": {"kind": "trace"}})")) == errc::config_invalid);
    CHECK(code_of(parse(R"({"workload": {"popularity": "pareto"}})")) == errc::config_invalid);
    CHECK(code_of(parse(R"({"h_lock": "soon"})")) == errc::config_invalid);
    CHECK(code_of(parse(R"({"policy": "random"})")) == errc::config_invalid);

    const auto path = scratch("bad.json");
    std::ofstream(path) << "{ not json";
    CHECK(code_of([&] { load_run_config(path); }) == errc::parse_error);
    std::filesystem::remove(path);
}

TEST_CASE("overrides use dotted paths and aliases")
{
    run_config c;
    apply_override(c, "S=32");
    apply_override(c, "K=12");
    apply_override(c, "N_TX=777");
    apply_override(c, "network.drop_prob=0.3");
    apply_override(c, "jitter_ms=5");
    apply_override(c, "h_lock=auto");
    apply_override(c, "policy=metis");
    apply_override(c, "workload.community.clusters=5");
    apply_override(c, "workload.popularity=zipf");
    CHECK(c.sim.shards == 32);
    CHECK(c.sim.brokers == 12);
    CHECK(c.sim.txs_per_epoch == 777);
    CHECK(c.sim.network.drop_prob == 0.3);
    CHECK(c.sim.network.jitter_ms == 5);
    CHECK(c.sim.h_lock_auto);
    CHECK(c.sim.policy == policy_kind::metis_only);
    REQUIRE(c.workload.synthetic->community.has_value());
    CHECK(c.workload.synthetic->community->clusters == 5);
    CHECK(c.workload.synthetic->pop == popularity::zipf);
    apply_override(c, "trace=data/t.csv.gz");
    CHECK(c.workload.trace == std::filesystem::path{"data/t.csv.gz"});

    CHECK(code_of([&] { apply_override(c, "nonsense=1"); }) == errc::config_invalid);
    CHECK(code_of([&] { apply_override(c, "network.nonsense=1"); }) == errc::config_invalid);
    CHECK(code_of([&] { apply_override(c, "S"); }) == errc::config_invalid);
    CHECK(code_of([&] { apply_override(c, "S=-1"); }) == errc::config_invalid);
}

TEST_CASE("output directory from the environment")
{
    run_config c;
    ::setenv("BROKERSHARD_OUT", "/tmp/from_env", 1);
    apply_environment(c);
    CHECK(c.output_dir == std::filesystem::path{"/tmp/from_env"});
    ::setenv("BROKERSHARD_OUT", "", 1);
    c.output_dir = "keep";
    apply_environment(c);
    CHECK(c.output_dir == std::filesystem::path{"keep"});
    ::unsetenv("BROKERSHARD_OUT");
}

TEST_CASE("workload seed derives from the run seed unless pinned")
{
    auto c = tiny();
    const auto a = materialize_workload(c);
    c.sim.seed = 2;
    const auto b = materialize_workload(c);
    CHECK(workload_digest(a) != workload_digest(b));
    c.workload.synthetic_seed = 77;
    const auto p1 = materialize_workload(c);
    c.sim.seed = 3;
    CHECK(materialize_workload(c) == p1);
}

TEST_CASE("minimal run writes a summary")
{
    auto c = tiny();
    c.output_dir = scratch("run");
    const auto summary = run_into(c, materialize_workload(c), c.output_dir);
    CHECK(std::filesystem::exists(c.output_dir / "summary.json"));
    CHECK(std::filesystem::exists(c.output_dir / "config.json"));
    CHECK(std::filesystem::exists(c.output_dir / "heatmap.csv"));
    CHECK(summary["confirmed"] == 600);
    CHECK(nlohmann::json::parse(slurp(c.output_dir / "summary.json")) == summary);
    CHECK(run_config_from_json(nlohmann::json::parse(slurp(c.output_dir / "config.json"))) == c);
    std::filesystem::remove_all(c.output_dir);
}

TEST_CASE("all policies share one workload")
{
    auto c = tiny();
    c.output_dir = scratch("all");
    const auto rows = run_all_policies(c);
    REQUIRE(rows.size() == 4);
    for (const auto &r : rows) {
        CHECK(r.summary["workload_digest"] == rows[0].summary["workload_digest"]);
        CHECK(std::filesystem::exists(c.output_dir / r.label / "summary.json"));
    }
    const auto csv = slurp(c.output_dir / "policies.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    std::filesystem::remove_all(c.output_dir);
}

TEST_CASE("sweep writes one directory per value")
{
    auto c = tiny();
    c.output_dir = scratch("sweep");
    const auto axis = parse_sweep_axis("S=1,2,4");
    CHECK(axis.key == "shards");
    const auto rows = run_sweep(c, axis);
    REQUIRE(rows.size() == 3);
    for (const char *d : {"shards_1", "shards_2", "shards_4"})
        CHECK(std::filesystem::exists(c.output_dir / d / "summary.json"));
    CHECK(rows[0].summary["ctx_ratio"] == 0.0);
    CHECK(rows[2].summary["config"]["shards"] == 4);
    CHECK(std::filesystem::exists(c.output_dir / "sweep.csv"));
    CHECK(code_of([] { parse_sweep_axis("S="); }) == errc::config_invalid);
    CHECK(code_of([] { parse_sweep_axis("S=1,,2"); }) == errc::config_invalid);
    std::filesystem::remove_all(c.output_dir);
}

TEST_CASE("number lists and security tables")
{
    CHECK(parse_number_list("100..250", 50) == std::vector<double>{100, 150, 200, 250});
    CHECK(parse_number_list("0.08,0.2", 0.01) == std::vector<double>{0.08, 0.2});
    CHECK(parse_number_list("0.1..0.3", 0.1).size() == 3);
    CHECK_THROWS_AS(parse_number_list("5..1", 1), error);
    CHECK_THROWS_AS(parse_number_list("x", 1), error);

    const auto p = pshard_table({100, 250}, {0.08, 0.2}, 1.0, 0, 1);
    REQUIRE(p.size() == 4);
    CHECK(p[0].probability > p[1].probability);
    CHECK(p[2].probability > p[0].probability);
    CHECK_FALSE(p[0].bound.has_value());

    const auto m = mshard_table(4000, {16, 24, 32, 40}, {0.2}, 0, 1);
    REQUIRE(m.size() == 4);
    CHECK(m[0].size == 250);
    CHECK(m[1].size == 166);
    for (std::size_t i = 1; i < m.size(); ++i)
        CHECK(m[i].probability > m[i - 1].probability);
    for (const auto &r : m)
        CHECK(*r.bound >= r.probability);

    const auto csv = param_sweep_csv(pshard_table({60}, {0.25}, 1.0, 2000, 3));
    CHECK(csv.rfind("kind,size,shards,phi,upsilon,probability,bound,mc_estimate,mc_se\npshard,60,1,0.25,0.25,", 0) == 0);
}
