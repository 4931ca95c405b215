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

#include "brokershard/cli/run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "brokershard/common/error.hpp"
#include "brokershard/common/seed.hpp"
#include "brokershard/metrics/metrics.hpp"
#include "brokershard/sim/simulator.hpp"

namespace brokershard {

namespace {

[[noreturn]] void invalid(const std::string &m) { throw error(errc::config_invalid, m); }

void reject_unknown(const nlohmann::json &j, std::initializer_list<std::string_view> keys, const std::string &where)
{
    if (!j.is_object())
        invalid(where + " must be an object");
    const std::set<std::string_view> known(keys);
    for (const auto &[k, _] : j.items())
        if (!known.contains(k))
            invalid("unknown key '" + k + "' in " + where);
}

template<typename T>
void read(const nlohmann::json &j, const char *key, T &out)
{
    if (!j.contains(key))
        return;
    if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>)
        if (!j.at(key).is_number_unsigned())
            invalid(std::string{key} + " must be a non-negative integer");
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception &e) {
        invalid(std::string{key} + ": " + e.what());
    }
}

nlohmann::json workload_to_json(const workload_source &w)
{
    if (w.trace)
        return {{"kind", "trace"}, {"path", w.trace->string()}};
    const auto &s = *w.synthetic;
    nlohmann::json community = nullptr;
    if (s.community)
        community = {{"clusters", s.community->clusters}, {"intra_prob", s.community->intra_prob}};
    return {
        {"kind", "synthetic"},
        {"n_accounts", s.n_accounts},
        {"n_txs", s.n_txs},
        {"popularity", s.pop == popularity::zipf ? "zipf" : "uniform"},
        {"zipf_exponent", s.zipf_exponent},
        {"community", community},
        {"seed", w.synthetic_seed ? nlohmann::json(*w.synthetic_seed) : nlohmann::json(nullptr)},
    };
}

workload_source workload_from_json(const nlohmann::json &j)
{
    if (!j.is_object())
        invalid("workload must be an object");
    const std::string kind = j.contains("kind") && j["kind"].is_string() ? j["kind"].get<std::string>() : "synthetic";
    workload_source w;
    if (kind == "trace") {
        reject_unknown(j, {"kind", "path"}, "workload");
        if (!j.contains("path") || !j["path"].is_string() || j["path"].get<std::string>().empty())
            invalid("trace workload needs a path");
        w.trace = j["path"].get<std::string>();
        return w;
    }
    if (kind != "synthetic")
        invalid("workload kind must be synthetic or trace");
    reject_unknown(j, {"kind", "n_accounts", "n_txs", "popularity", "zipf_exponent", "community", "seed"}, "workload");
    synthetic_spec s;
    read(j, "n_accounts", s.n_accounts);
    read(j, "n_txs", s.n_txs);
    if (j.contains("popularity")) {
        const auto &p = j["popularity"];
        if (p == "uniform")
            s.pop = popularity::uniform;
        else if (p == "zipf")
            s.pop = popularity::zipf;
        else
            invalid("popularity must be uniform or zipf");
    }
    read(j, "zipf_exponent", s.zipf_exponent);
    if (j.contains("community") && !j["community"].is_null()) {
        const auto &c = j["community"];
        reject_unknown(c, {"clusters", "intra_prob"}, "workload.community");
        community_model m;
        read(c, "clusters", m.clusters);
        read(c, "intra_prob", m.intra_prob);
        s.community = m;
    }
    if (j.contains("seed") && !j["seed"].is_null()) {
        std::uint64_t seed = 0;
        read(j, "seed", seed);
        w.synthetic_seed = seed;
    }
    w.synthetic = s;
    return w;
}

std::string format_value(const nlohmann::json &v)
{
    if (v.is_string())
        return v.get<std::string>();
    return v.dump();
}

} // namespace

workload_source run_config::default_workload()
{
    workload_source w;
    w.synthetic = synthetic_spec{};
    return w;
}

void run_config::validate() const
{
    sim.validate();
    if (workload.synthetic.has_value() == workload.trace.has_value())
        invalid("workload must be either synthetic or trace");
    if (workload.synthetic)
        workload.synthetic->validate();
    if (output_dir.empty())
        invalid("output_dir must not be empty");
}

nlohmann::json to_json(const run_config &c)
{
    auto j = to_json(c.sim);
    j["workload"] = workload_to_json(c.workload);
    j["output_dir"] = c.output_dir.string();
    return j;
}

run_config run_config_from_json(const nlohmann::json &j)
{
    if (!j.is_object())
        invalid("config must be an object");
    run_config c;
    auto sim = j;
    if (sim.contains("workload")) {
        c.workload = workload_from_json(sim["workload"]);
        sim.erase("workload");
    }
    if (sim.contains("output_dir")) {
        if (!sim["output_dir"].is_string())
            invalid("output_dir must be a string");
        c.output_dir = sim["output_dir"].get<std::string>();
        sim.erase("output_dir");
    }
    c.sim = sim_config_from_json(sim);
    return c;
}

run_config load_run_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw error(errc::io_error, "cannot open " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw error(errc::parse_error, path.string() + ": " + e.what());
    }
    return run_config_from_json(j);
}

std::string canonical_key(std::string_view key)
{
    if (key == "S")
        return "shards";
    if (key == "K")
        return "brokers";
    if (key == "N_TX")
        return "txs_per_epoch";
    if (key == "latency_ms" || key == "jitter_ms" || key == "drop_prob")
        return "network." + std::string{key};
    if (key == "threat1_prob" || key == "threat2_prob")
        return "adversary." + std::string{key};
    return std::string{key};
}

void apply_override(run_config &c, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        invalid("override '" + std::string{assignment} + "' is not key=value");
    const std::string key = canonical_key(assignment.substr(0, eq));
    const std::string text{assignment.substr(eq + 1)};
    nlohmann::json value;
    try {
        value = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &) {
        value = text;
    }

    auto j = to_json(c);
    if (key == "trace" || key == "workload.trace") {
        j["workload"] = {{"kind", "trace"}, {"path", text}};
    } else {
        nlohmann::json *node = &j;
        std::string_view rest = key;
        bool created = false;
        while (true) {
            const auto dot = rest.find('.');
            const std::string part{rest.substr(0, dot)};
            if (node->is_null()) {
                *node = nlohmann::json::object();
                created = true;
            }
            if (!node->is_object() || (!created && !node->contains(part)))
                invalid("unknown config key '" + key + "'");
            if (dot == std::string_view::npos) {
                (*node)[part] = value;
                break;
            }
            node = &(*node)[part];
            rest = rest.substr(dot + 1);
        }
    }
    c = run_config_from_json(j);
}

void apply_environment(run_config &c)
{
    if (const char *out = std::getenv("BROKERSHARD_OUT"); out != nullptr && *out != '\0')
        c.output_dir = out;
}

std::vector<workload_tx> materialize_workload(const run_config &c)
{
    if (c.workload.trace)
        return load_csv_trace(*c.workload.trace).txs;
    auto spec = *c.workload.synthetic;
    spec.seed = c.workload.synthetic_seed.value_or(derive_seed(c.sim.seed, "workload"));
    return generate_synthetic(spec);
}

sweep_axis parse_sweep_axis(std::string_view text)
{
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == text.size())
        invalid("sweep axis '" + std::string{text} + "' is not key=v1,v2,...");
    sweep_axis axis;
    axis.key = canonical_key(text.substr(0, eq));
    std::string_view rest = text.substr(eq + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto item = rest.substr(0, comma);
        if (item.empty())
            invalid("empty value in sweep axis '" + std::string{text} + "'");
        axis.values.emplace_back(item);
        if (comma == std::string_view::npos)
            break;
        rest = rest.substr(comma + 1);
    }
    return axis;
}

nlohmann::json run_into(const run_config &c, const std::vector<workload_tx> &workload,
                        const std::filesystem::path &dir)
{
    c.validate();
    const auto out = run_simulation(c.sim, workload);
    write_run_artifacts(dir, out);
    write_text_file(dir, "config.json", to_json(c).dump(2) + "\n");
    return out.summary();
}

std::vector<run_digest_row> run_all_policies(const run_config &c)
{
    c.validate();
    const auto workload = materialize_workload(c);
    std::vector<run_digest_row> rows;
    for (const auto policy : all_policies) {
        auto point = c;
        point.sim.policy = policy;
        const std::string label{to_string(policy)};
        point.output_dir = c.output_dir / label;
        rows.push_back({label, run_into(point, workload, point.output_dir)});
    }
    write_text_file(c.output_dir, "policies.csv", comparison_csv("policy", rows));
    return rows;
}

std::vector<run_digest_row> run_sweep(const run_config &c, const sweep_axis &axis)
{
    std::vector<run_digest_row> rows;
    for (const auto &v : axis.values) {
        auto point = c;
        apply_override(point, axis.key + "=" + v);
        point.output_dir = c.output_dir / (axis.key + "_" + v);
        const auto workload = materialize_workload(point);
        rows.push_back({v, run_into(point, workload, point.output_dir)});
    }
    write_text_file(c.output_dir, "sweep.csv", comparison_csv(axis.key, rows));
    return rows;
}

std::string comparison_csv(const std::string &label_column, const std::vector<run_digest_row> &rows)
{
    std::ostringstream os;
    os << label_column
       << ",workload_digest,summary_digest,shards,ctx_ratio,analytic_ctx_ratio,tps,mean_latency_ms,"
          "cross_mean_latency_ms,workload_total,workload_variance,confirmed,refunded,rejected,pending\n";
    for (const auto &r : rows) {
        const auto &s = r.summary;
        const double shards = s["config"]["shards"].get<double>();
        os << r.label << ',' << format_value(s["workload_digest"]) << ','
           << summary_digest(s.dump(2) + "\n") << ',' << s["config"]["shards"] << ',' << s["ctx_ratio"] << ','
           << (shards - 1.0) / shards << ',' << s["tps"] << ',' << s["latency"]["all"]["mean_ms"] << ','
           << s["latency"]["cross"]["mean_ms"] << ',' << s["workload"]["total"] << ','
           << s["workload"]["variance"] << ',' << s["confirmed"] << ',' << s["refunded"] << ',' << s["rejected"]
           << ',' << s["pending"] << '\n';
    }
    return os.str();
}

} // namespace brokershard
