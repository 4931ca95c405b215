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

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "brokershard/cli/run_config.hpp"
#include "brokershard/cli/security_tables.hpp"
#include "brokershard/common/error.hpp"
#include "brokershard/metrics/metrics.hpp"
#include "brokershard/security/failure_probability.hpp"

using namespace brokershard;

namespace {

struct run_flags {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string policy;
    std::string out;
    std::string trace;
    std::optional<std::uint64_t> seed;
};

void add_run_flags(CLI::App *cmd, run_flags &f)
{
    cmd->add_option("-c,--config", f.config_path, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--set", f.overrides, "Override key=value (dotted paths; S, K, N_TX aliases)");
    cmd->add_option("-p,--policy", f.policy, "brokerchain, monoxide, lbf, metis or all");
    cmd->add_option("-o,--out", f.out, "Output directory");
    cmd->add_option("--trace", f.trace, "Replay a CSV trace instead of the synthetic workload");
    cmd->add_option("--seed", f.seed, "Top-level seed");
}

/// File, then BROKERSHARD_OUT, then flags; later sources win.
run_config assemble(const run_flags &f, bool &all_policies)
{
    run_config c = f.config_path.empty() ? run_config{} : load_run_config(f.config_path);
    apply_environment(c);
    for (const auto &o : f.overrides)
        apply_override(c, o);
    if (!f.trace.empty())
        apply_override(c, "trace=" + f.trace);
    if (f.seed)
        c.sim.seed = *f.seed;
    all_policies = f.policy == "all";
    if (!f.policy.empty() && !all_policies)
        c.sim.policy = parse_policy(f.policy);
    if (!f.out.empty())
        c.output_dir = f.out;
    c.validate();
    return c;
}

void print_row(const std::string &label, const nlohmann::json &s)
{
    std::printf("%-12s ctx_ratio=%.4f tps=%.2f mean_latency_ms=%.1f workload_variance=%.1f confirmed=%s refunded=%s\n",
                label.c_str(), s["ctx_ratio"].get<double>(), s["tps"].get<double>(),
                s["latency"]["all"]["mean_ms"].get<double>(), s["workload"]["variance"].get<double>(),
                s["confirmed"].dump().c_str(), s["refunded"].dump().c_str());
}

void emit_table(const std::vector<security_row> &rows, const std::string &out)
{
    const auto csv = param_sweep_csv(rows);
    std::cout << csv;
    if (!out.empty())
        write_text_file(out, "param_sweep.csv", csv);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Sharded ledger simulator with broker-mediated cross-shard transfers"};
    app.require_subcommand(1);

    run_flags run_f;
    auto *run_cmd = app.add_subcommand("run", "Run one simulation, or all four policies on one workload");
    add_run_flags(run_cmd, run_f);

    run_flags sweep_f;
    std::string vary;
    auto *sweep_cmd = app.add_subcommand("sweep", "One run per value of a config key");
    add_run_flags(sweep_cmd, sweep_f);
    sweep_cmd->add_option("--vary", vary, "key=v1,v2,... (e.g. S=8,16,32,64)")->required();

    auto *sec_cmd = app.add_subcommand("security", "Committee failure probabilities");
    sec_cmd->require_subcommand(1);
    double phi = 0.2;
    double alpha = 0.9;
    auto *ups_cmd = sec_cmd->add_subcommand("upsilon", "Malicious fraction amplified by the power ratio");
    ups_cmd->add_option("--phi", phi)->required();
    ups_cmd->add_option("--alpha", alpha)->required();

    std::string m_list = "100..250";
    std::string phi_list;
    double p_alpha = 1.0;
    double m_step = 10;
    double phi_step = 0.01;
    std::uint64_t mc_trials = 0;
    std::uint64_t mc_seed = 1;
    std::string table_out;
    auto *ps_cmd = sec_cmd->add_subcommand("pshard", "P-shard failure probability over m and phi");
    ps_cmd->add_option("--m", m_list, "Committee sizes: list and lo..hi ranges");
    ps_cmd->add_option("--m-step", m_step, "Step for m ranges");
    ps_cmd->add_option("--phi", phi_list, "Malicious power fractions")->required();
    ps_cmd->add_option("--phi-step", phi_step, "Step for phi ranges");
    ps_cmd->add_option("--alpha", p_alpha, "Power ratio; 1 means upsilon = phi");
    ps_cmd->add_option("--mc-trials", mc_trials, "Monte Carlo trials per point (0 disables)");
    ps_cmd->add_option("--mc-seed", mc_seed);
    ps_cmd->add_option("-o,--out", table_out, "Directory for param_sweep.csv");

    std::uint64_t total = 4000;
    std::string s_list = "16,24,32,40";
    std::string ms_phi_list = "0.05..0.33";
    auto *ms_cmd = sec_cmd->add_subcommand("mshard", "M-shard failure probability at a fixed node total");
    ms_cmd->add_option("--total", total, "Total nodes, split evenly across shards");
    ms_cmd->add_option("--S", s_list, "Shard counts");
    ms_cmd->add_option("--phi", ms_phi_list, "Malicious fractions");
    ms_cmd->add_option("--phi-step", phi_step, "Step for phi ranges");
    ms_cmd->add_option("--mc-trials", mc_trials, "Monte Carlo trials per point (0 disables)");
    ms_cmd->add_option("--mc-seed", mc_seed);
    ms_cmd->add_option("-o,--out", table_out, "Directory for param_sweep.csv");

    std::uint64_t tol_shards = 16;
    std::uint32_t lambda = 18;
    auto *tol_cmd = sec_cmd->add_subcommand("tolerance", "Largest phi keeping M-shard failure below 2^-lambda");
    tol_cmd->add_option("--total", total);
    tol_cmd->add_option("--S", tol_shards);
    tol_cmd->add_option("--lambda", lambda);

    double min_upsilon = 0.21;
    auto *min_cmd = sec_cmd->add_subcommand("min-size", "Smallest P-shard with failure below 2^-lambda");
    min_cmd->add_option("--upsilon", min_upsilon);
    min_cmd->add_option("--lambda", lambda);

    std::string gen_out;
    synthetic_spec gen;
    std::string gen_pop = "uniform";
    std::optional<std::size_t> gen_clusters;
    double gen_intra = 0.9;
    auto *gen_cmd = app.add_subcommand("gen-workload", "Write a synthetic trace as CSV (.gz compresses)");
    gen_cmd->add_option("-o,--out", gen_out, "Output path")->required();
    gen_cmd->add_option("--accounts", gen.n_accounts);
    gen_cmd->add_option("--txs", gen.n_txs);
    gen_cmd->add_option("--popularity", gen_pop)->check(CLI::IsMember({"uniform", "zipf"}));
    gen_cmd->add_option("--zipf-exponent", gen.zipf_exponent);
    gen_cmd->add_option("--clusters", gen_clusters, "Enable the community model with this many clusters");
    gen_cmd->add_option("--intra-prob", gen_intra);
    gen_cmd->add_option("--seed", gen.seed);

    std::string validate_path;
    auto *val_cmd = app.add_subcommand("validate-config", "Check a config file and print its canonical form");
    val_cmd->add_option("config", validate_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            bool all = false;
            const auto c = assemble(run_f, all);
            if (all) {
                for (const auto &row : run_all_policies(c))
                    print_row(row.label, row.summary);
            } else {
                const auto summary = run_into(c, materialize_workload(c), c.output_dir);
                print_row(std::string{to_string(c.sim.policy)}, summary);
            }
            std::printf("artifacts in %s\n", c.output_dir.c_str());
        } else if (sweep_cmd->parsed()) {
            bool all = false;
            const auto c = assemble(sweep_f, all);
            if (all)
                throw error(errc::config_invalid, "sweep takes a single policy");
            for (const auto &row : run_sweep(c, parse_sweep_axis(vary)))
                print_row(row.label, row.summary);
            std::printf("artifacts in %s\n", c.output_dir.c_str());
        } else if (ups_cmd->parsed()) {
            std::printf("%.6f\n", static_cast<double>(amplified_malicious_fraction(phi, alpha)));
        } else if (ps_cmd->parsed()) {
            emit_table(pshard_table(parse_number_list(m_list, m_step), parse_number_list(phi_list, phi_step), p_alpha,
                                    mc_trials, mc_seed),
                       table_out);
        } else if (ms_cmd->parsed()) {
            emit_table(mshard_table(total, parse_number_list(s_list, 1.0), parse_number_list(ms_phi_list, phi_step),
                                    mc_trials, mc_seed),
                       table_out);
        } else if (tol_cmd->parsed()) {
            if (tol_shards == 0 || total < tol_shards)
                throw error(errc::domain_error, "S must be in [1, total]");
            std::printf("%.6f\n", mshard_tolerance(total / tol_shards, tol_shards, lambda));
        } else if (min_cmd->parsed()) {
            std::printf("%llu\n", static_cast<unsigned long long>(
                                      min_committee_size(committee_target::pshard(min_upsilon), lambda)));
        } else if (gen_cmd->parsed()) {
            gen.pop = gen_pop == "zipf" ? popularity::zipf : popularity::uniform;
            if (gen_clusters)
                gen.community = community_model{*gen_clusters, gen_intra};
            gen.validate();
            const auto txs = generate_synthetic(gen);
            write_csv_trace(std::filesystem::path{gen_out}, txs);
            std::printf("%zu transactions, digest %s\n", txs.size(), workload_digest(txs).hex().c_str());
        } else if (val_cmd->parsed()) {
            const auto c = load_run_config(validate_path);
            c.validate();
            std::cout << to_json(c).dump(2) << '\n';
        }
    } catch (const error &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        const auto code = e.code();
        return code == errc::config_invalid || code == errc::parse_error || code == errc::missing_column
                       || code == errc::domain_error
                   ? 2
                   : 1;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
