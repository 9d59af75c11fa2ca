// SPDX-License-Identifier: Apache-2.0
//
// hmimos-tts: two-timescale beamforming for holographic MIMO surfaces
// Copyright (C) 2026 The hmimos-tts authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command-line driver for the experiments and the validation suite.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hmimos/experiments.hpp"
#include "hmimos/validation.hpp"

using namespace hmimos;

namespace
{
    struct GlobalOptions
    {
        std::string profile = "table1";
        std::string config_path;
        std::optional<std::uint64_t> seed;
        std::string out;
        bool serial = false;
    };

    Setup setup_from(const GlobalOptions &g)
    {
        ExperimentConfig cfg =
            load_config(g.profile, g.config_path.empty() ? std::nullopt : std::optional<std::string>(g.config_path));
        if (g.seed)
            cfg.seeds.master = *g.seed;
        if (!g.out.empty())
            cfg.output_dir = g.out;
        if (g.serial)
            cfg.cssca.execution = ExecutionPolicy::serial;
        return make_setup(cfg);
    }

    void print_comparison(const ComparisonReport &rep)
    {
        for (const ComparisonRow &r : rep.rows)
            std::printf("delta %-5s %-17s %10.3f dBm  violations %.3f\n", format_number(r.delta).c_str(),
                        r.result.name.c_str(), watts_to_dbm(r.result.avg_power_watts), r.result.qos_violation_rate);
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Two-timescale beamforming simulator for holographic MIMO surfaces"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--profile", g.profile, "Built-in defaults")->check(CLI::IsMember({"table1", "ci"}));
    app.add_option("--config", g.config_path, "JSON file overriding profile fields")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "Master seed");
    app.add_option("--out", g.out, "Output directory");
    app.add_flag("--serial", g.serial, "Evaluate training batches serially");

    auto *conv = app.add_subcommand("convergence", "Long-term trajectories for each configured delta");
    auto *sweep = app.add_subcommand("sweep-delta", "Proposed method and baselines over the delta grid");
    auto *quant = app.add_subcommand("sweep-quant", "Quantized beampatterns and precoders");
    auto *compare = app.add_subcommand("compare", "Proposed method and baselines at the configured thresholds");
    auto *validate = app.add_subcommand("validate", "Cross-module invariant checks");
    bool negative_control = false;
    validate->add_flag("--negative-control", negative_control, "Perturb one gradient entry; the suite must fail");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        // --help exits 0; malformed arguments share the invalid-input status.
        return app.exit(e) == 0 ? 0 : 2;
    }

    try
    {
        if (validate->parsed())
        {
            setup_from(g); // reject a bad config file even though the checks use fixed dimensions
            ValidationOptions opts;
            if (g.seed)
                opts.seed = *g.seed;
            opts.perturb_gradient = negative_control;
            bool ok = true;
            for (const CheckResult &r : run_validation(opts))
            {
                std::printf("%s  %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
                ok = ok && r.passed;
            }
            return ok ? 0 : 1;
        }

        const Setup setup = setup_from(g);
        const ExperimentConfig &cfg = setup.config;
        std::printf("profile %s  config %s  seed %llu\n", cfg.profile.c_str(), hash_hex(setup.hash).c_str(),
                    static_cast<unsigned long long>(cfg.seeds.master));

        if (conv->parsed())
        {
            const ConvergenceReport rep = run_convergence(setup, cfg.convergence_deltas, cfg.seeds.replications);
            write_convergence(setup, rep, cfg.output_dir);
            for (std::size_t i = 0; i < rep.deltas.size(); ++i)
                std::printf("delta %-5s mean final power %.3f dBm\n", format_number(rep.deltas[i]).c_str(),
                            watts_to_dbm(rep.mean_final_power[i]));
        }
        else if (sweep->parsed())
        {
            const ComparisonReport rep = run_comparison(setup, cfg.sweep_deltas, cfg.intervals);
            write_comparison(setup, rep, cfg.output_dir, "sweep_delta");
            print_comparison(rep);
        }
        else if (compare->parsed())
        {
            const ComparisonReport rep = run_comparison(setup, {}, cfg.intervals);
            write_comparison(setup, rep, cfg.output_dir, "compare");
            print_comparison(rep);
            for (const OrderingCheck &c : ordering_checks(rep, rep.rows.front().delta))
                std::printf("%s  %s\n", c.passed ? "ok  " : "miss", c.name.c_str());
        }
        else if (quant->parsed())
        {
            const QuantReport rep = run_quant_sweep(setup, cfg.seeds.replications);
            write_quant(setup, rep, cfg.output_dir);
            for (std::size_t b = 0; b < rep.bits.size(); ++b)
                std::printf("Q=%-2d power gap %.4f dB  SE gap %.4f\n", rep.bits[b], rep.mean_power_gap_db[b],
                            rep.mean_se_gap[b]);
        }
        std::printf("wrote %s\n", cfg.output_dir.c_str());
    }
    catch (const InvalidArgument &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
