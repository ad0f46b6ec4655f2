// SPDX-License-Identifier: Apache-2.0
//
// beamnoma - NOMA on preconfigured zero-forcing beams, link-level simulator
// Copyright (C) 2026 The beamnoma authors
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

#include "beamnoma/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace beamnoma;

namespace
{
    struct RawFlags
    {
        std::optional<std::size_t> trials;
        std::optional<std::uint64_t> seed;
        std::string snr_db;
        std::string strategy;
        std::string metric;
        std::string m_values;
        std::optional<double> r_p;
        std::optional<double> r_s;
    };

    void add_override_flags(CLI::App *cmd, RawFlags &f, cli::RunOptions &run, bool presets)
    {
        cmd->add_option("--trials", f.trials, "Monte Carlo trials per SNR point")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", f.seed, "Experiment seed");
        cmd->add_option("--snr-db", f.snr_db, "SNR grid in dB as a:b:step (or a single value)");
        cmd->add_option("--strategy", f.strategy, "Candidate sets: prefixes, prefixes+singletons, all-subsets");
        cmd->add_option("--metric", f.metric,
                        "Metric: outage, ergodic_rate, ergodic_rate_unconditioned, primary_min_rate");
        cmd->add_option("--rp", f.r_p, "Legacy target rate R^P in BPCU");
        cmd->add_option("--rs", f.r_s, "Secondary target rate R^S in BPCU");
        if (presets)
            cmd->add_option("--m-values", f.m_values, "Comma separated beam counts, N = M");
        cmd->add_option("--out", run.out_path, "Output CSV path, - for standard output")->capture_default_str();
        cmd->add_option("--workers", run.workers, "Worker threads, 0 for all cores")->capture_default_str();
        cmd->add_flag("--summary", run.summary, "Also print a summary table");
    }

    cli::Overrides resolve(const RawFlags &f)
    {
        cli::Overrides o;
        o.trials = f.trials;
        o.seed = f.seed;
        o.r_p = f.r_p;
        o.r_s = f.r_s;
        try
        {
            if (!f.snr_db.empty())
                o.snr_grid_db = cli::parse_snr_range(f.snr_db);
            if (!f.strategy.empty())
                o.strategy = parse_strategy(f.strategy);
            if (!f.metric.empty())
                o.metric = parse_metric(f.metric);
            if (!f.m_values.empty())
                o.m_values = cli::parse_size_list(f.m_values);
        }
        catch (const std::invalid_argument &e)
        {
            throw cli::CliError(cli::exit_usage, e.what());
        }
        return o;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"beamnoma: NOMA secondary user on preconfigured zero-forcing beams"};
    app.require_subcommand(1);

    RawFlags sweep_flags;
    cli::RunOptions sweep_run;
    std::string config_path;
    CLI::App *sweep = app.add_subcommand("sweep", "Run a sweep from a JSON experiment config");
    sweep->add_option("--config", config_path, "Experiment config (JSON)")->required();
    add_override_flags(sweep, sweep_flags, sweep_run, false);

    RawFlags preset_flags;
    cli::RunOptions preset_run;
    std::string preset_name;
    CLI::App *preset = app.add_subcommand("preset", "Run a figure preset");
    preset->add_option("name", preset_name, "fig1a, fig1b, fig2a or fig2b")->required();
    add_override_flags(preset, preset_flags, preset_run, true);

    std::string suite = "all";
    std::uint64_t validate_seed = 1;
    std::string validate_out = "-";
    CLI::App *validate = app.add_subcommand("validate", "Run the built-in validation checks");
    validate->add_option("suite", suite, "zf, distribution, solver, dominance, lemma1 or all")->capture_default_str();
    validate->add_option("--seed", validate_seed, "Seed for the checks")->capture_default_str();
    validate->add_option("--out", validate_out, "Report path, - for standard output")->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::exit_usage;
    }

    try
    {
        if (*sweep)
            return cli::cmd_sweep(config_path, resolve(sweep_flags), sweep_run, std::cout, std::cerr);
        if (*preset)
            return cli::cmd_preset(preset_name, resolve(preset_flags), preset_run, std::cout, std::cerr);
        return cli::cmd_validate(suite, validate_seed, validate_out, std::cout, std::cerr);
    }
    catch (const cli::CliError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return e.code();
    }
}
