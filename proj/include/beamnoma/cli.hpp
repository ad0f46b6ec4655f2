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

#pragma once

// Command-line front end: JSON experiment configs, figure presets, CSV output and the validation report.
// Commands write to caller-supplied streams and return process exit codes.

#include "beamnoma/montecarlo.hpp"
#include "beamnoma/validation.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace beamnoma::cli
{
    enum ExitCode : int
    {
        exit_ok = 0,
        exit_validation_failed = 1,
        exit_usage = 2,
        exit_io = 3
    };

    /// Error carrying the exit code it maps to.
    class CliError : public std::runtime_error
    {
      public:
        CliError(int code, const std::string &what) : std::runtime_error(what), code_(code) {}
        int code() const { return code_; }

      private:
        int code_;
    };

    // ------------------------------------------------------------------------
    // Parsing helpers

    /// Parses "a:b:step" into a, a + step, ... up to b inclusive.
    inline std::vector<double> parse_snr_range(std::string_view text)
    {
        std::vector<double> parts;
        std::string s(text);
        std::size_t start = 0;
        while (true)
        {
            const std::size_t colon = s.find(':', start);
            const std::string piece = s.substr(start, colon == std::string::npos ? std::string::npos : colon - start);
            std::size_t used = 0;
            double v = 0.0;
            try
            {
                v = std::stod(piece, &used);
            }
            catch (const std::exception &)
            {
                used = 0;
            }
            if (piece.empty() || used != piece.size() || !std::isfinite(v))
                throw CliError(exit_usage, "invalid SNR range '" + s + "': expected a:b:step in dB");
            parts.push_back(v);
            if (colon == std::string::npos)
                break;
            start = colon + 1;
        }
        if (parts.size() == 1)
            return parts;
        if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
            throw CliError(exit_usage, "invalid SNR range '" + s + "': expected a:b:step with a <= b and step > 0");
        std::vector<double> grid;
        const double slack = 1e-9 * parts[2];
        for (std::size_t k = 0;; ++k)
        {
            const double v = parts[0] + static_cast<double>(k) * parts[2];
            if (v > parts[1] + slack)
                break;
            grid.push_back(v);
        }
        return grid;
    }

    /// Parses a comma separated list of beam counts, e.g. "2,4".
    inline std::vector<std::size_t> parse_size_list(std::string_view text)
    {
        std::vector<std::size_t> out;
        std::stringstream ss{std::string(text)};
        std::string item;
        while (std::getline(ss, item, ','))
        {
            std::size_t used = 0;
            unsigned long v = 0;
            try
            {
                v = std::stoul(item, &used);
            }
            catch (const std::exception &)
            {
                used = 0;
            }
            if (item.empty() || used != item.size() || v == 0)
                throw CliError(exit_usage, "invalid beam count list '" + std::string(text) + "'");
            out.push_back(v);
        }
        if (out.empty())
            throw CliError(exit_usage, "empty beam count list");
        return out;
    }

    // ------------------------------------------------------------------------
    // Experiment configuration

    namespace detail
    {
        using nlohmann::json;

        [[noreturn]] inline void field_error(std::string_view field, std::string_view expected)
        {
            throw CliError(exit_usage, "config field '" + std::string(field) + "': expected " + std::string(expected));
        }

        inline const json &require(const json &root, std::string_view field)
        {
            const auto it = root.find(field);
            if (it == root.end())
                throw CliError(exit_usage, "config is missing required field '" + std::string(field) + "'");
            return *it;
        }

        inline std::uint64_t as_count(const json &v, std::string_view field, bool allow_zero)
        {
            if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
                field_error(field, allow_zero ? "a non-negative integer" : "a positive integer");
            const std::uint64_t u = v.get<std::uint64_t>();
            if (!allow_zero && u == 0)
                field_error(field, "a positive integer");
            return u;
        }

        inline double as_real(const json &v, std::string_view field)
        {
            if (!v.is_number())
                field_error(field, "a number");
            return v.get<double>();
        }

        inline std::string as_string(const json &v, std::string_view field)
        {
            if (!v.is_string())
                field_error(field, "a string");
            return v.get<std::string>();
        }

        /// 1-based line and column of a byte offset.
        inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte)
        {
            std::size_t line = 1;
            std::size_t col = 1;
            for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i)
            {
                if (text[i] == '\n')
                {
                    ++line;
                    col = 1;
                }
                else
                    ++col;
            }
            return {line, col};
        }
    }

    /// Fields accepted in an experiment config.
    inline const std::vector<std::string_view> &config_fields()
    {
        static const std::vector<std::string_view> fields{"n_antennas", "m_beams",  "snr_db", "r_p_bpcu",
                                                          "r_s_bpcu",   "trials",   "seed",   "schemes",
                                                          "metric",     "candidate_strategy"};
        return fields;
    }

    /// Parses a JSON experiment config into a validated sweep. Errors throw CliError with exit_usage.
    ///
    /// `trials`, `seed`, `metric` and `candidate_strategy` are optional; the rest are required.
    /// `snr_db` is a number, a list of numbers or an "a:b:step" string.
    inline SweepSpec parse_experiment_config(std::string_view text)
    {
        using detail::json;
        json root;
        try
        {
            root = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            const auto [line, col] = detail::line_column(text, e.byte);
            throw CliError(exit_usage, "config parse error at line " + std::to_string(line) + ", column " +
                                           std::to_string(col) + ": " + e.what());
        }
        if (!root.is_object())
            throw CliError(exit_usage, "config must be a JSON object");
        for (const auto &item : root.items())
        {
            const auto &known = config_fields();
            if (std::find(known.begin(), known.end(), item.key()) == known.end())
                throw CliError(exit_usage, "unknown config field '" + item.key() + "'");
        }

        SweepSpec spec;
        spec.cfg_template.n_antennas = detail::as_count(detail::require(root, "n_antennas"), "n_antennas", false);
        spec.cfg_template.m_beams = detail::as_count(detail::require(root, "m_beams"), "m_beams", false);
        spec.cfg_template.r_p = detail::as_real(detail::require(root, "r_p_bpcu"), "r_p_bpcu");
        spec.cfg_template.r_s = detail::as_real(detail::require(root, "r_s_bpcu"), "r_s_bpcu");

        const json &snr = detail::require(root, "snr_db");
        if (snr.is_number())
            spec.snr_grid_db = {snr.get<double>()};
        else if (snr.is_string())
            spec.snr_grid_db = parse_snr_range(snr.get<std::string>());
        else if (snr.is_array())
        {
            for (const json &v : snr)
                spec.snr_grid_db.push_back(detail::as_real(v, "snr_db"));
        }
        else
            detail::field_error("snr_db", "a number, a list of numbers or an \"a:b:step\" string");

        const json &schemes = detail::require(root, "schemes");
        if (!schemes.is_array())
            detail::field_error("schemes", "a list of scheme names");
        try
        {
            for (const json &v : schemes)
                spec.schemes.push_back(parse_scheme(detail::as_string(v, "schemes")));
            if (const auto it = root.find("trials"); it != root.end())
                spec.trials = detail::as_count(*it, "trials", false);
            if (const auto it = root.find("seed"); it != root.end())
                spec.seed = detail::as_count(*it, "seed", true);
            if (const auto it = root.find("metric"); it != root.end())
                spec.metric = parse_metric(detail::as_string(*it, "metric"));
            if (const auto it = root.find("candidate_strategy"); it != root.end())
                spec.candidate_strategy = parse_strategy(detail::as_string(*it, "candidate_strategy"));
            spec.validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw CliError(exit_usage, std::string("invalid config: ") + e.what());
        }
        return spec;
    }

    inline std::string read_file(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw CliError(exit_io, "cannot read '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    // ------------------------------------------------------------------------
    // Presets

    /// A set of sweeps sharing one CSV, with metadata describing their assumptions.
    struct Experiment
    {
        std::vector<SweepSpec> sweeps;
        std::vector<std::string> metadata;
    };

    /// Command-line overrides shared by `sweep` and `preset`.
    struct Overrides
    {
        std::optional<std::size_t> trials;
        std::optional<std::uint64_t> seed;
        std::optional<std::vector<double>> snr_grid_db;
        std::optional<CandidateStrategy> strategy;
        std::optional<Metric> metric;
        std::optional<std::vector<std::size_t>> m_values;
        std::optional<double> r_p;
        std::optional<double> r_s;
    };

    inline void apply_overrides(SweepSpec &spec, const Overrides &o)
    {
        if (o.trials)
            spec.trials = *o.trials;
        if (o.seed)
            spec.seed = *o.seed;
        if (o.snr_grid_db)
            spec.snr_grid_db = *o.snr_grid_db;
        if (o.strategy)
            spec.candidate_strategy = *o.strategy;
        if (o.metric)
            spec.metric = *o.metric;
        if (o.r_p)
            spec.cfg_template.r_p = *o.r_p;
        if (o.r_s)
            spec.cfg_template.r_s = *o.r_s;
    }

    inline const std::vector<std::string_view> &preset_names()
    {
        static const std::vector<std::string_view> names{"fig1a", "fig1b", "fig2a", "fig2b"};
        return names;
    }

    namespace detail
    {
        inline std::string join_sizes(const std::vector<std::size_t> &v)
        {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i)
                s += (i ? "," : "") + std::to_string(v[i]);
            return s;
        }

        inline std::string number(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.10g", v);
            return buf;
        }
    }

    /// Builds a figure preset. Unknown names throw CliError with exit_usage.
    ///
    /// fig1a: selection outage. fig1b: selection ergodic rate. fig2a: selection vs Scheme I ergodic rate.
    /// fig2b: selection vs Scheme II ergodic rate. All use N = M, M in {2, 4}, R^P = 0.1 and R^S = 1 BPCU,
    /// SNR 0:40:5 dB and 10^4 trials unless overridden.
    inline Experiment make_preset(std::string_view name, const Overrides &o = {})
    {
        SweepSpec base;
        base.cfg_template.r_p = 0.1;
        base.cfg_template.r_s = 1.0;
        base.snr_grid_db = parse_snr_range("0:40:5");
        base.trials = 10000;
        base.seed = 1;
        std::string title;
        if (name == "fig1a")
        {
            base.schemes = {Scheme::selection};
            base.metric = Metric::outage;
            title = "beam selection outage probability vs SNR";
        }
        else if (name == "fig1b")
        {
            base.schemes = {Scheme::selection};
            base.metric = Metric::ergodic_rate;
            title = "beam selection ergodic secondary rate vs SNR";
        }
        else if (name == "fig2a")
        {
            base.schemes = {Scheme::selection, Scheme::scheme1};
            base.metric = Metric::ergodic_rate;
            title = "ergodic secondary rate, selection vs scheme1";
        }
        else if (name == "fig2b")
        {
            base.schemes = {Scheme::selection, Scheme::scheme2};
            base.metric = Metric::ergodic_rate;
            title = "ergodic secondary rate, selection vs scheme2";
        }
        else
            throw CliError(exit_usage, "unknown preset '" + std::string(name) + "' (expected fig1a, fig1b, fig2a or fig2b)");
        apply_overrides(base, o);

        const std::vector<std::size_t> m_values = o.m_values.value_or(std::vector<std::size_t>{2, 4});
        Experiment exp;
        exp.metadata = {"preset: " + std::string(name), "description: " + title,
                        "r_p_bpcu: " + detail::number(base.cfg_template.r_p),
                        "r_s_bpcu: " + detail::number(base.cfg_template.r_s),
                        "candidate_strategy: " + std::string(to_string(base.candidate_strategy))};
        if (!o.m_values)
            exp.metadata.push_back("assumption: M in {" + detail::join_sizes(m_values) +
                                   "}, preset default, override with --m-values");
        exp.metadata.push_back("assumption: N = M, preset default");
        if ((name == "fig1a" || name == "fig1b") && !o.r_p)
            exp.metadata.push_back("assumption: R^P = 0.1 BPCU, preset default, override with --rp");
        if (base.metric == Metric::ergodic_rate)
            exp.metadata.push_back("note: ergodic_rate counts a trial's rate only when SIC succeeds");

        for (std::size_t m : m_values)
        {
            SweepSpec s = base;
            s.cfg_template.n_antennas = m;
            s.cfg_template.m_beams = m;
            try
            {
                s.validate();
            }
            catch (const std::invalid_argument &e)
            {
                throw CliError(exit_usage, std::string("invalid preset parameters: ") + e.what());
            }
            exp.sweeps.push_back(std::move(s));
        }
        return exp;
    }

    // ------------------------------------------------------------------------
    // Output

    inline const char *csv_header() { return "snr_db,n,m,scheme,metric,value,std_err,trials,seed,resamples"; }

    inline std::string format_row(const SweepRow &row, std::uint64_t seed)
    {
        char buf[512];
        std::snprintf(buf, sizeof(buf), "%.10g,%zu,%zu,%s,%s,%.17g,%.17g,%zu,%llu,%zu", row.snr_db, row.n_antennas,
                      row.m_beams, std::string(to_string(row.scheme)).c_str(),
                      std::string(to_string(row.metric)).c_str(), row.estimate.value, row.estimate.std_err,
                      row.estimate.trials, static_cast<unsigned long long>(seed), row.estimate.resamples);
        return buf;
    }

    /// Renders results as CSV: `#` metadata lines, the header, one row per (sweep, SNR, scheme).
    inline std::string render_csv(const std::vector<std::string> &metadata, const std::vector<SweepResult> &results)
    {
        std::string out;
        for (const std::string &line : metadata)
            out += "# " + line + "\n";
        out += csv_header();
        out += "\n";
        for (const SweepResult &r : results)
            for (const SweepRow &row : r.rows)
                out += format_row(row, r.seed) + "\n";
        return out;
    }

    /// Fixed-width table of estimates for terminal reading.
    inline std::string render_summary(const std::vector<SweepResult> &results)
    {
        std::string out;
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%8s %4s %4s  %-10s %-28s %12s %12s\n", "snr_db", "n", "m", "scheme", "metric",
                      "value", "std_err");
        out += buf;
        for (const SweepResult &r : results)
            for (const SweepRow &row : r.rows)
            {
                std::snprintf(buf, sizeof(buf), "%8.2f %4zu %4zu  %-10s %-28s %12.6f %12.6f\n", row.snr_db,
                              row.n_antennas, row.m_beams, std::string(to_string(row.scheme)).c_str(),
                              std::string(to_string(row.metric)).c_str(), row.estimate.value, row.estimate.std_err);
                out += buf;
            }
        return out;
    }

    /// Writes text to `path`, or to `stdout_stream` when path is "-". Throws CliError with exit_io.
    inline void write_output(const std::string &path, const std::string &text, std::ostream &stdout_stream)
    {
        if (path == "-")
        {
            stdout_stream << text;
            stdout_stream.flush();
            return;
        }
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw CliError(exit_io, "cannot open '" + path + "' for writing");
        out << text;
        out.flush();
        if (!out)
            throw CliError(exit_io, "failed writing '" + path + "'");
    }

    // ------------------------------------------------------------------------
    // Commands

    struct RunOptions
    {
        std::string out_path = "-";
        std::size_t workers = 0;  // 0: hardware concurrency
        bool summary = false;
    };

    inline std::size_t resolve_workers(std::size_t requested)
    {
        if (requested > 0)
            return requested;
        return std::max(1u, std::thread::hardware_concurrency());
    }

    namespace detail
    {
        inline int run_experiment(const Experiment &exp, const RunOptions &run, std::ostream &out, std::ostream &err)
        {
            std::vector<SweepResult> results;
            for (const SweepSpec &s : exp.sweeps)
                results.push_back(estimate(s, resolve_workers(run.workers)));
            write_output(run.out_path, render_csv(exp.metadata, results), out);
            if (run.summary)
                (run.out_path == "-" ? err : out) << render_summary(results);
            return exit_ok;
        }

        template <typename Fn>
        int guarded(std::ostream &err, Fn &&fn)
        {
            try
            {
                return fn();
            }
            catch (const CliError &e)
            {
                err << "error: " << e.what() << "\n";
                return e.code();
            }
            catch (const std::invalid_argument &e)
            {
                err << "error: " << e.what() << "\n";
                return exit_usage;
            }
        }
    }

    /// Runs the sweep described by a JSON config file.
    inline int cmd_sweep(const std::string &config_path, const Overrides &o, const RunOptions &run, std::ostream &out,
                         std::ostream &err)
    {
        return detail::guarded(err, [&] {
            SweepSpec spec = parse_experiment_config(read_file(config_path));
            apply_overrides(spec, o);
            if (o.m_values)
                throw CliError(exit_usage, "--m-values applies to presets only");
            try
            {
                spec.validate();
            }
            catch (const std::invalid_argument &e)
            {
                throw CliError(exit_usage, std::string("invalid config: ") + e.what());
            }
            Experiment exp;
            exp.metadata = {"config: " + config_path,
                            "candidate_strategy: " + std::string(to_string(spec.candidate_strategy))};
            exp.sweeps.push_back(std::move(spec));
            return detail::run_experiment(exp, run, out, err);
        });
    }

    /// Runs a figure preset.
    inline int cmd_preset(std::string_view name, const Overrides &o, const RunOptions &run, std::ostream &out,
                          std::ostream &err)
    {
        return detail::guarded(err, [&] { return detail::run_experiment(make_preset(name, o), run, out, err); });
    }

    /// Renders a validation report; deterministic for a given seed.
    inline std::string render_report(const std::vector<CheckResult> &checks, std::uint64_t seed)
    {
        std::string out = "validation report, seed " + std::to_string(seed) + "\n";
        char buf[512];
        std::size_t passed = 0;
        for (const CheckResult &c : checks)
        {
            std::snprintf(buf, sizeof(buf), "%-4s  %-13s %-22s %s\n", c.passed ? "PASS" : "FAIL", c.suite.c_str(),
                          c.name.c_str(), c.detail.c_str());
            out += buf;
            passed += c.passed ? 1 : 0;
        }
        out += std::to_string(passed) + "/" + std::to_string(checks.size()) + " checks passed\n";
        return out;
    }

    /// Runs a validation suite; exit_validation_failed if any check fails.
    inline int cmd_validate(std::string_view suite, std::uint64_t seed, const std::string &out_path, std::ostream &out,
                            std::ostream &err)
    {
        return detail::guarded(err, [&] {
            std::vector<CheckResult> checks;
            try
            {
                checks = run_validation(suite, seed);
            }
            catch (const std::invalid_argument &e)
            {
                throw CliError(exit_usage, e.what());
            }
            write_output(out_path, render_report(checks, seed), out);
            for (const CheckResult &c : checks)
                if (!c.passed)
                {
                    err << "validation failed: " << c.suite << "/" << c.name << "\n";
                    return static_cast<int>(exit_validation_failed);
                }
            return static_cast<int>(exit_ok);
        });
    }
}
