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

#include "beamnoma/analysis.hpp"
#include "beamnoma/montecarlo.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace beamnoma
{
    /// One line of a validation report.
    struct CheckResult
    {
        std::string suite;
        std::string name;
        bool passed = false;
        std::string detail;
    };

    namespace detail
    {
        inline std::string fmt(const char *pattern, double a, double b = 0.0)
        {
            char buf[128];
            std::snprintf(buf, sizeof(buf), pattern, a, b);
            return buf;
        }
    }

    /// ZF orthogonality and per-beam normalization for N = M in {2, 3, 4}.
    inline std::vector<CheckResult> validate_zf(std::uint64_t seed, std::size_t trials = 1000)
    {
        double worst_cross = 0.0;
        double worst_norm = 0.0;
        for (std::size_t m : {2u, 3u, 4u})
        {
            const SystemConfig cfg(m, m, 1.0, 1.0, 1.0);
            for (std::uint64_t t = 0; t < trials; ++t)
            {
                const ChannelRealization chan = draw_realization(cfg, {seed, t});
                const CMatrix cross = chan.G.adjoint() * chan.F;
                double total = 0.0;
                for (Eigen::Index i = 0; i < cross.rows(); ++i)
                {
                    total += chan.F.col(i).squaredNorm();
                    for (Eigen::Index j = 0; j < cross.cols(); ++j)
                        if (i != j)
                            worst_cross = std::max(worst_cross, std::abs(cross(i, j)));
                }
                worst_norm = std::max(worst_norm, std::abs(total - 1.0));
            }
        }
        return {{"zf", "orthogonality", worst_cross < 1e-9, detail::fmt("max |g_m^H f_i| = %.3e", worst_cross)},
                {"zf", "normalization", worst_norm < 1e-9, detail::fmt("max |sum ||f||^2 - 1| = %.3e", worst_norm)}};
    }

    /// KS test of M g_1 against Gamma(N - M + 1, 1) and Monte Carlo agreement of the first-beam outage law.
    inline std::vector<CheckResult> validate_distribution(std::uint64_t seed, std::size_t samples = 10000)
    {
        std::vector<CheckResult> out;
        for (auto [n, m] : {std::pair<std::size_t, std::size_t>{2, 2}, {4, 4}, {4, 2}})
        {
            const SystemConfig cfg(n, m, 1.0, 1.0, 1.0);
            std::vector<double> x;
            x.reserve(samples);
            for (std::uint64_t t = 0; t < samples; ++t)
                x.push_back(static_cast<double>(m) * draw_realization(cfg, {seed, t}).g_gain[0]);
            const GainLaw law = GainLaw::for_system(n, m);
            const double d = ks_statistic(x, [&](double v) { return law.cdf(v); });
            const double crit = ks_critical_1pct(samples);
            out.push_back({"distribution", "gain_law_N" + std::to_string(n) + "_M" + std::to_string(m), d < crit,
                           detail::fmt("KS D = %.4f, critical = %.4f", d, crit)});
        }
        for (double snr_db : {0.0, 10.0, 20.0})
        {
            const SystemConfig cfg(2, 2, db_to_linear(snr_db), 1.0, 1.0);
            std::size_t hits = 0;
            for (std::uint64_t t = 0; t < samples; ++t)
                hits += draw_realization(cfg, {seed, t}).g_gain[0] <= cfg.eps_p() / cfg.rho() ? 1 : 0;
            const double p_hat = static_cast<double>(hits) / static_cast<double>(samples);
            const double p = q1_exact(2, 2, cfg.eps_p(), cfg.rho());
            const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
            out.push_back({"distribution", "q1_" + std::to_string(static_cast<int>(snr_db)) + "dB",
                           std::abs(p_hat - p) <= 3.0 * se,
                           detail::fmt("empirical = %.5f, exact = %.5f", p_hat, p)});
        }
        return out;
    }

    /// Singleton reduction, grid-oracle agreement and certification of the aggregation solver.
    inline std::vector<CheckResult> validate_solver(std::uint64_t seed, std::size_t trials = 2000,
                                                    std::size_t oracle_instances = 40)
    {
        double worst_singleton = 0.0;
        std::size_t certified = 0;
        std::size_t failed_cert = 0;
        for (std::uint64_t t = 0; t < trials; ++t)
        {
            const double snr_db = static_cast<double>(t % 5) * 10.0;
            const SystemConfig cfg(4, 4, db_to_linear(snr_db), 0.1, 1.0);
            const ChannelRealization chan = draw_realization(cfg, {seed, t});
            const PowerCoefficients base = mode_one_coefficients(chan.g_gain, cfg.rho(), cfg.eps_p());
            for (const auto &c : enumerate_candidates(chan, cfg, CandidateStrategy::prefixes_plus_singletons))
            {
                const AggregationSolution sol = solve_aggregation(c, chan.h_gain, cfg.eps_p());
                if (sol.status == SolveStatus::optimal)
                {
                    ++certified;
                    failed_cert += certify_solution(c, chan.h_gain, cfg.eps_p(), sol).empty() ? 0 : 1;
                }
                if (c.beams.size() != 1)
                    continue;
                const std::size_t m = c.beams.front();
                const double closed =
                    alpha_s_selection(m, chan.h_gain, chan.g_gain[m], base.alpha_p, cfg.rho(), cfg.eps_p());
                const double solved = sol.status == SolveStatus::optimal ? sol.alpha_s()[0] : 0.0;
                worst_singleton = std::max(worst_singleton, std::abs(closed - solved));
            }
        }

        double worst_gap = 0.0;
        std::size_t compared = 0;
        bool agree = true;
        for (std::uint64_t t = 0; compared < oracle_instances && t < 100 * oracle_instances; ++t)
        {
            const SystemConfig cfg(3, 3, db_to_linear(10.0 + static_cast<double>(t % 3) * 10.0), 0.1, 1.0);
            const ChannelRealization chan = draw_realization(cfg, {seed ^ 0x5eedULL, t});
            for (const auto &c : enumerate_candidates(chan, cfg, CandidateStrategy::prefixes))
            {
                if (c.beams.size() < 2 || c.infeasible || compared >= oracle_instances)
                    continue;
                const AggregationSolution exact = solve_aggregation(c, chan.h_gain, cfg.eps_p());
                const AggregationSolution grid = oracle_grid_solver(c, chan.h_gain, cfg.eps_p(), 2e-3);
                if (exact.status != grid.status)
                {
                    agree = false;
                    continue;
                }
                if (exact.status != SolveStatus::optimal)
                    continue;
                double scale = 0.0;
                for (std::size_t b : c.beams)
                    scale += std::sqrt(chan.h_gain[b]);
                const double gap = (exact.t_star - grid.t_star) / scale;
                worst_gap = std::max(worst_gap, std::abs(gap));
                agree = agree && gap >= -1e-9 && gap <= 2e-3;
                ++compared;
            }
        }
        return {{"solver", "singleton_reduction", worst_singleton < 1e-9,
                 detail::fmt("max |alpha_s - closed form| = %.3e", worst_singleton)},
                {"solver", "oracle_agreement", agree && compared == oracle_instances,
                 detail::fmt("instances = %.0f, max relative gap = %.3e", static_cast<double>(compared), worst_gap)},
                {"solver", "certifier", failed_cert == 0,
                 detail::fmt("certified = %.0f, violations = %.0f", static_cast<double>(certified),
                             static_cast<double>(failed_cert))}};
    }

    /// Pointwise dominance of the aggregated scheme over selection.
    inline std::vector<CheckResult> validate_dominance(std::uint64_t seed, std::size_t trials = 2000)
    {
        std::vector<CheckResult> out;
        for (double snr_db : {10.0, 20.0, 30.0})
        {
            const SystemConfig cfg(4, 4, db_to_linear(snr_db), 0.1, 1.0);
            double worst = INFINITY;
            double sum2 = 0.0;
            double sum_sel = 0.0;
            for (std::uint64_t t = 0; t < trials; ++t)
            {
                const ChannelRealization chan = draw_realization(cfg, {seed, t});
                const double r2 =
                    evaluate_scheme2(chan, cfg, CandidateStrategy::prefixes_plus_singletons).secondary_rate;
                const double rs = evaluate_selection(chan, cfg).secondary_rate;
                worst = std::min(worst, r2 - rs);
                sum2 += r2;
                sum_sel += rs;
            }
            out.push_back({"dominance", "pointwise_" + std::to_string(static_cast<int>(snr_db)) + "dB",
                           worst >= -1e-12 && sum2 > sum_sel,
                           detail::fmt("min(scheme2 - selection) = %.3e, mean gain = %.4f", worst,
                                       (sum2 - sum_sel) / static_cast<double>(trials))});
        }
        return out;
    }

    /// Selection outage keeps falling with SNR (no error floor).
    inline std::vector<CheckResult> validate_no_floor(std::uint64_t seed, std::size_t trials = 20000)
    {
        SweepSpec spec;
        spec.cfg_template = {2, 2, 0.1, 1.0};
        spec.snr_grid_db = {10.0, 20.0, 30.0, 40.0};
        spec.schemes = {Scheme::selection};
        spec.metric = Metric::outage;
        spec.trials = trials;
        spec.seed = seed;
        const SweepResult res = estimate(spec, 1);
        bool decreasing = true;
        for (std::size_t i = 1; i < res.rows.size(); ++i)
        {
            const auto &a = res.rows[i - 1].estimate;
            const auto &b = res.rows[i].estimate;
            decreasing = decreasing &&
                         a.value - b.value > 1.645 * std::sqrt(a.std_err * a.std_err + b.std_err * b.std_err);
        }
        const double p20 = res.rows[1].estimate.value;
        const double p40 = res.rows[3].estimate.value;
        return {{"lemma1", "strictly_decreasing", decreasing,
                 detail::fmt("outage(10 dB) = %.5f, outage(40 dB) = %.5f", res.rows[0].estimate.value, p40)},
                {"lemma1", "no_floor", p40 < 0.5 * p20, detail::fmt("outage(20 dB) = %.5f, outage(40 dB) = %.5f", p20, p40)}};
    }

    inline const std::vector<std::string_view> &validation_suites()
    {
        static const std::vector<std::string_view> names{"zf", "distribution", "solver", "dominance", "lemma1"};
        return names;
    }

    /// Runs one suite by name, or every suite for "all". Throws std::invalid_argument on unknown names.
    inline std::vector<CheckResult> run_validation(std::string_view suite, std::uint64_t seed)
    {
        if (suite == "all")
        {
            std::vector<CheckResult> all;
            for (std::string_view s : validation_suites())
            {
                auto part = run_validation(s, seed);
                all.insert(all.end(), part.begin(), part.end());
            }
            return all;
        }
        if (suite == "zf")
            return validate_zf(seed);
        if (suite == "distribution")
            return validate_distribution(seed);
        if (suite == "solver")
            return validate_solver(seed);
        if (suite == "dominance")
            return validate_dominance(seed);
        if (suite == "lemma1")
            return validate_no_floor(seed);
        throw std::invalid_argument("unknown validation suite '" + std::string(suite) + "'");
    }
}
