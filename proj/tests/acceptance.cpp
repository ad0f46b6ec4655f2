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


// Acceptance checks: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// Tolerances and sample sizes are fixed here.

#include "beamnoma/analysis.hpp"
#include "beamnoma/cli.hpp"
#include "beamnoma/montecarlo.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace beamnoma;

namespace
{
    constexpr double kZ95 = 1.6448536269514722;  // one-sided 95% normal quantile
    constexpr std::uint64_t kSeed = 20260101;

    struct Outcome
    {
        bool passed = false;
        std::string detail;
    };

    std::string fmt(const char *pattern, double a = 0, double b = 0, double c = 0, double d = 0)
    {
        char buf[256];
        std::snprintf(buf, sizeof(buf), pattern, a, b, c, d);
        return buf;
    }

    double seconds_since(std::chrono::steady_clock::time_point t0)
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    SweepResult outage_sweep(std::size_t m, double r_p, std::vector<double> snr_db, std::size_t trials)
    {
        SweepSpec spec;
        spec.cfg_template = {m, m, r_p, 1.0};
        spec.snr_grid_db = std::move(snr_db);
        spec.schemes = {Scheme::selection};
        spec.metric = Metric::outage;
        spec.trials = trials;
        spec.seed = kSeed;
        return estimate(spec, 1);
    }

    Outcome criterion1()
    {
        const auto t0 = std::chrono::steady_clock::now();
        double worst_cross = 0.0;
        double worst_norm = 0.0;
        for (std::size_t m : {2u, 3u, 4u})
        {
            const SystemConfig cfg(m, m, 1.0, 1.0, 1.0);
            for (std::uint64_t t = 0; t < 1000; ++t)
            {
                const ChannelRealization chan = draw_realization(cfg, {kSeed, t});
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
        const double secs = seconds_since(t0);
        return {worst_cross < 1e-9 && worst_norm < 1e-9 && secs < 5.0,
                fmt("max cross-gain %.2e, max |sum ||f||^2 - 1| %.2e, %.2f s", worst_cross, worst_norm, secs)};
    }

    Outcome criterion2()
    {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        std::string detail;
        for (auto [n, m] : {std::pair<std::size_t, std::size_t>{2, 2}, {4, 4}, {4, 2}})
        {
            const SystemConfig cfg(n, m, 1.0, 1.0, 1.0);
            std::vector<double> x;
            for (std::uint64_t t = 0; t < 10000; ++t)
                x.push_back(static_cast<double>(m) * draw_realization(cfg, {kSeed, t}).g_gain[0]);
            const GainLaw law = GainLaw::for_system(n, m);
            const double d = ks_statistic(x, [&](double v) { return law.cdf(v); });
            ok = ok && d < ks_critical_1pct(x.size());
            detail += fmt("(%.0f,%.0f) D=%.4f ", n, m, d);
        }
        const double secs = seconds_since(t0);
        return {ok && secs < 30.0, detail + fmt("critical %.4f, %.2f s", ks_critical_1pct(10000), secs)};
    }

    Outcome criterion3()
    {
        const double spot = q1_exact(2, 2, 1.0, 10.0);
        bool ok = std::abs(spot - 0.18126924692201818) < 1e-12;
        std::string detail = fmt("q1_exact(2,2,1,10) = %.6f; ", spot);
        const std::size_t trials = 100000;
        for (double snr_db : {0.0, 10.0, 20.0})
        {
            const SystemConfig cfg(2, 2, db_to_linear(snr_db), 1.0, 1.0);
            std::size_t hits = 0;
            for (std::uint64_t t = 0; t < trials; ++t)
                hits += draw_realization(cfg, {kSeed, t}).g_gain[0] <= cfg.eps_p() / cfg.rho() ? 1 : 0;
            const double p_hat = static_cast<double>(hits) / trials;
            const double p = q1_exact(2, 2, cfg.eps_p(), cfg.rho());
            const double se = std::sqrt(p * (1.0 - p) / trials);
            ok = ok && std::abs(p_hat - p) <= 3.0 * se;
            detail += fmt("%.0f dB: %.5f vs %.5f (%.1f SE) ", snr_db, p_hat, p, std::abs(p_hat - p) / se);
        }
        return {ok, detail};
    }

    Outcome criterion4()
    {
        const auto t0 = std::chrono::steady_clock::now();
        const SweepResult r = outage_sweep(2, 0.1, {10.0, 20.0, 30.0, 40.0}, 100000);
        bool ok = true;
        std::string detail;
        for (std::size_t i = 0; i < r.rows.size(); ++i)
        {
            const auto &e = r.rows[i].estimate;
            detail += fmt("%.0f dB: %.2e; ", r.rows[i].snr_db, e.value);
            if (i > 0)
            {
                const auto &prev = r.rows[i - 1].estimate;
                ok = ok && prev.value - e.value > kZ95 * std::hypot(prev.std_err, e.std_err);
            }
        }
        ok = ok && r.rows[3].estimate.value < 0.5 * r.rows[1].estimate.value;
        const double secs = seconds_since(t0);
        return {ok && secs < 120.0, detail + fmt("%.2f s", secs)};
    }

    Outcome criterion5()
    {
        const auto p2 = outage_sweep(2, 0.1, {30.0}, 100000).rows[0].estimate;
        const auto p4 = outage_sweep(4, 0.1, {30.0}, 100000).rows[0].estimate;
        const double lower = (p4.value - p2.value) - kZ95 * std::hypot(p2.std_err, p4.std_err);
        return {lower >= 0.0, fmt("outage M=2 %.2e, M=4 %.2e, 95%% lower bound of difference %.2e", p2.value,
                                  p4.value, lower)};
    }

    Outcome criterion6()
    {
        // (a) singleton reduction and (d) certification over the same draws.
        double worst_singleton = 0.0;
        std::size_t certified = 0;
        std::size_t violations = 0;
        auto certify = [&](const AggregationCandidate &c, std::span<const double> h, double eps,
                           const AggregationSolution &sol) {
            if (sol.status != SolveStatus::optimal)
                return;
            ++certified;
            violations += certify_solution(c, h, eps, sol, 1e-8).empty() ? 0 : 1;
        };
        for (std::uint64_t t = 0; t < 10000; ++t)
        {
            const SystemConfig cfg(4, 4, db_to_linear(static_cast<double>(t % 5) * 10.0), 0.1, 1.0);
            const ChannelRealization chan = draw_realization(cfg, {kSeed, t});
            const PowerCoefficients base = mode_one_coefficients(chan.g_gain, cfg.rho(), cfg.eps_p());
            for (const auto &c : enumerate_candidates(chan, cfg, CandidateStrategy::prefixes_plus_singletons))
            {
                const AggregationSolution sol = solve_aggregation(c, chan.h_gain, cfg.eps_p());
                certify(c, chan.h_gain, cfg.eps_p(), sol);
                if (c.beams.size() != 1)
                    continue;
                const std::size_t m = c.beams.front();
                const double closed =
                    alpha_s_selection(m, chan.h_gain, chan.g_gain[m], base.alpha_p, cfg.rho(), cfg.eps_p());
                const double solved = sol.status == SolveStatus::optimal ? sol.alpha_s()[0] : 0.0;
                worst_singleton = std::max(worst_singleton, std::abs(closed - solved));
            }
        }
        const bool ok_a = worst_singleton < 1e-9;

        // (b) worked instance.
        ChannelRealization worked;
        worked.g_gain = {1.0, 1.0};
        worked.h_gain = {2.0, 1.0};
        worked.beta = {cdouble(1.0), cdouble(1.0)};
        const SystemConfig worked_cfg(2, 2, 10.0, 1.0, 1.0);
        AggregationCandidate both;
        for (const auto &c : enumerate_candidates(worked, worked_cfg, CandidateStrategy::prefixes))
            if (c.beams.size() == 2)
                both = c;
        const AggregationSolution ws = solve_aggregation(both, worked.h_gain, 1.0);
        certify(both, worked.h_gain, 1.0, ws);
        const bool ok_b = ws.status == SolveStatus::optimal && std::abs(ws.t_star * ws.t_star - 0.76820) <= 1e-4 &&
                          std::abs(ws.objective_rate - 3.118) <= 1e-3;

        // (c) grid oracle on 100 two-beam and 100 three-beam instances, N = M = 3, SNR uniform in [0, 30] dB.
        std::size_t found2 = 0;
        std::size_t found3 = 0;
        double worst_ratio = 0.0;
        bool ok_c = true;
        for (std::uint64_t t = 0; (found2 < 100 || found3 < 100) && t < 100000; ++t)
        {
            GaussianStream u(derive_stream_seed({kSeed ^ 0xC0FFEEULL, t}));
            const SystemConfig cfg(3, 3, db_to_linear(30.0 * u.uniform()), 0.1, 1.0);
            const ChannelRealization chan = draw_realization(cfg, {kSeed + 1, t});
            for (const auto &c : enumerate_candidates(chan, cfg, CandidateStrategy::prefixes))
            {
                std::size_t &found = c.beams.size() == 2 ? found2 : found3;
                if (c.beams.size() < 2 || c.infeasible || found >= 100)
                    continue;
                const AggregationSolution exact = solve_aggregation(c, chan.h_gain, cfg.eps_p());
                if (exact.status != SolveStatus::optimal)
                    continue;
                certify(c, chan.h_gain, cfg.eps_p(), exact);
                const AggregationSolution grid = oracle_grid_solver(c, chan.h_gain, cfg.eps_p(), 1e-3);
                double scale = 0.0;
                for (std::size_t b : c.beams)
                    scale += std::sqrt(chan.h_gain[b]);
                const double ratio = grid.status == SolveStatus::optimal
                                         ? std::abs(exact.t_star - grid.t_star) / scale
                                         : INFINITY;
                worst_ratio = std::max(worst_ratio, ratio);
                ok_c = ok_c && ratio <= 2e-3;
                ++found;
            }
        }
        ok_c = ok_c && found2 == 100 && found3 == 100;
        const bool ok_d = violations == 0;

        return {ok_a && ok_b && ok_c && ok_d,
                fmt("(a) max singleton gap %.2e; (b) t*^2 %.5f, rate %.4f; ", worst_singleton,
                    ws.t_star * ws.t_star, ws.objective_rate) +
                    fmt("(c) 200 instances, max gap %.2e x sum sqrt(h); (d) %.0f solutions, %.0f violations",
                        worst_ratio, static_cast<double>(certified), static_cast<double>(violations))};
    }

    struct PairedMeans
    {
        double mean_a = 0.0;
        double mean_b = 0.0;
        double diff_se = 0.0;
        double min_diff = INFINITY;
    };

    PairedMeans paired_rates(const SystemConfig &cfg, Scheme a, Scheme b, std::size_t trials)
    {
        PairedMeans p;
        std::vector<double> diffs;
        for (std::uint64_t t = 0; t < trials; ++t)
        {
            const ChannelRealization chan = draw_realization(cfg, {kSeed, t});
            const double ra =
                evaluate_scheme(chan, cfg, a, CandidateStrategy::prefixes_plus_singletons).secondary_rate;
            const double rb =
                evaluate_scheme(chan, cfg, b, CandidateStrategy::prefixes_plus_singletons).secondary_rate;
            p.mean_a += ra;
            p.mean_b += rb;
            diffs.push_back(ra - rb);
            p.min_diff = std::min(p.min_diff, ra - rb);
        }
        const double n = static_cast<double>(trials);
        p.mean_a /= n;
        p.mean_b /= n;
        const double mean_d = p.mean_a - p.mean_b;
        double ss = 0.0;
        for (double d : diffs)
            ss += (d - mean_d) * (d - mean_d);
        p.diff_se = std::sqrt(ss / (n - 1.0) / n);
        return p;
    }

    Outcome criterion7()
    {
        bool ok = true;
        std::string detail;
        for (double snr_db : {10.0, 20.0, 30.0})
        {
            const SystemConfig cfg(4, 4, db_to_linear(snr_db), 0.1, 1.0);
            const PairedMeans p = paired_rates(cfg, Scheme::scheme2, Scheme::selection, 10000);
            ok = ok && p.min_diff >= -1e-12 && p.mean_a > p.mean_b;
            detail += fmt("%.0f dB: %.3f vs %.3f, min pointwise diff %.1e; ", snr_db, p.mean_a, p.mean_b, p.min_diff);
        }
        return {ok, detail};
    }

    Outcome criterion8()
    {
        const SystemConfig cfg(4, 4, 1.0, 0.1, 1.0);
        const PairedMeans p = paired_rates(cfg, Scheme::scheme1, Scheme::selection, 10000);
        const double lower = (p.mean_a - p.mean_b) - kZ95 * p.diff_se;
        return {lower >= 0.0,
                fmt("0 dB: scheme1 %.4f vs selection %.4f, 95%% lower bound of difference %.4f", p.mean_a, p.mean_b,
                    lower)};
    }

    Outcome criterion9()
    {
        std::size_t protected_beams = 0;
        std::size_t silent_beams = 0;
        std::size_t failures = 0;
        double worst_shortfall = 0.0;
        for (double r_p : {0.1, 1.0})
            for (double snr_db : {0.0, 10.0, 20.0, 30.0})
            {
                const SystemConfig cfg(4, 4, db_to_linear(snr_db), r_p, 1.0);
                for (std::uint64_t t = 0; t < 10000; ++t)
                {
                    const ChannelRealization chan = draw_realization(cfg, {kSeed, t});
                    for (Scheme s : {Scheme::selection, Scheme::scheme1, Scheme::scheme2})
                    {
                        const SchemeOutcome o =
                            evaluate_scheme(chan, cfg, s, CandidateStrategy::prefixes_plus_singletons);
                        for (std::size_t m = 0; m < 4; ++m)
                        {
                            if (chan.g_gain[m] >= cfg.eps_p() / cfg.rho())
                            {
                                ++protected_beams;
                                const double shortfall = cfg.r_p() - o.primary_rates[m];
                                worst_shortfall = std::max(worst_shortfall, shortfall);
                                failures += shortfall > 1e-9 ? 1 : 0;
                            }
                            else
                            {
                                ++silent_beams;
                                failures += o.coefficients.alpha_s[m] != 0.0 ? 1 : 0;
                            }
                        }
                    }
                }
            }
        return {failures == 0, fmt("%.0f protected beam checks, %.0f weak-beam checks, %.0f failures, worst "
                                   "shortfall %.1e BPCU",
                                   static_cast<double>(protected_beams), static_cast<double>(silent_beams),
                                   static_cast<double>(failures), worst_shortfall)};
    }

    Outcome criterion10()
    {
        cli::Overrides o;
        o.seed = 7;
        std::ostringstream run1, run2, err;
        const int c1 = cli::cmd_preset("fig2b", o, {"-", 1, false}, run1, err);
        const int c2 = cli::cmd_preset("fig2b", o, {"-", 1, false}, run2, err);
        const bool identical = c1 == 0 && c2 == 0 && run1.str() == run2.str() && !run1.str().empty();

        bool workers_equal = true;
        for (const SweepSpec &spec : cli::make_preset("fig2b", o).sweeps)
        {
            const SweepResult a = estimate(spec, 1);
            const SweepResult b = estimate(spec, 8);
            for (std::size_t i = 0; i < a.rows.size(); ++i)
                workers_equal = workers_equal && a.rows[i].estimate.value == b.rows[i].estimate.value &&
                                a.rows[i].estimate.std_err == b.rows[i].estimate.std_err;
        }
        return {identical && workers_equal,
                std::string(identical ? "two fig2b runs byte-identical" : "fig2b runs differ") + ", " +
                    (workers_equal ? "1 vs 8 workers identical" : "1 vs 8 workers differ")};
    }
}

int main()
{
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
        {"1 ZF orthogonality and normalization", criterion1},
        {"2 gain law KS test", criterion2},
        {"3 first-beam outage closed form", criterion3},
        {"4 selection outage has no floor", criterion4},
        {"5 more beams degrade selection outage", criterion5},
        {"6 aggregation solver correctness", criterion6},
        {"7 scheme2 dominates selection", criterion7},
        {"8 scheme1 gain at low SNR", criterion8},
        {"9 legacy protection", criterion9},
        {"10 reproducibility", criterion10},
    };
    int failed = 0;
    for (const auto &[name, run] : criteria)
    {
        const Outcome r = run();
        std::printf("%s criterion %s: %s\n", r.passed ? "PASS" : "FAIL", name, r.detail.c_str());
        std::fflush(stdout);
        failed += r.passed ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
