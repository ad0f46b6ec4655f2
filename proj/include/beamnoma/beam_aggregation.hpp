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

// Beam aggregation: the secondary user is served coherently over a set D of beams.
//
// Scheme I decodes the secondary signal directly, treating every legacy signal as noise.
// Scheme II cancels the legacy signals of D one by one (strongest h first) and then decodes
// the secondary signal. Its power split solves, per candidate set,
//
//     maximize    t = sum_m sqrt(h_m) x_m
//     subject to  eps (sum_{j>m} h_j a_j + t^2 + tau) <= h_m a_m     (SIC on stage m)
//                 a_m >= eta_m                                     (legacy QoS)
//                 x_m^2 + a_m <= 1,  x_m >= 0,  a_m >= 0
//
// with a_m the legacy share and x_m^2 the secondary share. For a fixed t the smallest
// feasible legacy shares follow from a backward recursion, and the secondary headroom
// cap(t) = sum sqrt(h_m (1 - a_m(t))) is nonincreasing in t. The optimum is the largest
// t with t <= cap(t), found by bisection.

#pragma once

#include "beamnoma/beam_selection.hpp"
#include "beamnoma/channel_model.hpp"
#include "beamnoma/link_rates.hpp"
#include "beamnoma/power_allocation.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace beamnoma
{
    enum class CandidateStrategy
    {
        prefixes,
        prefixes_plus_singletons,
        all_subsets
    };

    inline std::string_view to_string(CandidateStrategy s)
    {
        switch (s)
        {
        case CandidateStrategy::prefixes:
            return "prefixes";
        case CandidateStrategy::prefixes_plus_singletons:
            return "prefixes+singletons";
        case CandidateStrategy::all_subsets:
            return "all-subsets";
        }
        return "?";
    }

    /// Accepts both the dashed CLI spelling and the underscore spelling.
    inline CandidateStrategy parse_strategy(std::string_view name)
    {
        if (name == "prefixes")
            return CandidateStrategy::prefixes;
        if (name == "prefixes+singletons" || name == "prefixes_plus_singletons")
            return CandidateStrategy::prefixes_plus_singletons;
        if (name == "all-subsets" || name == "all_subsets")
            return CandidateStrategy::all_subsets;
        throw std::invalid_argument("unknown candidate strategy '" + std::string(name) + "'");
    }

    /// Largest M accepted by the all-subsets strategy.
    inline constexpr std::size_t kMaxAllSubsetsBeams = 8;

    /// A set D of beams, ordered by h descending (ties by index), with its solver constants.
    struct AggregationCandidate
    {
        BeamSet beams;
        double tau_d = 0.0;
        std::vector<double> etas;  // per position in `beams`
        bool infeasible = false;   // some eta_m > 1
    };

    enum class SolveStatus
    {
        optimal,
        infeasible
    };

    /// Power split over the beams of a candidate, indexed by position in `candidate.beams`.
    struct AggregationSolution
    {
        std::vector<double> alpha_p;
        std::vector<double> x;  // sqrt of the secondary share
        double t_star = 0.0;    // sum sqrt(h_m) x_m
        double objective_rate = 0.0;
        SolveStatus status = SolveStatus::infeasible;

        std::vector<double> alpha_s() const
        {
            std::vector<double> out(x.size());
            for (std::size_t k = 0; k < x.size(); ++k)
                out[k] = x[k] * x[k];
            return out;
        }
    };

    namespace detail
    {
        inline BeamSet order_by_gain(BeamSet beams, std::span<const double> h_gain)
        {
            std::stable_sort(beams.begin(), beams.end(), [&](std::size_t a, std::size_t b) {
                if (h_gain[a] != h_gain[b])
                    return h_gain[a] > h_gain[b];
                return a < b;
            });
            return beams;
        }

        inline AggregationCandidate make_candidate(BeamSet beams, const ChannelRealization &chan,
                                                   const SystemConfig &cfg, std::span<const double> mode_one_alpha_p)
        {
            AggregationCandidate c;
            c.beams = order_by_gain(std::move(beams), chan.h_gain);
            c.tau_d = tau(c.beams, chan.h_gain, mode_one_alpha_p, cfg.rho());
            for (std::size_t m : c.beams)
            {
                c.etas.push_back(eta(chan.g_gain[m], cfg.rho(), cfg.eps_p()));
                c.infeasible = c.infeasible || c.etas.back() > 1.0;
            }
            return c;
        }

        inline bool lexicographically_smaller(BeamSet a, BeamSet b)
        {
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            return a < b;
        }

        // True if (rate, set) should replace the incumbent: larger rate, then smaller set,
        // then lexicographically smaller set.
        inline bool better_candidate(double rate, const BeamSet &set, double best_rate, const BeamSet &best_set)
        {
            if (rate != best_rate)
                return rate > best_rate;
            if (set.size() != best_set.size())
                return set.size() < best_set.size();
            return lexicographically_smaller(set, best_set);
        }
    }

    /// Candidate sets for the aggregation schemes. Infeasible candidates are listed and flagged.
    inline std::vector<AggregationCandidate> enumerate_candidates(const ChannelRealization &chan,
                                                                  const SystemConfig &cfg,
                                                                  CandidateStrategy strategy)
    {
        const std::size_t m_beams = chan.m_beams();
        const PowerCoefficients base = mode_one_coefficients(chan.g_gain, cfg.rho(), cfg.eps_p());

        BeamSet all(m_beams);
        std::iota(all.begin(), all.end(), std::size_t{0});
        const BeamSet ranked = detail::order_by_gain(all, chan.h_gain);

        std::vector<AggregationCandidate> out;
        switch (strategy)
        {
        case CandidateStrategy::prefixes:
        case CandidateStrategy::prefixes_plus_singletons:
            for (std::size_t k = 1; k <= m_beams; ++k)
                out.push_back(detail::make_candidate(BeamSet(ranked.begin(), ranked.begin() + k), chan, cfg,
                                                     base.alpha_p));
            if (strategy == CandidateStrategy::prefixes_plus_singletons)
                // The strongest beam is already the first prefix.
                for (std::size_t k = 1; k < m_beams; ++k)
                    out.push_back(detail::make_candidate({ranked[k]}, chan, cfg, base.alpha_p));
            break;
        case CandidateStrategy::all_subsets:
            if (m_beams > kMaxAllSubsetsBeams)
                throw std::invalid_argument("all-subsets strategy supports at most " +
                                            std::to_string(kMaxAllSubsetsBeams) + " beams");
            for (std::size_t mask = 1; mask < (std::size_t{1} << m_beams); ++mask)
            {
                BeamSet beams;
                for (std::size_t m = 0; m < m_beams; ++m)
                    if (mask & (std::size_t{1} << m))
                        beams.push_back(m);
                out.push_back(detail::make_candidate(std::move(beams), chan, cfg, base.alpha_p));
            }
            break;
        }
        return out;
    }

    /// Componentwise-smallest legacy shares meeting every SIC stage for a given t.
    ///
    /// Backward recursion over the candidate's positions:
    /// a_m = max(eta_m, eps/h_m (sum_{j>m} h_j a_j + t^2 + tau)). Empty if some a_m > 1.
    inline std::optional<std::vector<double>> min_primary_power(const AggregationCandidate &candidate,
                                                                std::span<const double> h_gain, double t,
                                                                double eps_p)
    {
        const std::size_t size = candidate.beams.size();
        std::vector<double> alpha_p(size);
        double tail = 0.0;  // sum over later positions of h_j a_j
        for (std::size_t k = size; k-- > 0;)
        {
            const double h = h_gain[candidate.beams[k]];
            if (!(h > 0.0))
                return std::nullopt;
            const double a = std::max(candidate.etas[k], eps_p / h * (tail + t * t + candidate.tau_d));
            if (a > 1.0)
                return std::nullopt;
            alpha_p[k] = a;
            tail += h * a;
        }
        return alpha_p;
    }

    /// Secondary headroom sum sqrt(h_m (1 - a_m)) for legacy shares `alpha_p`.
    inline double secondary_headroom(const AggregationCandidate &candidate, std::span<const double> h_gain,
                                     std::span<const double> alpha_p)
    {
        double cap = 0.0;
        for (std::size_t k = 0; k < candidate.beams.size(); ++k)
            cap += std::sqrt(h_gain[candidate.beams[k]] * std::max(0.0, 1.0 - alpha_p[k]));
        return cap;
    }

    /// Optimal Scheme II power split for one candidate set, by bisection on t.
    ///
    /// Bisection runs until the bracket stops shrinking in double precision (at most 200
    /// halvings), which is well inside 1e-10 (1 + sum sqrt(h_m)). The returned point is the
    /// feasible end of the bracket, with x rescaled so that sum sqrt(h_m) x_m equals t*.
    inline AggregationSolution solve_aggregation(const AggregationCandidate &candidate, std::span<const double> h_gain,
                                           double eps_p)
    {
        AggregationSolution sol;
        if (candidate.infeasible || candidate.beams.empty())
            return sol;

        auto headroom_at = [&](double t) -> std::optional<double> {
            const auto a = min_primary_power(candidate, h_gain, t, eps_p);
            if (!a)
                return std::nullopt;
            return secondary_headroom(candidate, h_gain, *a);
        };

        if (!headroom_at(0.0))
            return sol;

        double upper = 0.0;
        for (std::size_t m : candidate.beams)
            upper += std::sqrt(h_gain[m]);

        double lo = 0.0;
        double hi = upper;
        const auto hi_cap = headroom_at(hi);
        if (hi_cap && *hi_cap >= hi)
            lo = hi;
        else
            for (int iter = 0; iter < 200; ++iter)
            {
                const double mid = 0.5 * (lo + hi);
                if (!(mid > lo && mid < hi))
                    break;
                const auto cap = headroom_at(mid);
                if (cap && *cap >= mid)
                    lo = mid;
                else
                    hi = mid;
            }

        const std::vector<double> alpha_p = *min_primary_power(candidate, h_gain, lo, eps_p);
        const double cap = secondary_headroom(candidate, h_gain, alpha_p);
        const double scale = cap > 0.0 ? std::min(1.0, lo / cap) : 0.0;

        sol.alpha_p = alpha_p;
        sol.x.resize(alpha_p.size());
        for (std::size_t k = 0; k < alpha_p.size(); ++k)
            sol.x[k] = std::sqrt(std::max(0.0, 1.0 - alpha_p[k])) * scale;
        sol.t_star = lo;
        sol.objective_rate = rate_from_sinr(lo * lo / candidate.tau_d);
        sol.status = SolveStatus::optimal;
        return sol;
    }

    /// One violated constraint found by certify_solution.
    struct ConstraintViolation
    {
        std::string constraint;
        std::size_t position = 0;
        double excess = 0.0;
    };

    /// Re-checks every constraint of the Scheme II program at a returned point, working only
    /// from the constraint definitions. Empty result means the point is feasible within `tol`.
    inline std::vector<ConstraintViolation> certify_solution(const AggregationCandidate &candidate,
                                                             std::span<const double> h_gain, double eps_p,
                                                             const AggregationSolution &sol, double tol = 1e-8)
    {
        std::vector<ConstraintViolation> out;
        const std::size_t size = candidate.beams.size();
        if (sol.alpha_p.size() != size || sol.x.size() != size)
        {
            out.push_back({"dimension", 0, INFINITY});
            return out;
        }

        double amplitude = 0.0;
        for (std::size_t k = 0; k < size; ++k)
            amplitude += std::sqrt(h_gain[candidate.beams[k]]) * sol.x[k];

        for (std::size_t k = 0; k < size; ++k)
        {
            double later = 0.0;
            for (std::size_t j = k + 1; j < size; ++j)
                later += h_gain[candidate.beams[j]] * sol.alpha_p[j];
            const double sic = eps_p * later + eps_p * amplitude * amplitude -
                               h_gain[candidate.beams[k]] * sol.alpha_p[k] + eps_p * candidate.tau_d;
            if (sic > tol)
                out.push_back({"sic_decodability", k, sic});
            if (candidate.etas[k] - sol.alpha_p[k] > tol)
                out.push_back({"legacy_qos", k, candidate.etas[k] - sol.alpha_p[k]});
            if (sol.x[k] * sol.x[k] + sol.alpha_p[k] - 1.0 > tol)
                out.push_back({"power_budget", k, sol.x[k] * sol.x[k] + sol.alpha_p[k] - 1.0});
            if (-sol.x[k] > tol || -sol.alpha_p[k] > tol)
                out.push_back({"nonnegativity", k, std::max(-sol.x[k], -sol.alpha_p[k])});
        }
        if (std::abs(amplitude - sol.t_star) > tol * (1.0 + sol.t_star))
            out.push_back({"objective_consistency", 0, std::abs(amplitude - sol.t_star)});
        return out;
    }

    /// Exhaustive grid search over x in [0,1]^|D| with spacing `resolution`, used to cross-check
    /// the bisection solver.
    ///
    /// A grid point is accepted when the smallest SIC-feasible legacy shares for its t leave room
    /// for its x. The accepted region is closed under decreasing any coordinate, so along the last
    /// two axes the boundary is walked as a staircase instead of scanned; the maximum found is the
    /// same as a full scan.
    inline AggregationSolution oracle_grid_solver(const AggregationCandidate &candidate, std::span<const double> h_gain,
                                               double eps_p, double resolution)
    {
        AggregationSolution best;
        const std::size_t dims = candidate.beams.size();
        if (dims == 0 || dims > 3)
            throw std::invalid_argument("oracle_grid_solver supports 1 to 3 beams");
        if (!(resolution > 0.0) || resolution > 1.0)
            throw std::invalid_argument("oracle_grid_solver: resolution must be in (0, 1]");

        const auto steps = static_cast<long>(std::floor(1.0 / resolution + 1e-9));
        std::vector<double> grid;
        for (long i = 0; i <= steps; ++i)
            grid.push_back(std::min(1.0, static_cast<double>(i) * resolution));
        if (grid.back() < 1.0)
            grid.push_back(1.0);
        const long last = static_cast<long>(grid.size()) - 1;

        std::vector<double> sqrt_h(dims);
        for (std::size_t k = 0; k < dims; ++k)
            sqrt_h[k] = std::sqrt(h_gain[candidate.beams[k]]);

        std::vector<long> idx(dims, 0);
        auto accepted = [&]() {
            double t = 0.0;
            for (std::size_t k = 0; k < dims; ++k)
                t += sqrt_h[k] * grid[static_cast<std::size_t>(idx[k])];
            const auto a = min_primary_power(candidate, h_gain, t, eps_p);
            if (!a)
                return false;
            for (std::size_t k = 0; k < dims; ++k)
            {
                const double xk = grid[static_cast<std::size_t>(idx[k])];
                if ((*a)[k] > 1.0 - xk * xk)
                    return false;
            }
            return true;
        };
        auto record = [&]() {
            double t = 0.0;
            for (std::size_t k = 0; k < dims; ++k)
                t += sqrt_h[k] * grid[static_cast<std::size_t>(idx[k])];
            if (best.status == SolveStatus::optimal && t <= best.t_star)
                return;
            best.status = SolveStatus::optimal;
            best.t_star = t;
            best.x.resize(dims);
            for (std::size_t k = 0; k < dims; ++k)
                best.x[k] = grid[static_cast<std::size_t>(idx[k])];
            best.alpha_p = *min_primary_power(candidate, h_gain, t, eps_p);
        };

        if (dims == 1)
        {
            for (idx[0] = 0; idx[0] <= last; ++idx[0])
                if (accepted())
                    record();
        }
        else
        {
            // Outer axes (none for |D| = 2) by full scan; staircase on the last two.
            const std::size_t a = dims - 2;
            const std::size_t b = dims - 1;
            const long outer_end = dims == 3 ? last : 0;
            for (long outer = 0; outer <= outer_end; ++outer)
            {
                if (dims == 3)
                    idx[0] = outer;
                long top = last;
                for (idx[a] = 0; idx[a] <= last && top >= 0; ++idx[a])
                {
                    idx[b] = top;
                    while (idx[b] >= 0 && !accepted())
                        --idx[b];
                    top = idx[b];
                    if (top >= 0)
                        record();
                }
            }
        }

        if (best.status == SolveStatus::optimal)
            best.objective_rate = rate_from_sinr(best.t_star * best.t_star / candidate.tau_d);
        return best;
    }

    /// Scheme I on a fixed beam set.
    inline SchemeOutcome evaluate_scheme1(const ChannelRealization &chan, const SystemConfig &cfg,
                                          const BeamSet &active_set)
    {
        SchemeOutcome out;
        out.scheme = Scheme::scheme1;
        out.coefficients = scheme1_coefficients(cfg, chan.g_gain, active_set);
        out.chosen_set = active_set;
        out.secondary_rate = rate_scheme1_secondary(active_set, chan.h_gain, out.coefficients, cfg.rho());
        out.unconditioned_rate = out.secondary_rate;
        out.outage = out.secondary_rate < cfg.r_s();
        out.primary_rates = primary_rates(chan.g_gain, out.coefficients, cfg.rho());
        return out;
    }

    /// Scheme I with the best beam set among the strategy's candidates.
    inline SchemeOutcome evaluate_scheme1(const ChannelRealization &chan, const SystemConfig &cfg,
                                          CandidateStrategy strategy)
    {
        std::optional<SchemeOutcome> best;
        for (const AggregationCandidate &c : enumerate_candidates(chan, cfg, strategy))
        {
            SchemeOutcome o = evaluate_scheme1(chan, cfg, c.beams);
            if (!best || detail::better_candidate(o.secondary_rate, o.chosen_set, best->secondary_rate,
                                                  best->chosen_set))
                best = std::move(o);
        }
        return *best;
    }

    /// Scheme II: solve every feasible candidate and keep the one with the largest rate.
    inline SchemeOutcome evaluate_scheme2(const ChannelRealization &chan, const SystemConfig &cfg,
                                          CandidateStrategy strategy)
    {
        const double rho = cfg.rho();
        SchemeOutcome out;
        out.scheme = Scheme::scheme2;
        out.coefficients = mode_one_coefficients(chan.g_gain, rho, cfg.eps_p());

        std::optional<AggregationCandidate> best;
        AggregationSolution best_sol;
        for (const AggregationCandidate &c : enumerate_candidates(chan, cfg, strategy))
        {
            if (c.infeasible)
                continue;
            AggregationSolution sol = solve_aggregation(c, chan.h_gain, cfg.eps_p());
            if (sol.status != SolveStatus::optimal)
                continue;
            if (!best || detail::better_candidate(sol.objective_rate, c.beams, best_sol.objective_rate, best->beams))
            {
                best = c;
                best_sol = std::move(sol);
            }
        }

        if (!best)
        {
            out.outage = true;
            out.primary_rates = primary_rates(chan.g_gain, out.coefficients, rho);
            return out;
        }

        out.chosen_set = best->beams;
        out.coefficients.active_set = best->beams;
        for (std::size_t k = 0; k < best->beams.size(); ++k)
        {
            out.coefficients.alpha_p[best->beams[k]] = best_sol.alpha_p[k];
            out.coefficients.alpha_s[best->beams[k]] = best_sol.x[k] * best_sol.x[k];
        }

        const RateReport report =
            report_aggregation(best->beams, chan.h_gain, chan.g_gain, out.coefficients, rho, cfg.r_p());
        out.sic_ok = report.sic_ok;
        out.primary_rates = report.r_primary;
        out.secondary_rate = best_sol.objective_rate;
        out.unconditioned_rate = best_sol.objective_rate;
        out.outage = out.secondary_rate < cfg.r_s();
        return out;
    }
}
