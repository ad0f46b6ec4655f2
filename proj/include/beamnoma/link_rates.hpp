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

// Achievable rates in bits per channel use. Every rate is formed as log2(1 + SINR).

#pragma once

#include "beamnoma/power_allocation.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace beamnoma
{
    /// Slack on "rate >= target" comparisons whose SINR is tight by construction.
    inline constexpr double kRateTolerance = 1e-12;

    inline double rate_from_sinr(double sinr) { return std::log2(1.0 + sinr); }

    /// Rates observed under one power allocation.
    struct RateReport
    {
        std::vector<double> r_tilde;  // secondary user decoding each legacy signal (SIC stage)
        double r_secondary = 0.0;
        std::vector<double> r_primary;
        std::vector<bool> sic_ok;  // r_tilde >= R^P - kRateTolerance
    };

    namespace detail
    {
        // sum over i != m of h_i (alpha_p_i + alpha_s_i)
        inline double other_beam_power(std::size_t m, std::span<const double> h_gain, const PowerCoefficients &c)
        {
            double sum = 0.0;
            for (std::size_t i = 0; i < h_gain.size(); ++i)
                if (i != m)
                    sum += h_gain[i] * (c.alpha_p[i] + c.alpha_s[i]);
            return sum;
        }

        // (sum_{i in D} sqrt(h_i alpha_s_i))^2
        inline double coherent_secondary_power(const BeamSet &set, std::span<const double> h_gain,
                                               const PowerCoefficients &c)
        {
            double amp = 0.0;
            for (std::size_t i : set)
                amp += std::sqrt(h_gain[i] * c.alpha_s[i]);
            return amp * amp;
        }
    }

    /// Single-beam mode: rate at which the secondary user decodes the legacy signal on beam m.
    inline double rate_sel_decode_primary(std::size_t m, std::span<const double> h_gain, const PowerCoefficients &c,
                                          double rho)
    {
        const double interference =
            h_gain[m] * c.alpha_s[m] + detail::other_beam_power(m, h_gain, c) + 1.0 / rho;
        return rate_from_sinr(h_gain[m] * c.alpha_p[m] / interference);
    }

    /// Single-beam mode: secondary rate on beam m after its legacy signal is cancelled.
    inline double rate_sel_secondary(std::size_t m, std::span<const double> h_gain, const PowerCoefficients &c,
                                     double rho)
    {
        const double interference = detail::other_beam_power(m, h_gain, c) + 1.0 / rho;
        return rate_from_sinr(h_gain[m] * c.alpha_s[m] / interference);
    }

    /// Scheme I secondary rate: coherent combining over the active set, every legacy signal
    /// treated as noise.
    inline double rate_scheme1_secondary(const BeamSet &active_set, std::span<const double> h_gain,
                                         const PowerCoefficients &c, double rho)
    {
        double legacy = 0.0;
        for (std::size_t j = 0; j < h_gain.size(); ++j)
            legacy += h_gain[j] * c.alpha_p[j];
        return rate_from_sinr(detail::coherent_secondary_power(active_set, h_gain, c) / (legacy + 1.0 / rho));
    }

    /// Legacy user rate on its own beam. On a beam carrying secondary power the superimposed
    /// signal is interference (|beta_m|^2 = 1); otherwise the beam is interference-free.
    inline double rate_primary(double g_m, double alpha_p, double alpha_s, double rho, bool in_active_set)
    {
        if (in_active_set)
            return rate_from_sinr(g_m * alpha_p / (g_m * alpha_s + 1.0 / rho));
        return rate_from_sinr(g_m * alpha_p * rho);
    }

    /// Scheme II SIC stage `position` of the active set (which is in decoding order).
    ///
    /// Undecoded legacy signals are those later in the active set plus every beam outside it.
    inline double rate_agg_decode_primary(std::size_t position, const BeamSet &active_set,
                                          std::span<const double> h_gain, const PowerCoefficients &c, double rho)
    {
        const std::size_t m = active_set.at(position);
        double undecoded = 0.0;
        for (std::size_t k = position + 1; k < active_set.size(); ++k)
            undecoded += h_gain[active_set[k]] * c.alpha_p[active_set[k]];
        for (std::size_t j = 0; j < h_gain.size(); ++j)
            if (std::find(active_set.begin(), active_set.end(), j) == active_set.end())
                undecoded += h_gain[j] * c.alpha_p[j];
        const double denom = undecoded + detail::coherent_secondary_power(active_set, h_gain, c) + 1.0 / rho;
        return rate_from_sinr(h_gain[m] * c.alpha_p[m] / denom);
    }

    /// Scheme II secondary rate once every legacy signal in the active set is cancelled.
    inline double rate_agg_secondary(const BeamSet &active_set, std::span<const double> h_gain,
                                     const PowerCoefficients &c, double rho)
    {
        double residual = 0.0;
        for (std::size_t j = 0; j < h_gain.size(); ++j)
            if (std::find(active_set.begin(), active_set.end(), j) == active_set.end())
                residual += h_gain[j] * c.alpha_p[j];
        return rate_from_sinr(detail::coherent_secondary_power(active_set, h_gain, c) / (residual + 1.0 / rho));
    }

    /// Legacy rates on every beam for coefficients whose active set is `c.active_set`.
    inline std::vector<double> primary_rates(std::span<const double> g_gain, const PowerCoefficients &c, double rho)
    {
        std::vector<double> out(g_gain.size());
        for (std::size_t m = 0; m < g_gain.size(); ++m)
            out[m] = rate_primary(g_gain[m], c.alpha_p[m], c.alpha_s[m], rho, c.contains(m));
        return out;
    }

    /// Rate report for single-beam service on beam m.
    inline RateReport report_selection(std::size_t m, std::span<const double> h_gain, std::span<const double> g_gain,
                                       const PowerCoefficients &c, double rho, double r_p)
    {
        RateReport r;
        r.r_tilde = {rate_sel_decode_primary(m, h_gain, c, rho)};
        r.sic_ok = {r.r_tilde.front() >= r_p - kRateTolerance};
        r.r_secondary = rate_sel_secondary(m, h_gain, c, rho);
        r.r_primary = primary_rates(g_gain, c, rho);
        return r;
    }

    /// Rate report for the Scheme II SIC chain over `active_set` (in decoding order).
    inline RateReport report_aggregation(const BeamSet &active_set, std::span<const double> h_gain,
                                         std::span<const double> g_gain, const PowerCoefficients &c, double rho,
                                         double r_p)
    {
        RateReport r;
        for (std::size_t k = 0; k < active_set.size(); ++k)
        {
            r.r_tilde.push_back(rate_agg_decode_primary(k, active_set, h_gain, c, rho));
            r.sic_ok.push_back(r.r_tilde.back() >= r_p - kRateTolerance);
        }
        r.r_secondary = rate_agg_secondary(active_set, h_gain, c, rho);
        r.r_primary = primary_rates(g_gain, c, rho);
        return r;
    }
}
