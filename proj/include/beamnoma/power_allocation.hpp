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

#include "beamnoma/config.hpp"

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace beamnoma
{
    using BeamSet = std::vector<std::size_t>;

    /// Per-beam power split between the legacy user (alpha_p) and the secondary user (alpha_s).
    ///
    /// Beams outside `active_set` carry no secondary power.
    struct PowerCoefficients
    {
        std::vector<double> alpha_p;
        std::vector<double> alpha_s;
        BeamSet active_set;

        std::size_t size() const { return alpha_p.size(); }

        bool contains(std::size_t beam) const
        {
            return std::find(active_set.begin(), active_set.end(), beam) != active_set.end();
        }
    };

    /// Legacy-only share min{1, eps_p / (rho g)}: just enough power to meet the legacy target.
    inline double alpha_p_inactive(double g_m, double rho, double eps_p)
    {
        return std::min(1.0, eps_p / (rho * g_m));
    }

    /// Minimum legacy share on a beam that also carries the secondary user.
    ///
    /// eta_m <= 1 exactly when g_m >= eps_p / rho.
    inline double eta(double g_m, double rho, double eps_p)
    {
        return eps_p * (g_m + 1.0 / rho) / (g_m * (1.0 + eps_p));
    }

    /// Largest secondary share on beam m that keeps the legacy user at its target:
    /// max{0, (g_m - eps_p/rho) / ((eps_p + 1) g_m)}. Equals 1 - eta_m when positive.
    inline double secondary_cap_primary_qos(double g_m, double rho, double eps_p)
    {
        return std::max(0.0, (g_m - eps_p / rho) / ((eps_p + 1.0) * g_m));
    }

    /// Coefficients with the secondary user silent on every beam.
    inline PowerCoefficients mode_one_coefficients(std::span<const double> g_gain, double rho, double eps_p)
    {
        PowerCoefficients c{std::vector<double>(g_gain.size()), std::vector<double>(g_gain.size(), 0.0), {}};
        for (std::size_t i = 0; i < g_gain.size(); ++i)
            c.alpha_p[i] = alpha_p_inactive(g_gain[i], rho, eps_p);
        return c;
    }

    /// Secondary share when beam m alone serves the secondary user.
    ///
    /// Minimum of the legacy-QoS cap and the cap that lets the secondary user decode the legacy
    /// signal first (SIC). `alpha_p_others[i]` must hold the legacy-only share of beam i != m;
    /// entry m is ignored. Returns 0 on a beam with h_m = 0.
    inline double alpha_s_selection(std::size_t m, std::span<const double> h_gain, double g_m,
                                    std::span<const double> alpha_p_others, double rho, double eps_p)
    {
        if (m >= h_gain.size() || alpha_p_others.size() != h_gain.size())
            throw std::invalid_argument("alpha_s_selection: beam index or vector length mismatch");
        const double h_m = h_gain[m];
        if (!(h_m > 0.0))
            return 0.0;

        double interference = 0.0;
        for (std::size_t i = 0; i < h_gain.size(); ++i)
            if (i != m)
                interference += h_gain[i] * alpha_p_others[i];

        const double qos_cap = secondary_cap_primary_qos(g_m, rho, eps_p);
        const double sic_cap =
            std::max(0.0, (h_m - eps_p * interference - eps_p / rho) / ((1.0 + eps_p) * h_m));
        return std::min(qos_cap, sic_cap);
    }

    /// Scheme I coefficients: beams in the active set get (eta_m, 1 - eta_m) clamped to the
    /// legacy-silent fallback (1, 0); the rest use the legacy-only share.
    inline PowerCoefficients scheme1_coefficients(const SystemConfig &cfg, std::span<const double> g_gain,
                                                  const BeamSet &active_set)
    {
        PowerCoefficients c = mode_one_coefficients(g_gain, cfg.rho(), cfg.eps_p());
        c.active_set = active_set;
        for (std::size_t m : active_set)
        {
            if (m >= g_gain.size())
                throw std::invalid_argument("scheme1_coefficients: beam index out of range");
            const double g = g_gain[m];
            if (g >= cfg.eps_p() / cfg.rho())
            {
                c.alpha_s[m] = secondary_cap_primary_qos(g, cfg.rho(), cfg.eps_p());
                c.alpha_p[m] = 1.0 - c.alpha_s[m];
            }
            else
            {
                c.alpha_s[m] = 0.0;
                c.alpha_p[m] = 1.0;
            }
        }
        return c;
    }

    /// Residual interference-plus-noise seen by the secondary user after decoding every legacy
    /// signal in `active_set`: sum of h_j alpha_p_j over the remaining beams, plus 1/rho.
    inline double tau(const BeamSet &active_set, std::span<const double> h_gain, std::span<const double> alpha_p,
                      double rho)
    {
        double sum = 0.0;
        for (std::size_t j = 0; j < h_gain.size(); ++j)
            if (std::find(active_set.begin(), active_set.end(), j) == active_set.end())
                sum += h_gain[j] * alpha_p[j];
        return sum + 1.0 / rho;
    }
}
