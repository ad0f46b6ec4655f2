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

#include "beamnoma/channel_model.hpp"
#include "beamnoma/link_rates.hpp"
#include "beamnoma/power_allocation.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace beamnoma
{
    enum class Scheme
    {
        selection,
        scheme1,
        scheme2
    };

    inline std::string_view to_string(Scheme s)
    {
        switch (s)
        {
        case Scheme::selection:
            return "selection";
        case Scheme::scheme1:
            return "scheme1";
        case Scheme::scheme2:
            return "scheme2";
        }
        return "?";
    }

    inline Scheme parse_scheme(std::string_view name)
    {
        if (name == "selection")
            return Scheme::selection;
        if (name == "scheme1")
            return Scheme::scheme1;
        if (name == "scheme2")
            return Scheme::scheme2;
        throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
    }

    /// Result of evaluating one scheme on one realization.
    struct SchemeOutcome
    {
        Scheme scheme = Scheme::selection;
        BeamSet chosen_set;           // beams carrying secondary power, in decoding order
        double secondary_rate = 0.0;  // counted only when SIC succeeds
        double unconditioned_rate = 0.0;
        bool outage = true;
        std::vector<bool> sic_ok;  // one flag per chosen beam; empty for Scheme I
        std::vector<double> primary_rates;
        PowerCoefficients coefficients;
    };

    /// Beam selection: serve the secondary user on the single beam with the largest SINR.
    ///
    /// All beams start from the legacy-only share; each candidate m gets the single-beam
    /// secondary share. The beam maximizing the secondary SINR wins (lowest index on ties).
    /// Outage unless the secondary user both cancels the legacy signal and meets R^S.
    inline SchemeOutcome evaluate_selection(const ChannelRealization &chan, const SystemConfig &cfg)
    {
        const std::size_t m_beams = chan.m_beams();
        const double rho = cfg.rho();
        const double eps_p = cfg.eps_p();
        const PowerCoefficients base = mode_one_coefficients(chan.g_gain, rho, eps_p);

        std::size_t best = 0;
        double best_sinr = -1.0;
        double best_alpha_s = 0.0;
        bool any_active = false;
        for (std::size_t m = 0; m < m_beams; ++m)
        {
            const double a_s = alpha_s_selection(m, chan.h_gain, chan.g_gain[m], base.alpha_p, rho, eps_p);
            double interference = 1.0 / rho;
            for (std::size_t i = 0; i < m_beams; ++i)
                if (i != m)
                    interference += chan.h_gain[i] * base.alpha_p[i];
            const double sinr = chan.h_gain[m] * a_s / interference;
            any_active = any_active || a_s > 0.0;
            if (sinr > best_sinr)
            {
                best_sinr = sinr;
                best = m;
                best_alpha_s = a_s;
            }
        }

        SchemeOutcome out;
        out.scheme = Scheme::selection;
        out.coefficients = base;
        if (!any_active)
        {
            out.outage = true;
            out.primary_rates = primary_rates(chan.g_gain, out.coefficients, rho);
            return out;
        }

        out.coefficients.active_set = {best};
        out.coefficients.alpha_s[best] = best_alpha_s;
        out.coefficients.alpha_p[best] = 1.0 - best_alpha_s;
        out.chosen_set = {best};

        const RateReport report = report_selection(best, chan.h_gain, chan.g_gain, out.coefficients, rho, cfg.r_p());
        out.sic_ok = report.sic_ok;
        out.primary_rates = report.r_primary;
        out.unconditioned_rate = report.r_secondary;
        out.secondary_rate = report.sic_ok.front() ? report.r_secondary : 0.0;
        out.outage = !(report.sic_ok.front() && report.r_secondary >= cfg.r_s());
        return out;
    }
}
