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

#include <catch2/catch_amalgamated.hpp>

#include "beamnoma/beam_selection.hpp"

#include <cmath>
#include <vector>

using namespace beamnoma;
using Catch::Approx;

namespace
{
    // Realization with prescribed scalar gains; the matrices are irrelevant to scheme evaluation.
    ChannelRealization scalar_realization(std::vector<double> g, std::vector<double> h)
    {
        ChannelRealization chan;
        chan.g_gain = std::move(g);
        chan.h_gain = std::move(h);
        chan.beta.assign(chan.g_gain.size(), cdouble(1.0, 0.0));
        return chan;
    }
}

TEST_CASE("evaluate_selection - worked two-beam instance")
{
    const ChannelRealization chan = scalar_realization({1.0, 1.0}, {2.0, 1.0});
    const SystemConfig cfg(2, 2, 10.0, 1.0, 2.4);
    const SchemeOutcome o = evaluate_selection(chan, cfg);
    CHECK(o.scheme == Scheme::selection);
    CHECK(o.chosen_set == BeamSet{0});
    CHECK(o.coefficients.alpha_s[0] == Approx(0.45));
    CHECK(o.coefficients.alpha_p[1] == Approx(0.1));
    CHECK(o.secondary_rate == Approx(2.4594316186372973).epsilon(1e-13));
    CHECK(o.sic_ok == std::vector<bool>{true});
    CHECK_FALSE(o.outage);
    CHECK(o.primary_rates[0] == Approx(1.0));
    CHECK(o.primary_rates[1] == Approx(1.0));

    const SchemeOutcome strict = evaluate_selection(chan, SystemConfig(2, 2, 10.0, 1.0, 2.5));
    CHECK(strict.outage);
    CHECK(strict.secondary_rate == Approx(2.4594316186372973));
}

TEST_CASE("evaluate_selection - no beam admits secondary power")
{
    const ChannelRealization chan = scalar_realization({0.05, 0.02, 0.09}, {2.0, 1.0, 3.0});
    const SchemeOutcome o = evaluate_selection(chan, SystemConfig(3, 3, 10.0, 1.0, 0.5));
    CHECK(o.outage);
    CHECK(o.secondary_rate == 0.0);
    CHECK(o.chosen_set.empty());
    for (double a : o.coefficients.alpha_s)
        CHECK(a == 0.0);
}

TEST_CASE("evaluate_selection - zero secondary target")
{
    const ChannelRealization chan = scalar_realization({1.0, 1.0}, {2.0, 1.0});
    const SchemeOutcome o = evaluate_selection(chan, SystemConfig(2, 2, 10.0, 1.0, 0.0));
    CHECK_FALSE(o.outage);
}

TEST_CASE("evaluate_selection - ties pick the lowest index")
{
    const ChannelRealization chan = scalar_realization({1.0, 1.0}, {1.5, 1.5});
    const SchemeOutcome o = evaluate_selection(chan, SystemConfig(2, 2, 10.0, 1.0, 0.5));
    CHECK(o.chosen_set == BeamSet{0});
}

TEST_CASE("evaluate_selection - argmax SINR agrees with argmax rate and outage event")
{
    for (std::size_t m : {2u, 4u})
    {
        const SystemConfig cfg(m, m, db_to_linear(15.0), 0.1, 1.0);
        for (std::uint64_t trial = 0; trial < 500; ++trial)
        {
            const ChannelRealization chan = draw_realization(cfg, {123, trial});
            const SchemeOutcome o = evaluate_selection(chan, cfg);
            const PowerCoefficients base = mode_one_coefficients(chan.g_gain, cfg.rho(), cfg.eps_p());

            double best_rate = -1.0;
            std::size_t best = 0;
            bool any = false;
            for (std::size_t k = 0; k < m; ++k)
            {
                PowerCoefficients c = base;
                c.alpha_s[k] = alpha_s_selection(k, chan.h_gain, chan.g_gain[k], base.alpha_p, cfg.rho(), cfg.eps_p());
                c.alpha_p[k] = 1.0 - c.alpha_s[k];
                any = any || c.alpha_s[k] > 0.0;
                const double r = rate_sel_secondary(k, chan.h_gain, c, cfg.rho());
                if (r > best_rate)
                {
                    best_rate = r;
                    best = k;
                }
            }
            if (!any)
            {
                CHECK(o.outage);
                continue;
            }
            REQUIRE(o.chosen_set.size() == 1);
            CHECK(o.chosen_set.front() == best);

            const double gamma = std::exp2(o.unconditioned_rate) - 1.0;
            const bool event = gamma < cfg.eps_s() || !o.sic_ok.front();
            CHECK(o.outage == event);
            // The selected share always leaves the SIC stage decodable.
            CHECK(o.sic_ok.front());
        }
    }
}
