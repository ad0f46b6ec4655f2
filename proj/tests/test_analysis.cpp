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

#include "beamnoma/analysis.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <vector>

using namespace beamnoma;
using Catch::Approx;

TEST_CASE("gamma_lower_regularized - closed forms")
{
    // The shape-2 closed form cancels at small x, so it is only good to an absolute 1e-15.
    for (double x : {0.01, 0.5, 1.0, 3.0, 12.0})
    {
        CHECK(gamma_lower_regularized(1.0, x) == Approx(1.0 - std::exp(-x)).epsilon(1e-14));
        CHECK(gamma_lower_regularized(2.0, x) == Approx(1.0 - (1.0 + x) * std::exp(-x)).epsilon(1e-13).margin(1e-15));
        CHECK(gamma_lower_regularized(0.5, x) == Approx(std::erf(std::sqrt(x))).epsilon(1e-13));
    }
    CHECK(gamma_lower_regularized(2.0, 2.0) == Approx(0.5939941502901619).epsilon(1e-14));
    CHECK(gamma_lower_regularized(3.0, 0.0) == 0.0);
    CHECK(gamma_lower_regularized(3.0, INFINITY) == 1.0);
    CHECK_THROWS_AS(gamma_lower_regularized(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(gamma_lower_regularized(1.0, -1.0), std::domain_error);
}

TEST_CASE("gamma_lower_regularized - frozen reference values")
{
    CHECK(gamma_lower_regularized(3.5, 7.2) == Approx(0.9554925004854492).epsilon(1e-13));
    CHECK(gamma_lower_regularized(0.5, 0.01) == Approx(0.11246291601828491).epsilon(1e-13));
    CHECK(gamma_lower_regularized(10.0, 3.0) == Approx(0.0011024881301154815).epsilon(1e-12));
    CHECK(gamma_lower_regularized(50.0, 45.0) == Approx(0.24680203440017026).epsilon(1e-11));
}

TEST_CASE("gamma_lower_regularized - agrees with an independent implementation")
{
    for (double s : {1.0, 2.0, 3.0, 5.0, 17.0})
        for (double x : {1e-4, 0.03, 0.7, 2.9, 6.0, 15.0, 40.0})
            CHECK(gamma_lower_regularized(s, x) == Approx(boost::math::gamma_p(s, x)).epsilon(1e-12).margin(1e-300));
}

TEST_CASE("q1_exact - values")
{
    CHECK(q1_exact(2, 2, 1.0, 10.0) == Approx(0.18126924692201818).epsilon(1e-14));
    CHECK(q1_exact(3, 2, 0.1, 2.0) == Approx(0.004678840160444397).epsilon(1e-12));
    double prev = 1.0;
    for (double rho : {1.0, 10.0, 100.0, 1000.0})
    {
        const double q = q1_exact(4, 2, 0.5, rho);
        CHECK(q < prev);
        prev = q;
    }
}

TEST_CASE("q1_high_snr - leading term")
{
    CHECK(q1_high_snr(4, 2, 0.5, 10.0) == Approx(std::pow(0.1, 3) / 6.0).epsilon(1e-13));
    for (auto [n, m] : {std::pair<std::size_t, std::size_t>{2, 2}, {4, 2}, {4, 4}, {6, 3}})
    {
        const double ratio = q1_exact(n, m, 0.0718, 1e4) / q1_high_snr(n, m, 0.0718, 1e4);
        CHECK(std::abs(ratio - 1.0) < 0.01);
    }
}

TEST_CASE("gain_cdf - law and validation")
{
    CHECK(gain_cdf(-1.0, 4, 2) == 0.0);
    CHECK(gain_cdf(1.0, 2, 2) == Approx(1.0 - std::exp(-1.0)));
    CHECK(GainLaw::for_system(5, 2).shape == 4u);
    CHECK_THROWS_AS(gain_cdf(1.0, 1, 2), std::invalid_argument);
}

TEST_CASE("ks_statistic - small examples")
{
    const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
    CHECK(ks_statistic({0.5}, uniform) == Approx(0.5));
    CHECK(ks_statistic({0.3, 0.3, 0.3}, uniform) >= 0.5);
    CHECK(ks_statistic({0.125, 0.375, 0.625, 0.875}, uniform) == Approx(0.125));
    CHECK_THROWS_AS(ks_statistic({}, uniform), std::invalid_argument);
    CHECK(ks_critical_1pct(10000) == Approx(0.0163));
}
