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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace beamnoma
{
    /// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s).
    ///
    /// Power series below x = s + 1, Lentz continued fraction for Q(s, x) above.
    inline double gamma_lower_regularized(double s, double x)
    {
        if (!(s > 0.0))
            throw std::domain_error("gamma_lower_regularized: shape must be positive");
        if (!(x >= 0.0))
            throw std::domain_error("gamma_lower_regularized: x must be non-negative");
        if (x == 0.0)
            return 0.0;
        if (std::isinf(x))
            return 1.0;

        constexpr int kMaxIter = 1000;
        constexpr double kEps = 1e-16;
        const double log_prefactor = s * std::log(x) - x - std::lgamma(s);

        if (x < s + 1.0)
        {
            double term = 1.0 / s;
            double sum = term;
            for (int n = 1; n < kMaxIter; ++n)
            {
                term *= x / (s + n);
                sum += term;
                if (std::abs(term) < std::abs(sum) * kEps)
                    break;
            }
            return std::clamp(sum * std::exp(log_prefactor), 0.0, 1.0);
        }

        constexpr double kTiny = 1e-300;
        double b = x + 1.0 - s;
        double c = 1.0 / kTiny;
        double d = 1.0 / b;
        double h = d;
        for (int n = 1; n < kMaxIter; ++n)
        {
            const double an = -n * (n - s);
            b += 2.0;
            d = an * d + b;
            if (std::abs(d) < kTiny)
                d = kTiny;
            c = b + an / c;
            if (std::abs(c) < kTiny)
                c = kTiny;
            d = 1.0 / d;
            const double delta = d * c;
            h *= delta;
            if (std::abs(delta - 1.0) < kEps)
                break;
        }
        return std::clamp(1.0 - std::exp(log_prefactor) * h, 0.0, 1.0);
    }

    /// Law of M g_m under i.i.d. Rayleigh channels with normalized ZF: Gamma(N - M + 1, 1).
    struct GainLaw
    {
        unsigned shape = 1;
        double scale = 1.0;

        static GainLaw for_system(std::size_t n_antennas, std::size_t m_beams)
        {
            if (m_beams < 1 || n_antennas < m_beams)
                throw std::invalid_argument("GainLaw: requires N >= M >= 1");
            return {static_cast<unsigned>(n_antennas - m_beams + 1), 1.0};
        }

        double cdf(double x) const { return x <= 0.0 ? 0.0 : gamma_lower_regularized(shape, x / scale); }
    };

    /// CDF of M g_m at x.
    inline double gain_cdf(double x, std::size_t n_antennas, std::size_t m_beams)
    {
        return GainLaw::for_system(n_antennas, m_beams).cdf(x);
    }

    /// P(g_1 <= eps_p / rho) = P(N - M + 1, M eps_p / rho).
    inline double q1_exact(std::size_t n_antennas, std::size_t m_beams, double eps_p, double rho)
    {
        return gain_cdf(static_cast<double>(m_beams) * eps_p / rho, n_antennas, m_beams);
    }

    /// Leading high-SNR term (M eps_p / rho)^k / k! with k = N - M + 1.
    inline double q1_high_snr(std::size_t n_antennas, std::size_t m_beams, double eps_p, double rho)
    {
        const double k = static_cast<double>(GainLaw::for_system(n_antennas, m_beams).shape);
        const double arg = static_cast<double>(m_beams) * eps_p / rho;
        return std::exp(k * std::log(arg) - std::lgamma(k + 1.0));
    }

    /// Kolmogorov-Smirnov distance sup_x |F_n(x) - F(x)|.
    inline double ks_statistic(std::vector<double> samples, const std::function<double(double)> &cdf)
    {
        if (samples.empty())
            throw std::invalid_argument("ks_statistic: no samples");
        std::sort(samples.begin(), samples.end());
        const double n = static_cast<double>(samples.size());
        double d = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
        {
            const double f = cdf(samples[i]);
            d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
        }
        return d;
    }

    /// Asymptotic KS critical value at significance 0.01.
    inline double ks_critical_1pct(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }
}
