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

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace beamnoma
{
    using cdouble = std::complex<double>;

    /// Linear power ratio from decibels.
    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

    /// SINR threshold 2^R - 1 for a target rate R in bits per channel use.
    inline double rate_threshold(double rate_bpcu) { return std::exp2(rate_bpcu) - 1.0; }

    /// Experiment parameters for one operating point.
    ///
    /// N transmit antennas serve M legacy users on M zero-forcing beams. `rho` is the
    /// linear transmit SNR, `r_p` the common legacy target and `r_s` the secondary
    /// target, both in BPCU. The SINR thresholds are derived once at construction.
    class SystemConfig
    {
    public:
        SystemConfig(std::size_t n_antennas, std::size_t m_beams, double rho, double r_p, double r_s)
            : n_(n_antennas), m_(m_beams), rho_(rho), r_p_(r_p), r_s_(r_s)
        {
            if (m_ < 1)
                throw std::invalid_argument("m_beams must be at least 1");
            if (n_ < m_)
                throw std::invalid_argument("n_antennas must satisfy N >= M (got N=" + std::to_string(n_) +
                                            ", M=" + std::to_string(m_) + ")");
            if (!(rho > 0.0) || !std::isfinite(rho))
                throw std::invalid_argument("rho must be a positive finite linear SNR");
            if (!(r_p > 0.0) || !std::isfinite(r_p))
                throw std::invalid_argument("r_p must be a positive rate");
            if (!(r_s >= 0.0) || !std::isfinite(r_s))
                throw std::invalid_argument("r_s must be a non-negative rate");
            eps_p_ = rate_threshold(r_p_);
            eps_s_ = rate_threshold(r_s_);
        }

        std::size_t n_antennas() const { return n_; }
        std::size_t m_beams() const { return m_; }
        double rho() const { return rho_; }
        double r_p() const { return r_p_; }
        double r_s() const { return r_s_; }
        double eps_p() const { return eps_p_; }
        double eps_s() const { return eps_s_; }

        SystemConfig with_rho(double rho) const { return {n_, m_, rho, r_p_, r_s_}; }

    private:
        std::size_t n_;
        std::size_t m_;
        double rho_;
        double r_p_;
        double r_s_;
        double eps_p_ = 0.0;
        double eps_s_ = 0.0;
    };

    /// Identifies one Monte Carlo trial. The random stream is a pure function of both fields.
    struct TrialSeed
    {
        std::uint64_t experiment_seed = 0;
        std::uint64_t trial_index = 0;

        friend bool operator==(const TrialSeed &, const TrialSeed &) = default;
    };

    namespace detail
    {
        constexpr std::uint64_t splitmix64(std::uint64_t x)
        {
            x += 0x9E3779B97F4A7C15ULL;
            x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
            x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
            return x ^ (x >> 31);
        }
    }

    /// 64-bit seed for attempt `attempt` of a trial. Attempts > 0 are singular-channel redraws.
    constexpr std::uint64_t derive_stream_seed(TrialSeed seed, std::uint64_t attempt = 0)
    {
        std::uint64_t s = detail::splitmix64(seed.experiment_seed);
        s = detail::splitmix64(s ^ seed.trial_index);
        return detail::splitmix64(s ^ (attempt * 0xD1B54A32D192ED03ULL));
    }

    /// Deterministic normal/complex-normal source.
    ///
    /// mt19937_64 output is fixed by the standard; the uniform and Box-Muller transforms are
    /// done here because the std distributions are implementation-defined.
    class GaussianStream
    {
    public:
        explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

        /// Uniform on (0, 1].
        double uniform()
        {
            return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
        }

        double standard_normal()
        {
            if (has_spare_)
            {
                has_spare_ = false;
                return spare_;
            }
            const double radius = std::sqrt(-2.0 * std::log(uniform()));
            const double angle = 2.0 * M_PI * uniform();
            spare_ = radius * std::sin(angle);
            has_spare_ = true;
            return radius * std::cos(angle);
        }

        /// CN(0, 1): real and imaginary parts each N(0, 1/2).
        cdouble complex_normal()
        {
            const double re = standard_normal();
            const double im = standard_normal();
            return {re * M_SQRT1_2, im * M_SQRT1_2};
        }

    private:
        std::mt19937_64 engine_;
        double spare_ = 0.0;
        bool has_spare_ = false;
    };
}
