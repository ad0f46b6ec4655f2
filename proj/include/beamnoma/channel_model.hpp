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

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace beamnoma
{
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;

    /// Largest accepted condition number of G^H G.
    inline constexpr double kMaxGramCondition = 1e12;

    /// Upper bound on singular-channel redraws for one trial.
    inline constexpr std::size_t kMaxResamples = 64;

    /// Thrown by zf_beams when G^H G is numerically singular.
    class SingularChannel : public std::runtime_error
    {
    public:
        explicit SingularChannel(double condition)
            : std::runtime_error("channel Gram matrix is numerically singular (condition " +
                                 std::to_string(condition) + ")"),
              condition_(condition)
        {
        }
        double condition() const { return condition_; }

    private:
        double condition_;
    };

    struct ZfBeams
    {
        CMatrix F;                   // N x M, columns f_m
        std::vector<double> g_gain;  // |g_m^H f_m|^2
    };

    struct EffectiveGains
    {
        std::vector<double> h_gain;  // |h^H f_m|^2
        std::vector<cdouble> beta;   // coherent-combining phases
    };

    /// One Monte Carlo draw with everything derived from it.
    struct ChannelRealization
    {
        CMatrix G;
        CVector h;
        CMatrix F;
        std::vector<double> g_gain;
        std::vector<double> h_gain;
        std::vector<cdouble> beta;
        std::size_t resamples = 0;  // singular draws discarded before this one

        std::size_t m_beams() const { return g_gain.size(); }
    };

    /// Draws G (N x M) and h (length N) with i.i.d. CN(0,1) entries.
    ///
    /// Entries are consumed column-major for G, then h. `attempt` selects a derived
    /// sub-stream used when a previous draw was singular.
    inline std::pair<CMatrix, CVector> sample_channels(const SystemConfig &cfg, TrialSeed seed,
                                                       std::uint64_t attempt = 0)
    {
        const auto n = static_cast<Eigen::Index>(cfg.n_antennas());
        const auto m = static_cast<Eigen::Index>(cfg.m_beams());
        GaussianStream rng(derive_stream_seed(seed, attempt));

        CMatrix G(n, m);
        for (Eigen::Index col = 0; col < m; ++col)
            for (Eigen::Index row = 0; row < n; ++row)
                G(row, col) = rng.complex_normal();

        CVector h(n);
        for (Eigen::Index row = 0; row < n; ++row)
            h(row) = rng.complex_normal();

        return {std::move(G), std::move(h)};
    }

    /// Normalized zero-forcing beams F = G (G^H G)^{-1} D with D_ii = (M [(G^H G)^{-1}]_ii)^{-1/2}.
    ///
    /// Every column ends up with squared norm 1/M, so total power is one.
    inline ZfBeams zf_beams(const CMatrix &G)
    {
        const Eigen::Index m = G.cols();
        if (m == 0 || G.rows() < m)
            throw std::invalid_argument("zf_beams: G must be N x M with N >= M >= 1");

        const CMatrix gram = G.adjoint() * G;
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
        const double lambda_min = eig.eigenvalues().minCoeff();
        const double lambda_max = eig.eigenvalues().maxCoeff();
        const double condition = lambda_min > 0.0 ? lambda_max / lambda_min : INFINITY;
        if (!(condition < kMaxGramCondition))
            throw SingularChannel(condition);

        const CMatrix gram_inv = gram.llt().solve(CMatrix::Identity(m, m));
        CMatrix F = G * gram_inv;
        for (Eigen::Index i = 0; i < m; ++i)
        {
            const double diag = gram_inv(i, i).real();
            F.col(i) *= 1.0 / std::sqrt(static_cast<double>(m) * diag);
        }

        std::vector<double> g_gain(static_cast<std::size_t>(m));
        for (Eigen::Index i = 0; i < m; ++i)
            g_gain[static_cast<std::size_t>(i)] = std::norm(G.col(i).dot(F.col(i)));

        return {std::move(F), std::move(g_gain)};
    }

    /// h_m = |h^H f_m|^2 and beta_m = conj(h^H f_m) / |h^H f_m| (1 when h_m = 0).
    inline EffectiveGains effective_gains(const CVector &h, const CMatrix &F)
    {
        if (h.size() != F.rows())
            throw std::invalid_argument("effective_gains: dimension mismatch between h and F");

        const auto m = static_cast<std::size_t>(F.cols());
        EffectiveGains out{std::vector<double>(m), std::vector<cdouble>(m, cdouble(1.0, 0.0))};
        for (std::size_t i = 0; i < m; ++i)
        {
            // Eigen's dot conjugates the first argument: h.dot(f) = h^H f.
            const cdouble proj = h.dot(F.col(static_cast<Eigen::Index>(i)));
            const double mag = std::abs(proj);
            out.h_gain[i] = mag * mag;
            if (mag > 0.0)
                out.beta[i] = std::conj(proj) / mag;
        }
        return out;
    }

    /// Builds a realization from explicit channels. Throws SingularChannel.
    inline ChannelRealization make_realization(CMatrix G, CVector h)
    {
        ZfBeams zf = zf_beams(G);
        EffectiveGains eff = effective_gains(h, zf.F);
        return {std::move(G), std::move(h), std::move(zf.F), std::move(zf.g_gain),
                std::move(eff.h_gain), std::move(eff.beta), 0};
    }

    /// Draws a realization for a trial, redrawing from derived sub-seeds on singular channels.
    inline ChannelRealization draw_realization(const SystemConfig &cfg, TrialSeed seed)
    {
        for (std::size_t attempt = 0; attempt <= kMaxResamples; ++attempt)
        {
            auto [G, h] = sample_channels(cfg, seed, attempt);
            try
            {
                ChannelRealization chan = make_realization(std::move(G), std::move(h));
                chan.resamples = attempt;
                return chan;
            }
            catch (const SingularChannel &)
            {
            }
        }
        throw std::runtime_error("draw_realization: exhausted singular-channel redraws");
    }
}
