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

// Trial i of an experiment always draws its channel from (seed, i), whatever the SNR point,
// scheme or worker count. Workers fill per-trial slots; reductions then run sequentially in
// trial order, so estimates are bit-identical for any number of workers.

#pragma once

#include "beamnoma/beam_aggregation.hpp"
#include "beamnoma/beam_selection.hpp"
#include "beamnoma/channel_model.hpp"
#include "beamnoma/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace beamnoma
{
    enum class Metric
    {
        outage,
        ergodic_rate,
        ergodic_rate_unconditioned,
        primary_min_rate
    };

    inline std::string_view to_string(Metric m)
    {
        switch (m)
        {
        case Metric::outage:
            return "outage";
        case Metric::ergodic_rate:
            return "ergodic_rate";
        case Metric::ergodic_rate_unconditioned:
            return "ergodic_rate_unconditioned";
        case Metric::primary_min_rate:
            return "primary_min_rate";
        }
        return "?";
    }

    inline Metric parse_metric(std::string_view name)
    {
        if (name == "outage")
            return Metric::outage;
        if (name == "ergodic_rate")
            return Metric::ergodic_rate;
        if (name == "ergodic_rate_unconditioned")
            return Metric::ergodic_rate_unconditioned;
        if (name == "primary_min_rate")
            return Metric::primary_min_rate;
        throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
    }

    /// System parameters shared by every SNR point of a sweep.
    struct SystemTemplate
    {
        std::size_t n_antennas = 2;
        std::size_t m_beams = 2;
        double r_p = 0.1;
        double r_s = 1.0;

        SystemConfig at_snr_db(double snr_db) const
        {
            return {n_antennas, m_beams, db_to_linear(snr_db), r_p, r_s};
        }
    };

    struct SweepSpec
    {
        SystemTemplate cfg_template;
        std::vector<double> snr_grid_db;
        std::vector<Scheme> schemes;
        Metric metric = Metric::outage;
        std::size_t trials = 1000;
        std::uint64_t seed = 1;
        CandidateStrategy candidate_strategy = CandidateStrategy::prefixes_plus_singletons;

        /// Throws std::invalid_argument naming the broken invariant.
        void validate() const
        {
            // Constructing a config checks N >= M >= 1 and the rate targets.
            (void)cfg_template.at_snr_db(0.0);
            if (trials < 1)
                throw std::invalid_argument("trials must be at least 1");
            if (snr_grid_db.empty())
                throw std::invalid_argument("snr grid must be nonempty");
            for (std::size_t i = 1; i < snr_grid_db.size(); ++i)
                if (!(snr_grid_db[i] > snr_grid_db[i - 1]))
                    throw std::invalid_argument("snr grid must be strictly increasing");
            if (schemes.empty())
                throw std::invalid_argument("at least one scheme is required");
            if (candidate_strategy == CandidateStrategy::all_subsets && cfg_template.m_beams > kMaxAllSubsetsBeams)
                throw std::invalid_argument("all-subsets strategy supports at most " +
                                            std::to_string(kMaxAllSubsetsBeams) + " beams");
        }
    };

    struct MetricEstimate
    {
        double value = 0.0;
        double std_err = 0.0;
        std::size_t trials = 0;
        std::size_t resamples = 0;
    };

    struct SweepRow
    {
        double snr_db = 0.0;
        std::size_t n_antennas = 0;
        std::size_t m_beams = 0;
        Scheme scheme = Scheme::selection;
        Metric metric = Metric::outage;
        MetricEstimate estimate;
    };

    /// Rows ordered by SNR point, then by scheme in the order requested.
    struct SweepResult
    {
        std::uint64_t seed = 0;
        std::vector<SweepRow> rows;
    };

    /// Scheme evaluation on an already drawn realization.
    inline SchemeOutcome evaluate_scheme(const ChannelRealization &chan, const SystemConfig &cfg, Scheme scheme,
                                         CandidateStrategy strategy)
    {
        switch (scheme)
        {
        case Scheme::selection:
            return evaluate_selection(chan, cfg);
        case Scheme::scheme1:
            return evaluate_scheme1(chan, cfg, strategy);
        case Scheme::scheme2:
            return evaluate_scheme2(chan, cfg, strategy);
        }
        throw std::logic_error("unhandled scheme");
    }

    /// Draws the trial's channel (redrawing singular ones) and evaluates one scheme on it.
    inline SchemeOutcome run_trial(const SystemConfig &cfg, TrialSeed seed, Scheme scheme,
                                   CandidateStrategy strategy = CandidateStrategy::prefixes_plus_singletons)
    {
        return evaluate_scheme(draw_realization(cfg, seed), cfg, scheme, strategy);
    }

    /// Per-trial quantities needed by every metric.
    struct TrialRecord
    {
        bool outage = true;
        double rate = 0.0;
        double unconditioned_rate = 0.0;
        double primary_min_rate = 0.0;
        std::size_t resamples = 0;
    };

    inline TrialRecord summarize(const SchemeOutcome &o, std::size_t resamples)
    {
        TrialRecord r;
        r.outage = o.outage;
        r.rate = o.secondary_rate;
        r.unconditioned_rate = o.unconditioned_rate;
        r.primary_min_rate =
            o.primary_rates.empty() ? 0.0 : *std::min_element(o.primary_rates.begin(), o.primary_rates.end());
        r.resamples = resamples;
        return r;
    }

    /// Runs body(i) for i in [0, count) on `workers` threads. The first exception is rethrown.
    template <typename Body>
    void parallel_for(std::size_t count, std::size_t workers, Body &&body)
    {
        workers = std::max<std::size_t>(1, std::min(workers, count));
        if (workers == 1)
        {
            for (std::size_t i = 0; i < count; ++i)
                body(i);
            return;
        }
        std::exception_ptr error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try
                {
                    for (std::size_t i = w; i < count; i += workers)
                        body(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            });
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }

    /// Mean and standard error of a metric from per-trial records, summed in trial order.
    inline MetricEstimate reduce_metric(const std::vector<TrialRecord> &records, Metric metric)
    {
        MetricEstimate est;
        est.trials = records.size();
        if (records.empty())
            return est;
        const double n = static_cast<double>(records.size());

        auto sample_of = [metric](const TrialRecord &r) {
            switch (metric)
            {
            case Metric::outage:
                return r.outage ? 1.0 : 0.0;
            case Metric::ergodic_rate:
                return r.rate;
            case Metric::ergodic_rate_unconditioned:
                return r.unconditioned_rate;
            case Metric::primary_min_rate:
                return r.primary_min_rate;
            }
            return 0.0;
        };

        double sum = 0.0;
        for (const TrialRecord &r : records)
        {
            sum += sample_of(r);
            est.resamples += r.resamples;
        }
        est.value = sum / n;

        if (metric == Metric::outage)
            est.std_err = std::sqrt(est.value * (1.0 - est.value) / n);
        else if (records.size() > 1)
        {
            double ss = 0.0;
            for (const TrialRecord &r : records)
            {
                const double d = sample_of(r) - est.value;
                ss += d * d;
            }
            est.std_err = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        }
        return est;
    }

    /// Per-trial records for every (SNR point, scheme) pair of a spec: records[snr][scheme][trial].
    ///
    /// Each trial's channel is drawn once and shared by all SNR points and schemes.
    inline std::vector<std::vector<std::vector<TrialRecord>>> run_records(const SweepSpec &spec, std::size_t workers)
    {
        spec.validate();
        const std::size_t n_snr = spec.snr_grid_db.size();
        const std::size_t n_schemes = spec.schemes.size();
        std::vector<SystemConfig> configs;
        for (double db : spec.snr_grid_db)
            configs.push_back(spec.cfg_template.at_snr_db(db));

        std::vector<std::vector<std::vector<TrialRecord>>> records(
            n_snr, std::vector<std::vector<TrialRecord>>(n_schemes, std::vector<TrialRecord>(spec.trials)));

        parallel_for(spec.trials, workers, [&](std::size_t trial) {
            // The channel law does not depend on rho.
            const ChannelRealization chan = draw_realization(configs.front(), {spec.seed, trial});
            for (std::size_t s = 0; s < n_snr; ++s)
                for (std::size_t k = 0; k < n_schemes; ++k)
                {
                    const SchemeOutcome o =
                        evaluate_scheme(chan, configs[s], spec.schemes[k], spec.candidate_strategy);
                    records[s][k][trial] = summarize(o, chan.resamples);
                }
        });
        return records;
    }

    /// Estimates the spec's metric at every SNR point for every scheme.
    inline SweepResult estimate(const SweepSpec &spec, std::size_t workers = 1)
    {
        const auto records = run_records(spec, workers);
        SweepResult result;
        result.seed = spec.seed;
        for (std::size_t s = 0; s < spec.snr_grid_db.size(); ++s)
            for (std::size_t k = 0; k < spec.schemes.size(); ++k)
                result.rows.push_back({spec.snr_grid_db[s], spec.cfg_template.n_antennas, spec.cfg_template.m_beams,
                                       spec.schemes[k], spec.metric, reduce_metric(records[s][k], spec.metric)});
        return result;
    }
}
