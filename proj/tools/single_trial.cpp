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


// Draws one channel and prints what each scheme does with it.
//
//   beamnoma_single_trial [snr_db] [m_beams] [seed]

#include "beamnoma/montecarlo.hpp"

#include <cstdio>
#include <cstdlib>

using namespace beamnoma;

int main(int argc, char **argv)
{
    const double snr_db = argc > 1 ? std::atof(argv[1]) : 20.0;
    const std::size_t m = argc > 2 ? static_cast<std::size_t>(std::atoi(argv[2])) : 4;
    const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;

    const SystemConfig cfg(m, m, db_to_linear(snr_db), 0.1, 1.0);
    const ChannelRealization chan = draw_realization(cfg, {seed, 0});

    std::printf("beam      g_m        h_m\n");
    for (std::size_t i = 0; i < m; ++i)
        std::printf("%4zu %10.4f %10.4f\n", i, chan.g_gain[i], chan.h_gain[i]);

    for (Scheme s : {Scheme::selection, Scheme::scheme1, Scheme::scheme2})
    {
        const SchemeOutcome o = evaluate_scheme(chan, cfg, s, CandidateStrategy::prefixes_plus_singletons);
        std::printf("\n%-9s rate %.4f BPCU, outage %s, beams {", std::string(to_string(s)).c_str(), o.secondary_rate,
                    o.outage ? "yes" : "no");
        for (std::size_t i = 0; i < o.chosen_set.size(); ++i)
            std::printf("%s%zu", i ? "," : "", o.chosen_set[i]);
        std::printf("}\n  alpha_p:");
        for (double a : o.coefficients.alpha_p)
            std::printf(" %.4f", a);
        std::printf("\n  alpha_s:");
        for (double a : o.coefficients.alpha_s)
            std::printf(" %.4f", a);
        std::printf("\n");
    }
    return 0;
}
