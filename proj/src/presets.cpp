// SPDX-License-Identifier: Apache-2.0
//
// sounderlab - sliding correlation channel sounder simulation and analysis
// Copyright (C) 2026 sounderlab contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed
// under the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR
// CONDITIONS OF ANY KIND, either express or implied. See the License for the
// specific language governing permissions and limitations under the License.
// ------------------------------------------------------------------------

#include "sounderlab/presets.hpp"

#include "sounderlab/analysis.hpp"
#include "sounderlab/report.hpp"

namespace sounderlab::cli
{

namespace
{

const char *fig4_text = R"(# fig4: spectrum of the 4095-chip PN sequence at 1 Gcps
mode = tx
pn.s_word = 111
pn.sw_word = 000000101001
sounder.alpha_hz = 1e9
sounder.oversample = 10
spectrum.periods = 2
spectrum.resolution_hz = 0
)";

const char *fig5_text = R"(# fig5: sync pulse train of a desk-scale sliding correlator
# 31-chip sequence, gamma = 100, sync period 3.1 ms
mode = rx
pn.n_stages = 5
sounder.alpha_hz = 1e6
sounder.beta_hz = 0.99e6
sounder.oversample = 10
sync.threshold = 0.5
sync.periods = 3
)";

const char *fig6_7_text = R"(# fig6_7: multipath profile of a LOS path plus two delayed replicas
# 2047-chip sequence at 1 Gcps, gamma = 20000, taps 1 ns and 2 ns apart
mode = rx
pn.s_word = 110
sounder.alpha_hz = 1e9
sounder.beta_hz = 999.95e6
sounder.oversample = 10
channel.bulk_delay_ns = 100
channel.tap.0.delay_ns = 0
channel.tap.0.gain_db = -4.5
channel.tap.1.delay_ns = 1
channel.tap.1.gain_db = -6
channel.tap.2.delay_ns = 3
channel.tap.2.gain_db = -10.5
pdp.method = fast
pdp.periods = 2
peaks.threshold_db = -10
peaks.min_separation_ns = 0.5
)";

// Synthetic co-/cross-polarized dataset: free-space co-polarized losses at
// 142 GHz and per-distance discrimination values averaging 27.28 dB
std::string fig9_text()
{
    const double offsets[5] = {27.28, 26.28, 28.28, 26.78, 27.78};
    const double distances[5] = {3.0, 3.5, 4.0, 4.5, 5.0};

    std::string text = "# fig9: cross-polarization discrimination over distance at 142 GHz\n"
                       "mode = analyze\n"
                       "xpd.d0_m = 1\n"
                       "xpd.fc_hz = 142e9\n";
    for (int i = 0; i < 5; ++i)
    {
        const double vv = analysis::fspl(distances[i], 142.0e9);
        const std::string p = "xpd.record." + std::to_string(i) + ".";
        text += p + "distance_m = " + format_number(distances[i]) + "\n";
        text += p + "pl_vv_db = " + format_number(vv) + "\n";
        text += p + "pl_vh_db = " + format_number(vv + offsets[i]) + "\n";
    }
    return text;
}

} // namespace

std::vector<std::string> preset_names() { return {"fig4", "fig5", "fig6_7", "fig9"}; }

std::string preset_config_text(const std::string &name)
{
    if (name == "fig4")
        return fig4_text;
    if (name == "fig5")
        return fig5_text;
    if (name == "fig6_7")
        return fig6_7_text;
    if (name == "fig9")
        return fig9_text();
    throw config_error("unknown preset '" + name + "' (available: fig4, fig5, fig6_7, fig9)");
}

Experiment preset_experiment(const std::string &name)
{
    if (name == "fig4")
        return Experiment::spectrum;
    if (name == "fig5")
        return Experiment::sync;
    if (name == "fig6_7")
        return Experiment::pdp;
    if (name == "fig9")
        return Experiment::xpd;
    throw config_error("unknown preset '" + name + "' (available: fig4, fig5, fig6_7, fig9)");
}

} // namespace sounderlab::cli
