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

#ifndef sounderlab_config_H
#define sounderlab_config_H

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sounderlab/analysis.hpp"
#include "sounderlab/channel.hpp"
#include "sounderlab/sounder.hpp"

namespace sounderlab::cli
{

enum class Experiment
{
    sequence,
    spectrum,
    sync,
    pdp,
    xpd,
    linearity
};

enum class Mode
{
    tx,
    rx,
    analyze
};

// Configuration problems: unparseable text, unknown keys, invalid combinations
struct config_error : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

// Filesystem problems while reading configs or writing outputs
struct io_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

Experiment experiment_from_name(const std::string &name);
std::string experiment_name(Experiment experiment);
Mode mode_from_name(const std::string &name);
std::string mode_name(Mode mode);

// The operating side each experiment belongs to
Mode default_mode(Experiment experiment);

// One fully parsed scenario. Fields beyond the embedded module configs carry
// experiment-specific knobs with their config-file defaults.
struct ScenarioConfig
{
    Experiment experiment = Experiment::pdp;
    Mode mode = Mode::rx;

    sounderlab::sounder::SounderConfig sounder;
    std::optional<sounderlab::channel::ChannelModel> channel;

    double spectrum_resolution_hz = 0.0; // 0 = one PN period per segment
    int spectrum_periods = 2;

    double sync_threshold = 0.5;
    int sync_periods = 3;

    std::string pdp_method = "fast"; // "fast" or "direct"
    int pdp_periods = 2;
    double peaks_threshold_db = -10.0;
    double peaks_min_separation_ns = 0.0; // 0 = half a chip

    double xpd_d0_m = 1.0;
    double xpd_fc_hz = 142.0e9;
    std::vector<analysis::XpdRecord> xpd_records;

    std::vector<std::pair<double, double>> linearity_sweep; // (attenuation_db, measured_power_dbm)

    std::vector<std::pair<std::string, std::string>> echo; // normalized key/value pairs in file order
};

// Parse flat `section.key = value` text for the given experiment. Unknown or
// inapplicable keys, bad values, and invalid combinations raise config_error
// with origin:line diagnostics.
ScenarioConfig parse_scenario(const std::string &text, Experiment experiment,
                              const std::string &origin = "<config>");

// Read and parse a config file; unreadable files raise io_error
ScenarioConfig load_scenario(const std::filesystem::path &file, Experiment experiment);

} // namespace sounderlab::cli

#endif
