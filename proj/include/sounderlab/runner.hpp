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

#ifndef sounderlab_runner_H
#define sounderlab_runner_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "sounderlab/config.hpp"

namespace sounderlab::cli
{

struct RunOptions
{
    std::filesystem::path out_dir = ".";
    bool dilated = false;                      // keep profile CSVs on the observed-time axis
    std::optional<std::uint64_t> seed_override; // replaces channel.noise_seed
};

struct RunResult
{
    std::vector<std::filesystem::path> outputs; // files written, report last
    nlohmann::ordered_json report;              // same object as report.json
};

// Execute one experiment: runs the configured scenario deterministically and
// writes its artifacts (data files plus report.json) into options.out_dir.
RunResult run(const ScenarioConfig &config, const RunOptions &options);

} // namespace sounderlab::cli

#endif
