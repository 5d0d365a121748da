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

#ifndef sounderlab_presets_H
#define sounderlab_presets_H

#include <string>
#include <vector>

#include "sounderlab/config.hpp"

namespace sounderlab::cli
{

// Bundled scenario presets: fig4 (spectrum), fig5 (sync), fig6_7 (pdp),
// fig9 (xpd). Unknown names raise config_error.
std::vector<std::string> preset_names();
std::string preset_config_text(const std::string &name);
Experiment preset_experiment(const std::string &name);

} // namespace sounderlab::cli

#endif
