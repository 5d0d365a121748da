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

#ifndef sounderlab_report_H
#define sounderlab_report_H

#include <filesystem>
#include <string>

#include <json.hpp>

#include "sounderlab/analysis.hpp"
#include "sounderlab/pnseq.hpp"
#include "sounderlab/sounder.hpp"

namespace sounderlab::cli
{

// Fixed numeric formatting of all text outputs: %.12g
std::string format_number(double v);

// Writers are atomic (tempfile + rename) and raise io_error with the target
// path on failure.

// One chip per line, values 0/1
void emit_chips(const pnseq::ChipSequence &seq, const std::filesystem::path &path);

// CSV with header time_s,power_linear,power_db
void emit_pdp_csv(const sounder::Pdp<double> &pdp, const std::filesystem::path &path);

// CSV with header freq_hz,power_db
void emit_spectrum_csv(const analysis::Psd &psd, const std::filesystem::path &path);

// Pretty-printed JSON report, trailing newline
void emit_report_json(const nlohmann::ordered_json &report, const std::filesystem::path &path);

} // namespace sounderlab::cli

#endif
