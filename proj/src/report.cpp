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

#include "sounderlab/report.hpp"

#include "sounderlab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace sounderlab::cli
{

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

namespace
{

// Write the full content, then move it into place so partially written
// artifacts never appear under the final name
void write_atomic(const std::filesystem::path &path, const std::string &content)
{
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw io_error("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out)
            throw io_error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw io_error("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

} // namespace

void emit_chips(const pnseq::ChipSequence &seq, const std::filesystem::path &path)
{
    std::string content;
    content.reserve(seq.chips.size() * 2);
    for (std::uint8_t c : seq.chips)
    {
        content += c ? '1' : '0';
        content += '\n';
    }
    write_atomic(path, content);
}

void emit_pdp_csv(const sounder::Pdp<double> &pdp, const std::filesystem::path &path)
{
    std::string content = "time_s,power_linear,power_db\n";
    for (Eigen::Index i = 0; i < pdp.powers.size(); ++i)
    {
        const double p = pdp.powers[i];
        content += format_number(static_cast<double>(i) * pdp.time_step_s);
        content += ',';
        content += format_number(p);
        content += ',';
        content += format_number(10.0 * std::log10(p));
        content += '\n';
    }
    write_atomic(path, content);
}

void emit_spectrum_csv(const analysis::Psd &psd, const std::filesystem::path &path)
{
    std::string content = "freq_hz,power_db\n";
    for (Eigen::Index i = 0; i < psd.freq_hz.size(); ++i)
    {
        content += format_number(psd.freq_hz[i]);
        content += ',';
        content += format_number(psd.power_db[i]);
        content += '\n';
    }
    write_atomic(path, content);
}

void emit_report_json(const nlohmann::ordered_json &report, const std::filesystem::path &path)
{
    write_atomic(path, report.dump(2) + "\n");
}

} // namespace sounderlab::cli
