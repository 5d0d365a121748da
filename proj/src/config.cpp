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

#include "sounderlab/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace sounderlab::cli
{

Experiment experiment_from_name(const std::string &name)
{
    if (name == "sequence")
        return Experiment::sequence;
    if (name == "spectrum")
        return Experiment::spectrum;
    if (name == "sync")
        return Experiment::sync;
    if (name == "pdp")
        return Experiment::pdp;
    if (name == "xpd")
        return Experiment::xpd;
    if (name == "linearity")
        return Experiment::linearity;
    throw config_error("unknown experiment '" + name +
                       "' (expected sequence, spectrum, sync, pdp, xpd or linearity)");
}

std::string experiment_name(Experiment experiment)
{
    switch (experiment)
    {
    case Experiment::sequence:
        return "sequence";
    case Experiment::spectrum:
        return "spectrum";
    case Experiment::sync:
        return "sync";
    case Experiment::pdp:
        return "pdp";
    case Experiment::xpd:
        return "xpd";
    case Experiment::linearity:
        return "linearity";
    }
    return "?";
}

Mode mode_from_name(const std::string &name)
{
    if (name == "tx")
        return Mode::tx;
    if (name == "rx")
        return Mode::rx;
    if (name == "analyze")
        return Mode::analyze;
    throw config_error("unknown mode '" + name + "' (expected tx, rx or analyze)");
}

std::string mode_name(Mode mode)
{
    switch (mode)
    {
    case Mode::tx:
        return "tx";
    case Mode::rx:
        return "rx";
    case Mode::analyze:
        return "analyze";
    }
    return "?";
}

Mode default_mode(Experiment experiment)
{
    switch (experiment)
    {
    case Experiment::sequence:
    case Experiment::spectrum:
        return Mode::tx;
    case Experiment::sync:
    case Experiment::pdp:
        return Mode::rx;
    case Experiment::xpd:
    case Experiment::linearity:
        return Mode::analyze;
    }
    return Mode::rx;
}

namespace
{

struct Entry
{
    int line = 0;
    std::string key;
    std::string value;
    mutable bool used = false;
};

std::string trim(const std::string &s)
{
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// Flat key-value scanner with origin:line diagnostics and used-key tracking
class Entries
{
  public:
    Entries(const std::string &text, std::string origin) : origin_(std::move(origin))
    {
        std::istringstream in(text);
        std::string raw;
        int line = 0;
        while (std::getline(in, raw))
        {
            ++line;
            const std::size_t hash = raw.find('#');
            if (hash != std::string::npos)
                raw.erase(hash);
            const std::string stripped = trim(raw);
            if (stripped.empty())
                continue;
            const std::size_t eq = stripped.find('=');
            if (eq == std::string::npos)
                fail(line, "expected 'key = value'");
            const std::string key = trim(stripped.substr(0, eq));
            const std::string value = trim(stripped.substr(eq + 1));
            if (key.empty())
                fail(line, "empty key");
            if (value.empty())
                fail(line, "empty value for key '" + key + "'");
            if (find(key))
                fail(line, "duplicate key '" + key + "'");
            entries_.push_back(Entry{line, key, value});
        }
    }

    [[noreturn]] void fail(int line, const std::string &msg) const
    {
        throw config_error(origin_ + ":" + std::to_string(line) + ": " + msg);
    }

    const Entry *find(const std::string &key) const
    {
        for (const Entry &e : entries_)
            if (e.key == key)
            {
                e.used = true;
                return &e;
            }
        return nullptr;
    }

    bool has(const std::string &key) const { return find(key) != nullptr; }

    std::string get_string(const std::string &key, const std::string &fallback) const
    {
        const Entry *e = find(key);
        return e ? e->value : fallback;
    }

    double get_double(const std::string &key, double fallback) const
    {
        const Entry *e = find(key);
        return e ? to_double(*e) : fallback;
    }

    int get_int(const std::string &key, int fallback) const
    {
        const Entry *e = find(key);
        return e ? to_int(*e) : fallback;
    }

    double require_double(const std::string &key) const { return to_double(require(key)); }

    const Entry &require(const std::string &key) const
    {
        const Entry *e = find(key);
        if (!e)
            throw config_error(origin_ + ": missing required key '" + key + "'");
        return *e;
    }

    double to_double(const Entry &e) const
    {
        char *end = nullptr;
        const double v = std::strtod(e.value.c_str(), &end);
        if (end == e.value.c_str() || *end != '\0')
            fail(e.line, "key '" + e.key + "': '" + e.value + "' is not a number");
        return v;
    }

    int to_int(const Entry &e) const
    {
        char *end = nullptr;
        const long v = std::strtol(e.value.c_str(), &end, 10);
        if (end == e.value.c_str() || *end != '\0')
            fail(e.line, "key '" + e.key + "': '" + e.value + "' is not an integer");
        return static_cast<int>(v);
    }

    std::uint64_t to_u64(const Entry &e) const
    {
        char *end = nullptr;
        const unsigned long long v = std::strtoull(e.value.c_str(), &end, 0);
        if (end == e.value.c_str() || *end != '\0' || e.value[0] == '-')
            fail(e.line, "key '" + e.key + "': '" + e.value + "' is not an unsigned integer");
        return v;
    }

    // Indices i present as `prefix.i.suffix`; must be contiguous from 0
    std::vector<int> indexed(const std::string &prefix) const
    {
        std::set<int> seen;
        for (const Entry &e : entries_)
        {
            if (e.key.rfind(prefix, 0) != 0)
                continue;
            const std::string rest = e.key.substr(prefix.size());
            const std::size_t dot = rest.find('.');
            if (dot == std::string::npos || dot == 0)
                fail(e.line, "key '" + e.key + "': expected '" + prefix + "<index>.<field>'");
            char *end = nullptr;
            const std::string num = rest.substr(0, dot);
            const long idx = std::strtol(num.c_str(), &end, 10);
            if (end == num.c_str() || *end != '\0' || idx < 0)
                fail(e.line, "key '" + e.key + "': bad index '" + num + "'");
            seen.insert(static_cast<int>(idx));
        }
        std::vector<int> out(seen.begin(), seen.end());
        for (std::size_t i = 0; i < out.size(); ++i)
            if (out[i] != static_cast<int>(i))
                throw config_error(origin_ + ": indices under '" + prefix + "' must be contiguous from 0");
        return out;
    }

    void check_all_used(const std::string &experiment) const
    {
        for (const Entry &e : entries_)
            if (!e.used)
                fail(e.line, "key '" + e.key + "' is not recognized for experiment '" + experiment + "'");
    }

    std::vector<std::pair<std::string, std::string>> echo() const
    {
        std::vector<std::pair<std::string, std::string>> out;
        out.reserve(entries_.size());
        for (const Entry &e : entries_)
            out.emplace_back(e.key, e.value);
        return out;
    }

    const std::string &origin() const { return origin_; }

  private:
    std::vector<Entry> entries_;
    std::string origin_;
};

bool uses_pn(Experiment e)
{
    return e == Experiment::sequence || e == Experiment::spectrum || e == Experiment::sync ||
           e == Experiment::pdp;
}

bool uses_slow_clock(Experiment e) { return e == Experiment::sync || e == Experiment::pdp; }

void read_pn_and_sounder(const Entries &in, Experiment experiment, ScenarioConfig &cfg)
{
    const Entry *s_word = in.find("pn.s_word");
    const Entry *n_stages = in.find("pn.n_stages");
    if (s_word && n_stages)
        in.fail(n_stages->line, "give either pn.s_word or pn.n_stages, not both");
    int n = 12;
    if (s_word)
    {
        try
        {
            n = pnseq::stages_from_length_word(s_word->value);
        }
        catch (const std::invalid_argument &ex)
        {
            in.fail(s_word->line, ex.what());
        }
    }
    else if (n_stages)
        n = in.to_int(*n_stages);

    const Entry *sw_word = in.find("pn.sw_word");
    const Entry *taps = in.find("pn.taps");
    if (sw_word && taps)
        in.fail(taps->line, "give either pn.sw_word or pn.taps, not both");

    pnseq::PnConfig &pn = cfg.sounder.pn;
    pn.n_stages = n;
    if (sw_word)
    {
        try
        {
            pn.taps = pnseq::taps_from_switch_word(sw_word->value, n);
        }
        catch (const std::invalid_argument &ex)
        {
            in.fail(sw_word->line, ex.what());
        }
    }
    else if (taps)
    {
        pn.taps.clear();
        std::istringstream ts(taps->value);
        std::string item;
        while (std::getline(ts, item, ','))
        {
            item = trim(item);
            char *end = nullptr;
            const long v = std::strtol(item.c_str(), &end, 10);
            if (item.empty() || end == item.c_str() || *end != '\0')
                in.fail(taps->line, "pn.taps: '" + item + "' is not a stage number");
            pn.taps.push_back(static_cast<int>(v));
        }
    }
    else if (n >= 5 && n <= 12)
        pn.taps = pnseq::default_taps(n);

    const Entry *seed = in.find("pn.seed");
    pn.seed = seed ? static_cast<std::uint32_t>(in.to_u64(*seed)) : pnseq::all_ones_seed(std::clamp(n, 1, 31));

    cfg.sounder.alpha_hz = in.get_double("sounder.alpha_hz", 1.0e9);
    cfg.sounder.oversample = in.get_int("sounder.oversample", 10);
    cfg.sounder.lpf_cutoff_hz = in.get_double("sounder.lpf_cutoff_hz", 100.0e3);
    pn.chip_rate_hz = cfg.sounder.alpha_hz;

    if (uses_slow_clock(experiment))
    {
        cfg.sounder.beta_hz = in.get_double("sounder.beta_hz", 999.95e6);
        cfg.sounder.validate();
    }
    else
    {
        pn.validate();
        if (!(cfg.sounder.alpha_hz > 0.0))
            throw config_error(in.origin() + ": sounder.alpha_hz must be positive");
        if (cfg.sounder.oversample < 2)
            throw config_error(in.origin() + ": sounder.oversample must be >= 2");
        if (!(cfg.sounder.lpf_cutoff_hz > 0.0))
            throw config_error(in.origin() + ": sounder.lpf_cutoff_hz must be positive");
        // keep the unused slow clock consistent with the struct invariant
        cfg.sounder.beta_hz = cfg.sounder.alpha_hz * 0.5;
    }
}

void read_channel(const Entries &in, ScenarioConfig &cfg)
{
    const std::vector<int> idx = in.indexed("channel.tap.");
    const bool any = !idx.empty() || in.has("channel.bulk_delay_ns") || in.has("channel.snr_db") ||
                     in.has("channel.noise_seed");
    if (!any)
        return;

    channel::ChannelModel ch;
    ch.bulk_delay_ns = in.get_double("channel.bulk_delay_ns", 0.0);
    if (idx.empty())
        ch.taps = {channel::MultipathTap{}};
    else
        for (int i : idx)
        {
            const std::string p = "channel.tap." + std::to_string(i) + ".";
            channel::MultipathTap tap;
            tap.delay_ns = in.require_double(p + "delay_ns");
            tap.gain_db = in.require_double(p + "gain_db");
            tap.phase_rad = in.get_double(p + "phase_rad", 0.0);
            ch.taps.push_back(tap);
        }
    if (const Entry *snr = in.find("channel.snr_db"))
        ch.awgn_snr_db = in.to_double(*snr);
    if (const Entry *seed = in.find("channel.noise_seed"))
        ch.noise_seed = in.to_u64(*seed);

    try
    {
        ch.validate();
    }
    catch (const std::invalid_argument &ex)
    {
        throw config_error(in.origin() + ": " + ex.what());
    }
    cfg.channel = ch;
}

} // namespace

ScenarioConfig parse_scenario(const std::string &text, Experiment experiment, const std::string &origin)
{
    const Entries in(text, origin);

    ScenarioConfig cfg;
    cfg.experiment = experiment;
    cfg.mode = default_mode(experiment);
    if (const Entry *m = in.find("mode"))
    {
        Mode given = Mode::rx;
        try
        {
            given = mode_from_name(m->value);
        }
        catch (const config_error &ex)
        {
            in.fail(m->line, ex.what());
        }
        if (given != cfg.mode)
            in.fail(m->line, "experiment '" + experiment_name(experiment) + "' runs in mode '" +
                                 mode_name(cfg.mode) + "', not '" + m->value + "'");
    }

    if (uses_pn(experiment))
        read_pn_and_sounder(in, experiment, cfg);
    if (uses_slow_clock(experiment))
        read_channel(in, cfg);

    switch (experiment)
    {
    case Experiment::sequence:
        break;

    case Experiment::spectrum:
        cfg.spectrum_resolution_hz = in.get_double("spectrum.resolution_hz", 0.0);
        if (cfg.spectrum_resolution_hz < 0.0)
            throw config_error(origin + ": spectrum.resolution_hz must be >= 0 (0 = one PN period per segment)");
        cfg.spectrum_periods = in.get_int("spectrum.periods", 2);
        if (cfg.spectrum_periods < 1)
            throw config_error(origin + ": spectrum.periods must be >= 1");
        break;

    case Experiment::sync:
        cfg.sync_threshold = in.get_double("sync.threshold", 0.5);
        if (!(cfg.sync_threshold > 0.0) || !(cfg.sync_threshold < 1.0))
            throw config_error(origin + ": sync.threshold must be in (0, 1)");
        cfg.sync_periods = in.get_int("sync.periods", 3);
        if (cfg.sync_periods < 2)
            throw config_error(origin + ": sync.periods must be >= 2");
        break;

    case Experiment::pdp:
        cfg.pdp_method = in.get_string("pdp.method", "fast");
        if (cfg.pdp_method != "fast" && cfg.pdp_method != "direct")
            throw config_error(origin + ": pdp.method must be 'fast' or 'direct'");
        cfg.pdp_periods = in.get_int("pdp.periods", 2);
        if (cfg.pdp_periods < 1)
            throw config_error(origin + ": pdp.periods must be >= 1");
        cfg.peaks_threshold_db = in.get_double("peaks.threshold_db", -10.0);
        if (!(cfg.peaks_threshold_db < 0.0))
            throw config_error(origin + ": peaks.threshold_db must be negative");
        cfg.peaks_min_separation_ns = in.get_double("peaks.min_separation_ns", 0.0);
        if (cfg.peaks_min_separation_ns < 0.0)
            throw config_error(origin + ": peaks.min_separation_ns must be >= 0 (0 = half a chip)");
        break;

    case Experiment::xpd:
    {
        cfg.xpd_d0_m = in.get_double("xpd.d0_m", 1.0);
        cfg.xpd_fc_hz = in.get_double("xpd.fc_hz", 142.0e9);
        if (!(cfg.xpd_d0_m > 0.0) || !(cfg.xpd_fc_hz > 0.0))
            throw config_error(origin + ": xpd.d0_m and xpd.fc_hz must be positive");
        for (int i : in.indexed("xpd.record."))
        {
            const std::string p = "xpd.record." + std::to_string(i) + ".";
            analysis::XpdRecord rec;
            rec.distance_m = in.require_double(p + "distance_m");
            rec.pl_vv_db = in.require_double(p + "pl_vv_db");
            rec.pl_vh_db = in.require_double(p + "pl_vh_db");
            cfg.xpd_records.push_back(rec);
        }
        if (cfg.xpd_records.size() < 2)
            throw config_error(origin + ": xpd needs at least 2 records (xpd.record.<i>.*)");
        break;
    }

    case Experiment::linearity:
    {
        for (int i : in.indexed("linearity.point."))
        {
            const std::string p = "linearity.point." + std::to_string(i) + ".";
            cfg.linearity_sweep.emplace_back(in.require_double(p + "attenuation_db"),
                                             in.require_double(p + "measured_power_dbm"));
        }
        if (cfg.linearity_sweep.size() < 3)
            throw config_error(origin + ": linearity needs at least 3 points (linearity.point.<i>.*)");
        break;
    }
    }

    in.check_all_used(experiment_name(experiment));
    cfg.echo = in.echo();
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path &file, Experiment experiment)
{
    std::ifstream in(file);
    if (!in)
        throw io_error("cannot read config file '" + file.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str(), experiment, file.string());
}

} // namespace sounderlab::cli
