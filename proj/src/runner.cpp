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

#include "sounderlab/runner.hpp"

#include "sounderlab/analysis.hpp"
#include "sounderlab/channel.hpp"
#include "sounderlab/report.hpp"

#include <cmath>

namespace sounderlab::cli
{

namespace
{

namespace snd = sounderlab::sounder;
namespace chn = sounderlab::channel;
namespace ana = sounderlab::analysis;
using ordered_json = nlohmann::ordered_json;

ordered_json base_report(const ScenarioConfig &cfg)
{
    ordered_json j;
    j["experiment"] = experiment_name(cfg.experiment);
    ordered_json echo = ordered_json::object();
    for (const auto &[k, v] : cfg.echo)
        echo[k] = v;
    j["config_echo"] = echo;
    j["results"] = ordered_json::array();
    j["derived"] = ordered_json::object();
    return j;
}

// Steady-state received signal: the periodic TX stream is pushed through the
// channel and the leading periods covering the channel's largest shift are
// discarded, so the slice is exactly periodic with the TX sequence phase at
// its origin and delays preserved modulo one period.
snd::Waveform<double> simulate_received(const ScenarioConfig &cfg, Eigen::Index total,
                                        const std::optional<std::uint64_t> &seed_override)
{
    const pnseq::ChipSequence seq = pnseq::generate(cfg.sounder.pn);
    const snd::Waveform<double> wave = snd::upsample<double>(seq, cfg.sounder.oversample);
    const Eigen::Index period = wave.samples.size();

    Eigen::Index shift_max = 0;
    if (cfg.channel)
    {
        const double d_ns = cfg.channel->bulk_delay_ns + cfg.channel->taps.back().delay_ns;
        shift_max = static_cast<Eigen::Index>(std::llround(d_ns * 1.0e-9 * wave.sample_rate_hz));
    }
    const Eigen::Index warmup = (shift_max + period - 1) / period;

    const int reps = static_cast<int>((warmup * period + total + period - 1) / period);
    const snd::Waveform<double> tx = snd::repeat(wave, reps);

    snd::Waveform<double> rx = tx;
    if (cfg.channel)
    {
        chn::ChannelModel ch = *cfg.channel;
        if (seed_override)
            ch.noise_seed = *seed_override;
        rx = chn::apply_channel(tx, ch);
    }

    snd::Waveform<double> out;
    out.sample_rate_hz = rx.sample_rate_hz;
    out.samples = rx.samples.segment(warmup * period, total);
    return out;
}

RunResult run_sequence(const ScenarioConfig &cfg, const RunOptions &opt)
{
    const pnseq::ChipSequence seq = pnseq::generate(cfg.sounder.pn);
    const pnseq::RunLengthStats runs = pnseq::run_length_stats(seq);

    std::size_t ones = 0;
    for (std::uint8_t c : seq.chips)
        ones += c;

    RunResult res;
    res.report = base_report(cfg);
    auto &derived = res.report["derived"];
    derived["length"] = seq.length();
    derived["ones"] = ones;
    derived["zeros"] = seq.length() - ones;
    derived["total_runs"] = runs.total_runs();
    derived["maximal"] = pnseq::validate_maximal(seq.config.taps, seq.config.n_stages);
    derived["chip_rate_hz"] = seq.config.chip_rate_hz;

    const auto chips_path = opt.out_dir / "chips.txt";
    emit_chips(seq, chips_path);
    res.outputs.push_back(chips_path);
    return res;
}

RunResult run_spectrum(const ScenarioConfig &cfg, const RunOptions &opt)
{
    const pnseq::ChipSequence seq = pnseq::generate(cfg.sounder.pn);
    const snd::Waveform<double> wave = snd::upsample<double>(seq, cfg.sounder.oversample);
    const snd::Waveform<double> stream = snd::repeat(wave, cfg.spectrum_periods);

    const double resolution = cfg.spectrum_resolution_hz > 0.0
                                  ? cfg.spectrum_resolution_hz
                                  : wave.sample_rate_hz / static_cast<double>(wave.samples.size());
    const ana::Psd psd = ana::power_spectrum(stream, resolution);
    const ana::NullSidelobe ns = ana::find_null_and_sidelobe(psd);

    RunResult res;
    res.report = base_report(cfg);
    auto &derived = res.report["derived"];
    derived["chip_rate_hz"] = cfg.sounder.alpha_hz;
    derived["resolution_hz"] = psd.resolution_hz;
    derived["segments"] = psd.segments;
    derived["first_null_hz"] = ns.first_null_hz;
    derived["sidelobe_db"] = ns.sidelobe_db;
    derived["null_to_null_bandwidth_hz"] = 2.0 * ns.first_null_hz;

    const auto csv_path = opt.out_dir / "spectrum.csv";
    emit_spectrum_csv(psd, csv_path);
    res.outputs.push_back(csv_path);
    return res;
}

RunResult run_sync(const ScenarioConfig &cfg, const RunOptions &opt)
{
    const pnseq::ChipSequence seq = pnseq::generate(cfg.sounder.pn);
    const double gamma = cfg.sounder.gamma();
    const auto t_sync_samples = static_cast<Eigen::Index>(
        std::llround(static_cast<double>(seq.length()) * cfg.sounder.oversample * gamma));
    const Eigen::Index total = (cfg.sync_periods + 1) * t_sync_samples;

    const snd::Waveform<double> rx = simulate_received(cfg, total, opt.seed_override);
    const snd::Pdp<double> trace = snd::sliding_correlate_direct<double>(rx, cfg.sounder);

    // The pulses at both ends sit inside the filter margins; half a period is
    // trimmed on each side so every remaining pulse is interior
    const Eigen::Index trim = t_sync_samples / 2;
    snd::Pdp<double> windowed;
    windowed.powers = trace.powers.segment(trim, total - 2 * trim);
    windowed.time_step_s = trace.time_step_s;
    windowed.gamma = trace.gamma;
    windowed.dilated = true;

    const snd::SyncInfo sync = snd::detect_sync(windowed, cfg.sync_threshold);

    RunResult res;
    res.report = base_report(cfg);
    for (std::size_t i = 0; i < sync.pulse_times_s.size(); ++i)
    {
        ordered_json row;
        row["index"] = i;
        row["time_s"] = sync.pulse_times_s[i];
        res.report["results"].push_back(row);
    }
    auto &derived = res.report["derived"];
    derived["gamma"] = gamma;
    derived["t_sync_expected_s"] = snd::sync_period(seq.length(), cfg.sounder.alpha_hz, gamma);
    derived["t_sync_measured_s"] = sync.period_s;
    derived["pulse_count"] = sync.pulse_times_s.size();
    if (cfg.channel && cfg.channel->awgn_snr_db)
        derived["noise_seed"] = opt.seed_override.value_or(cfg.channel->noise_seed);

    const auto csv_path = opt.out_dir / "pdp.csv";
    emit_pdp_csv(opt.dilated ? windowed : snd::undilate(windowed), csv_path);
    res.outputs.push_back(csv_path);
    return res;
}

RunResult run_pdp(const ScenarioConfig &cfg, const RunOptions &opt)
{
    const pnseq::ChipSequence seq = pnseq::generate(cfg.sounder.pn);
    const double gamma = cfg.sounder.gamma();
    const double fs = cfg.sounder.sample_rate_hz();
    const Eigen::Index period = static_cast<Eigen::Index>(seq.length()) * cfg.sounder.oversample;

    snd::Pdp<double> profile; // dilated, one sync period
    if (cfg.pdp_method == "fast")
    {
        const snd::Waveform<double> rx = simulate_received(cfg, cfg.pdp_periods * period, opt.seed_override);
        profile = snd::sliding_correlate_fast<double>(rx, cfg.sounder);
    }
    else
    {
        // Direct two-clock simulation over two sync periods, resampled onto
        // the delay grid. One delay bin spans gamma trace samples; the bin
        // takes the strongest sample of its span, which rides out the small
        // apex wobble left by the dithered replica chip edges. Bins whose
        // span touches the filter margin use the copy one sync period later.
        const auto t_sync_samples =
            static_cast<Eigen::Index>(std::llround(static_cast<double>(period) * gamma));
        const Eigen::Index total = 2 * t_sync_samples;
        const snd::Waveform<double> rx = simulate_received(cfg, total, opt.seed_override);
        const snd::Pdp<double> trace = snd::sliding_correlate_direct<double>(rx, cfg.sounder);

        auto w = static_cast<Eigen::Index>(std::llround(gamma * cfg.sounder.oversample));
        const Eigen::Index margin = w / 2 + 1;
        const auto half = static_cast<Eigen::Index>(gamma / 2.0);
        profile.powers.resize(period);
        for (Eigen::Index k = 0; k < period; ++k)
        {
            auto i = static_cast<Eigen::Index>(std::llround(gamma * static_cast<double>(k)));
            if (i - half < margin)
                i += t_sync_samples;
            profile.powers[k] = trace.powers.segment(i - half, 2 * half + 1).maxCoeff();
        }
        profile.time_step_s = gamma / fs;
        profile.gamma = gamma;
        profile.dilated = true;
    }

    const snd::Pdp<double> delay_profile = snd::undilate(profile);
    const double min_sep_ns =
        cfg.peaks_min_separation_ns > 0.0 ? cfg.peaks_min_separation_ns : 0.5 / cfg.sounder.alpha_hz * 1.0e9;
    const std::vector<ana::MultipathEstimate> peaks =
        ana::detect_peaks(delay_profile, cfg.peaks_threshold_db, min_sep_ns);

    RunResult res;
    res.report = base_report(cfg);
    for (const ana::MultipathEstimate &p : peaks)
    {
        ordered_json row;
        row["delay_ns"] = p.delay_ns;
        row["relative_power_db"] = p.relative_power_db;
        res.report["results"].push_back(row);
    }
    auto &derived = res.report["derived"];
    derived["gamma"] = gamma;
    derived["t_sync_s"] = snd::sync_period(seq.length(), cfg.sounder.alpha_hz, gamma);
    derived["method"] = cfg.pdp_method;
    derived["peaks_threshold_db"] = cfg.peaks_threshold_db;
    derived["peaks_min_separation_ns"] = min_sep_ns;
    derived["peak_count"] = peaks.size();
    derived["first_peak_delay_ns"] = peaks.front().delay_ns;
    if (cfg.channel && cfg.channel->awgn_snr_db)
        derived["noise_seed"] = opt.seed_override.value_or(cfg.channel->noise_seed);

    const auto csv_path = opt.out_dir / "pdp.csv";
    emit_pdp_csv(opt.dilated ? profile : delay_profile, csv_path);
    res.outputs.push_back(csv_path);
    return res;
}

RunResult run_xpd(const ScenarioConfig &cfg, const RunOptions &)
{
    const ana::XpdStats stats = ana::xpd_stats(cfg.xpd_records);
    std::vector<std::pair<double, double>> vv;
    vv.reserve(cfg.xpd_records.size());
    for (const ana::XpdRecord &r : cfg.xpd_records)
        vv.emplace_back(r.distance_m, r.pl_vv_db);
    const ana::PleFit fit = ana::fit_ple(vv, cfg.xpd_d0_m, cfg.xpd_fc_hz);

    RunResult res;
    res.report = base_report(cfg);
    for (const ana::XpdRecord &r : cfg.xpd_records)
    {
        ordered_json row;
        row["distance_m"] = r.distance_m;
        row["pl_vv_db"] = r.pl_vv_db;
        row["pl_vh_db"] = r.pl_vh_db;
        row["xpd_db"] = ana::xpd(r);
        res.report["results"].push_back(row);
    }
    auto &derived = res.report["derived"];
    derived["d0_m"] = cfg.xpd_d0_m;
    derived["fc_hz"] = cfg.xpd_fc_hz;
    derived["fspl_d0_db"] = ana::fspl(cfg.xpd_d0_m, cfg.xpd_fc_hz);
    derived["ple"] = fit.ple;
    derived["rmse_db"] = fit.rmse_db;
    derived["xpd_mean_db"] = stats.mean_db;
    derived["xpd_std_db"] = stats.std_db;
    return res;
}

RunResult run_linearity(const ScenarioConfig &cfg, const RunOptions &)
{
    const ana::LinearityResult lin = ana::linearity_check(cfg.linearity_sweep);

    RunResult res;
    res.report = base_report(cfg);
    for (const auto &[att, pwr] : cfg.linearity_sweep)
    {
        ordered_json row;
        row["attenuation_db"] = att;
        row["measured_power_dbm"] = pwr;
        res.report["results"].push_back(row);
    }
    auto &derived = res.report["derived"];
    derived["slope"] = lin.slope;
    derived["max_deviation_db"] = lin.max_deviation_db;
    derived["linear"] = lin.linear;
    return res;
}

} // namespace

RunResult run(const ScenarioConfig &config, const RunOptions &options)
{
    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    if (ec)
        throw io_error("cannot create output directory '" + options.out_dir.string() + "': " + ec.message());

    RunResult res;
    switch (config.experiment)
    {
    case Experiment::sequence:
        res = run_sequence(config, options);
        break;
    case Experiment::spectrum:
        res = run_spectrum(config, options);
        break;
    case Experiment::sync:
        res = run_sync(config, options);
        break;
    case Experiment::pdp:
        res = run_pdp(config, options);
        break;
    case Experiment::xpd:
        res = run_xpd(config, options);
        break;
    case Experiment::linearity:
        res = run_linearity(config, options);
        break;
    }

    const auto report_path = options.out_dir / "report.json";
    emit_report_json(res.report, report_path);
    res.outputs.push_back(report_path);
    return res;
}

} // namespace sounderlab::cli
