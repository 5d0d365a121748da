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

#ifndef sounderlab_sounder_H
#define sounderlab_sounder_H

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "sounderlab/pnseq.hpp"

namespace sounderlab::sounder
{

template <typename Scalar>
using RealVector = Eigen::Vector<Scalar, Eigen::Dynamic>;

template <typename Scalar>
using ComplexVector = Eigen::Vector<std::complex<Scalar>, Eigen::Dynamic>;

// Uniformly sampled complex baseband signal; real signals carry zero imaginary part
template <typename Scalar = double>
struct Waveform
{
    ComplexVector<Scalar> samples;
    double sample_rate_hz = 0.0;

    Eigen::Index size() const { return samples.size(); }
};

// Power-vs-time profile. On the dilated axis, time_step_s counts observed
// correlator seconds; undilated profiles count true propagation delay.
template <typename Scalar = double>
struct Pdp
{
    RealVector<Scalar> powers;// Linear power per time bin, >= 0
    double time_step_s = 0.0; // Spacing of the time bins
    double gamma = 1.0;       // Slide factor in effect
    bool dilated = false;     // true = observed-time axis, false = true-delay axis
};

// Detected sync pulse train
struct SyncInfo
{
    double period_s = 0.0;             // Measured mean pulse spacing
    std::vector<double> pulse_times_s; // Detected pulse instants
};

// Slide factor gamma = alpha / (alpha - beta)
inline double slide_factor(double alpha_hz, double beta_hz)
{
    if (!(alpha_hz > 0.0))
        throw std::invalid_argument("slide_factor: alpha_hz must be positive");
    if (!(beta_hz > 0.0) || !(beta_hz < alpha_hz))
        throw std::invalid_argument("slide_factor: beta_hz must satisfy 0 < beta < alpha");
    return alpha_hz / (alpha_hz - beta_hz);
}

// Sync pulse period: one PN period dilated by gamma, (pn_length / alpha) * gamma
inline double sync_period(std::size_t pn_length, double alpha_hz, double gamma)
{
    if (pn_length < 1)
        throw std::invalid_argument("sync_period: pn_length must be >= 1");
    if (!(alpha_hz > 0.0))
        throw std::invalid_argument("sync_period: alpha_hz must be positive");
    if (!(gamma >= 1.0))
        throw std::invalid_argument("sync_period: gamma must be >= 1");
    return static_cast<double>(pn_length) / alpha_hz * gamma;
}

// Settings of one sliding correlator: fast TX clock alpha, slow RX replica
// clock beta, the PN source, and the output low-pass stage. The low-pass
// filter is realized as a moving average spanning one dilated chip duration
// (gamma * oversample input samples); lpf_cutoff_hz records the nominal
// hardware cutoff for reporting.
struct SounderConfig
{
    double alpha_hz = 1.0e9;
    double beta_hz = 999.95e6;
    pnseq::PnConfig pn;
    int oversample = 10;
    double lpf_cutoff_hz = 100.0e3;

    double gamma() const { return slide_factor(alpha_hz, beta_hz); }
    double sample_rate_hz() const { return alpha_hz * oversample; }

    void validate() const
    {
        pn.validate();
        if (!(alpha_hz > 0.0) || !(beta_hz > 0.0) || !(beta_hz < alpha_hz))
            throw std::invalid_argument("SounderConfig: need 0 < beta_hz < alpha_hz");
        if (oversample < 2)
            throw std::invalid_argument("SounderConfig: oversample must be >= 2");
        if (!(lpf_cutoff_hz > 0.0))
            throw std::invalid_argument("SounderConfig: lpf_cutoff_hz must be positive");
        if (std::abs(pn.chip_rate_hz - alpha_hz) > 1.0e-9 * alpha_hz)
            throw std::invalid_argument("SounderConfig: pn.chip_rate_hz must equal alpha_hz");
    }
};

// Rectangular pulse shaping: each bipolar chip repeated `oversample` times
template <typename Scalar = double>
Waveform<Scalar> upsample(const pnseq::ChipSequence &seq, int oversample)
{
    if (oversample < 2)
        throw std::invalid_argument("upsample: oversample must be >= 2");
    if (seq.chips.empty())
        throw std::invalid_argument("upsample: empty chip sequence");

    Waveform<Scalar> w;
    w.sample_rate_hz = seq.config.chip_rate_hz * oversample;
    w.samples.resize(static_cast<Eigen::Index>(seq.chips.size()) * oversample);
    for (std::size_t i = 0; i < seq.chips.size(); ++i)
    {
        const std::complex<Scalar> v(seq.chips[i] ? Scalar(1) : Scalar(-1), Scalar(0));
        for (int j = 0; j < oversample; ++j)
            w.samples[static_cast<Eigen::Index>(i * oversample + j)] = v;
    }
    return w;
}

// Concatenate `count` copies of a waveform (periodic TX stream)
template <typename Scalar>
Waveform<Scalar> repeat(const Waveform<Scalar> &w, int count)
{
    if (count < 1)
        throw std::invalid_argument("repeat: count must be >= 1");
    Waveform<Scalar> out;
    out.sample_rate_hz = w.sample_rate_hz;
    out.samples.resize(w.samples.size() * count);
    for (int k = 0; k < count; ++k)
        out.samples.segment(k * w.samples.size(), w.samples.size()) = w.samples;
    return out;
}

// Direct correlation of two bipolar sequences at all circular lags of one
// period: R_k = <s shifted left by k, r>, output power = R_k^2. The reference
// r may be shorter than s; both must share the sample rate given here.
template <typename Scalar = double>
Pdp<Scalar> discrete_correlation(const RealVector<Scalar> &s_bar, const RealVector<Scalar> &r_bar,
                                 double sample_rate_hz = 1.0)
{
    const Eigen::Index L = s_bar.size();
    const Eigen::Index m = r_bar.size();
    if (L == 0 || m == 0)
        throw std::invalid_argument("discrete_correlation: empty input");
    if (m > L)
        throw std::invalid_argument("discrete_correlation: reference longer than signal");
    if (!(sample_rate_hz > 0.0))
        throw std::invalid_argument("discrete_correlation: sample_rate_hz must be positive");

    Pdp<Scalar> pdp;
    pdp.powers.resize(L);
    pdp.time_step_s = 1.0 / sample_rate_hz;
    pdp.gamma = 1.0;
    pdp.dilated = false;
    for (Eigen::Index k = 0; k < L; ++k)
    {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < m; ++i)
            acc += static_cast<double>(s_bar[(i + k) % L]) * static_cast<double>(r_bar[i]);
        pdp.powers[k] = static_cast<Scalar>(acc * acc);
    }
    return pdp;
}

namespace detail
{

// Shared precondition checks for both correlator implementations
template <typename Scalar>
void check_correlate_inputs(const Waveform<Scalar> &received, const SounderConfig &config,
                            const pnseq::ChipSequence &seq)
{
    if (received.samples.size() == 0)
        throw std::invalid_argument("sliding correlator: empty received waveform");
    const double fs = config.sample_rate_hz();
    if (std::abs(received.sample_rate_hz - fs) > 1.0e-9 * fs)
        throw std::invalid_argument("sliding correlator: received sample rate must equal alpha_hz * oversample");

    // Slip per PN period on the sample grid must reach one sample, or the two
    // clocks are indistinguishable at this resolution
    const double slip = static_cast<double>(seq.length()) * config.oversample / config.gamma();
    if (slip < 1.0)
        throw std::runtime_error("sliding correlator: sample grid too coarse to resolve the clock offset "
                                 "(slip per period < 1 sample); raise oversample or reduce gamma");
}

} // namespace detail

// Physical simulation of the sliding correlator: the received signal is
// multiplied by the slow replica clocked at beta_hz on the common sample grid,
// then low-pass filtered by a centered moving average spanning one dilated
// chip. Slow chip k occupies grid samples [round(k fs/beta), round((k+1) fs/beta)),
// so chip durations dither by one sample around fs/beta and the long-run
// replica rate is exactly beta. Samples where the full averaging window does
// not fit are set to zero. This is the reference implementation, intended for
// small sequence lengths and slide factors.
template <typename Scalar = double>
Pdp<Scalar> sliding_correlate_direct(const Waveform<Scalar> &received, const SounderConfig &config)
{
    config.validate();
    const pnseq::ChipSequence seq = pnseq::generate(config.pn);
    detail::check_correlate_inputs(received, config, seq);

    const Eigen::Index n = received.samples.size();
    const double fs = config.sample_rate_hz();
    const double slow_chip = fs / config.beta_hz; // samples per slow chip
    const Eigen::Index L = static_cast<Eigen::Index>(seq.length());

    // Replica-mixed signal
    ComplexVector<double> product(n);
    for (Eigen::Index k = 0;; ++k)
    {
        const auto s0 = static_cast<Eigen::Index>(std::llround(static_cast<double>(k) * slow_chip));
        if (s0 >= n)
            break;
        const auto s1 = std::min<Eigen::Index>(n, static_cast<Eigen::Index>(std::llround((k + 1.0) * slow_chip)));
        const double chip = seq.chips[static_cast<std::size_t>(k % L)] ? 1.0 : -1.0;
        for (Eigen::Index i = s0; i < s1; ++i)
            product[i] = chip * std::complex<double>(received.samples[i]);
    }

    // Centered moving average over one dilated chip (odd window width)
    Eigen::Index w = static_cast<Eigen::Index>(std::llround(config.gamma() * config.oversample));
    if (w < 1)
        w = 1;
    if (w % 2 == 0)
        ++w;
    const Eigen::Index half = w / 2;

    std::vector<std::complex<double>> csum(static_cast<std::size_t>(n) + 1, {0.0, 0.0});
    for (Eigen::Index i = 0; i < n; ++i)
        csum[static_cast<std::size_t>(i) + 1] = csum[static_cast<std::size_t>(i)] + product[i];

    Pdp<Scalar> pdp;
    pdp.powers = RealVector<Scalar>::Zero(n);
    pdp.time_step_s = 1.0 / fs;
    pdp.gamma = config.gamma();
    pdp.dilated = true;
    for (Eigen::Index i = half; i + half < n; ++i)
    {
        const std::complex<double> acc =
            csum[static_cast<std::size_t>(i + half) + 1] - csum[static_cast<std::size_t>(i - half)];
        pdp.powers[i] = static_cast<Scalar>(std::norm(acc / static_cast<double>(w)));
    }
    return pdp;
}

// Equivalent correlator without the two-clock simulation: whole replica
// periods of the received signal are folded (averaged), circularly
// cross-correlated against one period of the replica on the fast grid, and the
// delay axis is mapped to observed time through gamma. Powers are normalized
// so a perfectly aligned clean peak equals 1. Output covers exactly one sync
// period. Intended for large sequence lengths and slide factors.
template <typename Scalar = double>
Pdp<Scalar> sliding_correlate_fast(const Waveform<Scalar> &received, const SounderConfig &config)
{
    config.validate();
    const pnseq::ChipSequence seq = pnseq::generate(config.pn);
    detail::check_correlate_inputs(received, config, seq);

    const Eigen::Index P = static_cast<Eigen::Index>(seq.length()) * config.oversample;
    const Eigen::Index periods = received.samples.size() / P;
    if (periods < 1)
        throw std::runtime_error("sliding correlator: received waveform shorter than one replica period");

    ComplexVector<Scalar> folded = ComplexVector<Scalar>::Zero(P);
    for (Eigen::Index k = 0; k < periods; ++k)
        folded += received.samples.segment(k * P, P);
    folded /= static_cast<Scalar>(periods);

    const Waveform<Scalar> ref = upsample<Scalar>(seq, config.oversample);

    Eigen::FFT<Scalar> fft;
    ComplexVector<Scalar> fr(P), ff(P), corr(P);
    fft.fwd(ff, folded);
    fft.fwd(fr, ref.samples);
    ComplexVector<Scalar> spec = ff.cwiseProduct(fr.conjugate());
    fft.inv(corr, spec);

    Pdp<Scalar> pdp;
    pdp.powers.resize(P);
    pdp.time_step_s = config.gamma() / config.sample_rate_hz();
    pdp.gamma = config.gamma();
    pdp.dilated = true;
    const Scalar scale = Scalar(1) / static_cast<Scalar>(P);
    for (Eigen::Index i = 0; i < P; ++i)
        pdp.powers[i] = std::norm(corr[i] * scale);
    return pdp;
}

// Locate the sync pulse train: one pulse per excursion of the profile above
// threshold_fraction of the global maximum, timed at the excursion's strongest
// sample. An excursion ends only once the power falls below half the entry
// level; the hysteresis keeps pattern ripple on the pulse shoulders (inherent
// to short sequences) from splitting one pulse into several. period_s is the
// mean spacing of consecutive pulses.
template <typename Scalar>
SyncInfo detect_sync(const Pdp<Scalar> &pdp, double threshold_fraction)
{
    if (!(threshold_fraction > 0.0) || !(threshold_fraction < 1.0))
        throw std::invalid_argument("detect_sync: threshold_fraction must be in (0, 1)");
    if (pdp.powers.size() == 0)
        throw std::invalid_argument("detect_sync: empty profile");

    const Scalar peak = pdp.powers.maxCoeff();
    if (!(peak > Scalar(0)))
        throw std::runtime_error("detect_sync: no pulses (profile has no positive power)");
    const Scalar level = static_cast<Scalar>(threshold_fraction) * peak;
    const Scalar exit_level = level / Scalar(2);

    SyncInfo info;
    const Eigen::Index n = pdp.powers.size();
    Eigen::Index i = 0;
    while (i < n)
    {
        if (pdp.powers[i] >= level)
        {
            Eigen::Index best = i;
            while (i < n && pdp.powers[i] >= exit_level)
            {
                if (pdp.powers[i] > pdp.powers[best])
                    best = i;
                ++i;
            }
            info.pulse_times_s.push_back(static_cast<double>(best) * pdp.time_step_s);
        }
        else
            ++i;
    }

    if (info.pulse_times_s.size() < 2)
        throw std::runtime_error("detect_sync: fewer than 2 sync pulses found; increase the simulated span "
                                 "or lower the threshold");

    double acc = 0.0;
    for (std::size_t k = 1; k < info.pulse_times_s.size(); ++k)
        acc += info.pulse_times_s[k] - info.pulse_times_s[k - 1];
    info.period_s = acc / static_cast<double>(info.pulse_times_s.size() - 1);
    return info;
}

// Rescale the observed-time axis back to true propagation delay
template <typename Scalar>
Pdp<Scalar> undilate(const Pdp<Scalar> &pdp)
{
    if (!pdp.dilated)
        throw std::invalid_argument("undilate: profile is already on the true-delay axis");
    Pdp<Scalar> out = pdp;
    out.time_step_s = pdp.time_step_s / pdp.gamma;
    out.dilated = false;
    return out;
}

} // namespace sounderlab::sounder

#endif
