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

#ifndef sounderlab_channel_H
#define sounderlab_channel_H

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "sounderlab/sounder.hpp"

namespace sounderlab::channel
{

// One multipath component; delay is relative to the first (LOS) tap
struct MultipathTap
{
    double delay_ns = 0.0;  // Relative delay, >= 0
    double gain_db = 0.0;   // Attenuation, <= 0
    double phase_rad = 0.0; // Carrier phase rotation
};

// Static tap-delay-line channel with optional additive noise
struct ChannelModel
{
    double bulk_delay_ns = 0.0;         // Propagation delay of the first tap
    std::vector<MultipathTap> taps;     // Sorted by delay, first tap at 0
    std::optional<double> awgn_snr_db;  // Noise level relative to composite signal power
    std::uint64_t noise_seed = 1;       // RNG seed for the noise draw

    void validate() const
    {
        if (!(bulk_delay_ns >= 0.0))
            throw std::invalid_argument("ChannelModel: bulk_delay_ns must be >= 0");
        if (taps.empty())
            throw std::invalid_argument("ChannelModel: tap list must not be empty");
        if (taps.front().delay_ns != 0.0)
            throw std::invalid_argument("ChannelModel: first tap must have delay 0 (relative delays; "
                                        "use bulk_delay_ns for the common offset)");
        for (std::size_t i = 0; i < taps.size(); ++i)
        {
            if (!(taps[i].delay_ns >= 0.0))
                throw std::invalid_argument("ChannelModel: tap delays must be >= 0");
            if (!(taps[i].gain_db <= 0.0))
                throw std::invalid_argument("ChannelModel: tap gains must be <= 0 dB");
            if (i > 0 && !(taps[i].delay_ns > taps[i - 1].delay_ns))
                throw std::invalid_argument("ChannelModel: tap delays must be strictly increasing");
        }
    }
};

// Add white Gaussian noise at the given SNR relative to the waveform's own
// power. Real waveforms (zero imaginary part throughout) receive real noise;
// complex waveforms receive circular complex noise. Deterministic per seed.
template <typename Scalar = double>
sounder::Waveform<Scalar> add_awgn(const sounder::Waveform<Scalar> &w, double snr_db, std::uint64_t seed)
{
    if (w.samples.size() == 0)
        throw std::invalid_argument("add_awgn: empty waveform");

    double power = 0.0;
    bool is_real = true;
    for (Eigen::Index i = 0; i < w.samples.size(); ++i)
    {
        power += std::norm(std::complex<double>(w.samples[i]));
        if (w.samples[i].imag() != Scalar(0))
            is_real = false;
    }
    power /= static_cast<double>(w.samples.size());
    if (!(power > 0.0))
        throw std::invalid_argument("add_awgn: zero-power waveform, SNR undefined");

    const double noise_power = power * std::pow(10.0, -snr_db / 10.0);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    sounder::Waveform<Scalar> out = w;
    if (is_real)
    {
        const double sigma = std::sqrt(noise_power);
        for (Eigen::Index i = 0; i < out.samples.size(); ++i)
            out.samples[i] += std::complex<Scalar>(static_cast<Scalar>(sigma * gauss(rng)), Scalar(0));
    }
    else
    {
        const double sigma = std::sqrt(noise_power / 2.0);
        for (Eigen::Index i = 0; i < out.samples.size(); ++i)
        {
            const double re = sigma * gauss(rng);
            const double im = sigma * gauss(rng);
            out.samples[i] += std::complex<Scalar>(static_cast<Scalar>(re), static_cast<Scalar>(im));
        }
    }
    return out;
}

// Pass a waveform through the tap delay line: each tap contributes a copy
// shifted by round((bulk_delay + delay) * fs) samples and scaled by
// 10^(gain/20) * exp(i phase); noise is added last when configured. The output
// is extended by the largest shift so no energy is lost. Tap delays are
// quantized to the nearest sample; configured delays too fine for the grid are
// rejected rather than silently merged.
template <typename Scalar = double>
sounder::Waveform<Scalar> apply_channel(const sounder::Waveform<Scalar> &tx, const ChannelModel &ch)
{
    ch.validate();
    if (tx.samples.size() == 0)
        throw std::invalid_argument("apply_channel: empty waveform");
    if (!(tx.sample_rate_hz > 0.0))
        throw std::invalid_argument("apply_channel: waveform sample rate must be positive");

    const double fs = tx.sample_rate_hz;
    std::vector<Eigen::Index> shift(ch.taps.size());
    for (std::size_t i = 0; i < ch.taps.size(); ++i)
    {
        shift[i] = static_cast<Eigen::Index>(std::llround((ch.bulk_delay_ns + ch.taps[i].delay_ns) * 1.0e-9 * fs));
        if (i > 0 && shift[i] == shift[i - 1])
            throw std::invalid_argument("apply_channel: distinct tap delays quantize to the same sample; "
                                        "raise oversample for a finer grid");
    }

    const Eigen::Index n = tx.samples.size();
    sounder::Waveform<Scalar> out;
    out.sample_rate_hz = fs;
    out.samples = sounder::ComplexVector<Scalar>::Zero(n + shift.back());

    for (std::size_t t = 0; t < ch.taps.size(); ++t)
    {
        const double a = std::pow(10.0, ch.taps[t].gain_db / 20.0);
        const std::complex<double> g = std::polar(a, ch.taps[t].phase_rad);
        const std::complex<Scalar> gs(static_cast<Scalar>(g.real()), static_cast<Scalar>(g.imag()));
        for (Eigen::Index i = 0; i < n; ++i)
            out.samples[i + shift[t]] += gs * tx.samples[i];
    }

    if (ch.awgn_snr_db)
        out = add_awgn(out, *ch.awgn_snr_db, ch.noise_seed);
    return out;
}

// Bundled three-component multipath scenario used by the fig6_7 preset: a LOS
// replica plus two delayed replicas, 100 ns behind the transmitter
inline ChannelModel fig6_scenario()
{
    ChannelModel ch;
    ch.bulk_delay_ns = 100.0;
    ch.taps = {{0.0, -4.5, 0.0}, {1.0, -6.0, 0.0}, {3.0, -10.5, 0.0}};
    return ch;
}

} // namespace sounderlab::channel

#endif
