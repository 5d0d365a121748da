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

#ifndef sounderlab_analysis_H
#define sounderlab_analysis_H

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "sounderlab/sounder.hpp"

namespace sounderlab::analysis
{

constexpr double speed_of_light_m_s = 2.99792458e8;

// One resolved multipath component; the strongest has relative_power_db = 0
struct MultipathEstimate
{
    double delay_ns = 0.0;
    double relative_power_db = 0.0;
};

// One-sided averaged periodogram, normalized to 0 dB at the strongest bin
struct Psd
{
    Eigen::VectorXd freq_hz;
    Eigen::VectorXd power_db;
    double resolution_hz = 0.0; // Achieved bin spacing
    int segments = 0;           // Periodogram segments averaged
};

struct NullSidelobe
{
    double first_null_hz = 0.0;
    double sidelobe_db = 0.0;
};

// Link budget terms entering the path loss equation
struct LinkBudget
{
    double ptx_dbm = 0.0;
    double gtx_dbi = 0.0;
    double grx_dbi = 0.0;
    double fc_hz = 0.0;
    double distance_m = 0.0;

    void validate() const
    {
        if (!(distance_m > 0.0))
            throw std::invalid_argument("LinkBudget: distance_m must be positive");
        if (!(fc_hz > 0.0))
            throw std::invalid_argument("LinkBudget: fc_hz must be positive");
    }
};

// Co-/cross-polarized path loss pair measured at one distance
struct XpdRecord
{
    double distance_m = 0.0;
    double pl_vv_db = 0.0;
    double pl_vh_db = 0.0;
};

struct XpdStats
{
    double mean_db = 0.0;
    double std_db = 0.0;
};

struct PleFit
{
    double ple = 0.0;
    double rmse_db = 0.0;
};

struct LinearityResult
{
    double slope = 0.0;
    double max_deviation_db = 0.0;
    bool linear = false;
};

// Resolve multipath components in an undilated power profile.
//
// The profile of a rectangular-chip sounder is a superposition of triangular
// correlation kernels, so closely spaced components do not always form
// separate local maxima. Components are therefore extracted by successive
// cancellation in the amplitude domain: take the strongest remaining sample,
// record it, subtract a triangular kernel of that amplitude, repeat until the
// residual falls below threshold_db of the original maximum. The kernel
// half-base is twice min_separation_ns, which equals the chip autocorrelation
// width when the separation is the customary half chip. Candidates closer
// than min_separation_ns to an accepted component are treated as shoulders
// and cancelled without being reported.
//
// The profile is one period of a circular correlation, so both the kernel
// and the separation distance wrap around the ends: a component at the time
// origin also owns the shoulder samples at the far end of the period.
template <typename Scalar>
std::vector<MultipathEstimate> detect_peaks(const sounder::Pdp<Scalar> &pdp, double threshold_db,
                                            double min_separation_ns)
{
    if (pdp.dilated)
        throw std::invalid_argument("detect_peaks: profile must be undilated (true-delay axis)");
    if (!(threshold_db < 0.0))
        throw std::invalid_argument("detect_peaks: threshold_db must be negative (relative to the maximum)");
    if (!(min_separation_ns > 0.0))
        throw std::invalid_argument("detect_peaks: min_separation_ns must be positive");
    if (pdp.powers.size() == 0)
        throw std::runtime_error("detect_peaks: no peaks in an empty profile");

    const Eigen::Index n = pdp.powers.size();
    Eigen::VectorXd amp(n);
    for (Eigen::Index i = 0; i < n; ++i)
        amp[i] = std::sqrt(std::max(0.0, static_cast<double>(pdp.powers[i])));

    const double peak_amp = amp.maxCoeff();
    if (!(peak_amp > 0.0))
        throw std::runtime_error("detect_peaks: no peaks (profile has no positive power)");
    const double floor_amp = peak_amp * std::pow(10.0, threshold_db / 20.0);

    const double step_ns = pdp.time_step_s * 1.0e9;
    const Eigen::Index sep = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::llround(min_separation_ns / step_ns)));
    const Eigen::Index base = 2 * sep; // kernel half-base in samples

    struct Component
    {
        Eigen::Index index;
        double amplitude;
    };
    std::vector<Component> found;

    for (int iter = 0; iter < 1024; ++iter)
    {
        Eigen::Index imax = 0;
        const double a = amp.maxCoeff(&imax);
        if (a < floor_amp)
            break;

        bool separated = true;
        for (const Component &c : found)
        {
            const Eigen::Index d = std::abs(c.index - imax);
            if (std::min(d, n - d) < sep)
            {
                separated = false;
                break;
            }
        }
        if (separated)
            found.push_back({imax, a});

        for (Eigen::Index j = 0; j < n; ++j)
        {
            const Eigen::Index d = std::abs(j - imax);
            const Eigen::Index dist = std::min(d, n - d);
            if (dist >= base)
                continue;
            const double k = a * (1.0 - static_cast<double>(dist) / static_cast<double>(base));
            amp[j] = std::max(0.0, amp[j] - k);
        }
    }

    if (found.empty())
        throw std::runtime_error("detect_peaks: no peaks above threshold");

    std::sort(found.begin(), found.end(), [](const Component &a, const Component &b) { return a.index < b.index; });
    double ref = 0.0;
    for (const Component &c : found)
        ref = std::max(ref, c.amplitude);

    std::vector<MultipathEstimate> out;
    out.reserve(found.size());
    for (const Component &c : found)
        out.push_back({static_cast<double>(c.index) * step_ns, 20.0 * std::log10(c.amplitude / ref)});
    return out;
}

// Averaged periodogram with 50% segment overlap and a rectangular window,
// one-sided, normalized to 0 dB at the strongest bin. The segment length is
// round(sample_rate / resolution_hz); bins with no measurable power are
// floored 300 dB below the peak.
template <typename Scalar>
Psd power_spectrum(const sounder::Waveform<Scalar> &w, double resolution_hz)
{
    if (w.samples.size() == 0)
        throw std::invalid_argument("power_spectrum: empty waveform");
    if (!(w.sample_rate_hz > 0.0))
        throw std::invalid_argument("power_spectrum: sample rate must be positive");
    if (!(resolution_hz > 0.0))
        throw std::invalid_argument("power_spectrum: resolution_hz must be positive");

    const auto m = static_cast<Eigen::Index>(std::llround(w.sample_rate_hz / resolution_hz));
    if (m < 2)
        throw std::invalid_argument("power_spectrum: resolution coarser than half the sample rate");
    if (w.samples.size() < m)
        throw std::invalid_argument("power_spectrum: waveform shorter than one segment (" + std::to_string(m) +
                                    " samples) at the requested resolution");

    const Eigen::Index hop = std::max<Eigen::Index>(1, m / 2);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
    Eigen::FFT<Scalar> fft;
    sounder::ComplexVector<Scalar> seg(m), spec(m);
    int segments = 0;
    for (Eigen::Index start = 0; start + m <= w.samples.size(); start += hop)
    {
        seg = w.samples.segment(start, m);
        fft.fwd(spec, seg);
        for (Eigen::Index k = 0; k < m; ++k)
            acc[k] += std::norm(std::complex<double>(spec[k]));
        ++segments;
    }
    acc /= static_cast<double>(segments);

    const Eigen::Index bins = m / 2 + 1;
    const double peak = acc.head(bins).maxCoeff();
    if (!(peak > 0.0))
        throw std::invalid_argument("power_spectrum: waveform has no power");

    Psd psd;
    psd.freq_hz.resize(bins);
    psd.power_db.resize(bins);
    psd.resolution_hz = w.sample_rate_hz / static_cast<double>(m);
    psd.segments = segments;
    for (Eigen::Index k = 0; k < bins; ++k)
    {
        psd.freq_hz[k] = static_cast<double>(k) * psd.resolution_hz;
        psd.power_db[k] = 10.0 * std::log10(std::max(acc[k], peak * 1.0e-30) / peak);
    }
    return psd;
}

// First spectral null above the main lobe (first local minimum at least 20 dB
// below the peak) and the strongest level between that null and twice its
// frequency (the first sidelobe).
inline NullSidelobe find_null_and_sidelobe(const Psd &psd)
{
    const Eigen::Index n = psd.power_db.size();
    if (n < 3)
        throw std::invalid_argument("find_null_and_sidelobe: spectrum too short");

    Eigen::Index ipk = 0;
    psd.power_db.maxCoeff(&ipk);

    Eigen::Index inull = -1;
    for (Eigen::Index j = ipk + 1; j + 1 < n; ++j)
        if (psd.power_db[j] <= psd.power_db[j - 1] && psd.power_db[j] <= psd.power_db[j + 1] &&
            psd.power_db[j] <= -20.0)
        {
            inull = j;
            break;
        }
    if (inull < 0)
        throw std::runtime_error("find_null_and_sidelobe: no spectral null found on the frequency grid");

    NullSidelobe out;
    out.first_null_hz = psd.freq_hz[inull];
    out.sidelobe_db = -300.0;
    const Eigen::Index jmax = std::min<Eigen::Index>(n - 1, 2 * inull - 1);
    for (Eigen::Index j = inull + 1; j <= jmax; ++j)
        out.sidelobe_db = std::max(out.sidelobe_db, psd.power_db[j]);
    return out;
}

// Path loss from the link budget: PL = Ptx - Prx + Gtx + Grx
inline double path_loss(const LinkBudget &budget, double prx_dbm)
{
    budget.validate();
    return budget.ptx_dbm - prx_dbm + budget.gtx_dbi + budget.grx_dbi;
}

// Free-space path loss, 20 log10(4 pi d f / c)
inline double fspl(double distance_m, double fc_hz)
{
    if (!(distance_m > 0.0))
        throw std::invalid_argument("fspl: distance_m must be positive");
    if (!(fc_hz > 0.0))
        throw std::invalid_argument("fspl: fc_hz must be positive");
    return 20.0 * std::log10(4.0 * M_PI * distance_m * fc_hz / speed_of_light_m_s);
}

// Least-squares path-loss exponent with the intercept fixed at the free-space
// value at d0: PL(d) = FSPL(d0) + 10 n log10(d/d0). Records are
// (distance_m, pl_db) pairs.
inline PleFit fit_ple(const std::vector<std::pair<double, double>> &records, double d0_m, double fc_hz)
{
    if (records.size() < 2)
        throw std::invalid_argument("fit_ple: need at least 2 records");
    if (!(d0_m > 0.0))
        throw std::invalid_argument("fit_ple: d0_m must be positive");

    bool distinct = false;
    for (std::size_t i = 1; i < records.size(); ++i)
        if (records[i].first != records[0].first)
            distinct = true;
    if (!distinct)
        throw std::invalid_argument("fit_ple: all records at the same distance, fit is degenerate");

    const double anchor = fspl(d0_m, fc_hz);
    double sxx = 0.0, sxy = 0.0;
    for (const auto &[d, pl] : records)
    {
        if (!(d > d0_m))
            throw std::invalid_argument("fit_ple: all distances must exceed d0_m");
        const double x = 10.0 * std::log10(d / d0_m);
        sxx += x * x;
        sxy += x * (pl - anchor);
    }

    PleFit fit;
    fit.ple = sxy / sxx;
    double sse = 0.0;
    for (const auto &[d, pl] : records)
    {
        const double r = (pl - anchor) - fit.ple * 10.0 * std::log10(d / d0_m);
        sse += r * r;
    }
    fit.rmse_db = std::sqrt(sse / static_cast<double>(records.size()));
    return fit;
}

// Cross-polarization discrimination of one record, positive when the
// cross-polarized link is weaker
inline double xpd(const XpdRecord &record)
{
    return record.pl_vh_db - record.pl_vv_db;
}

// Mean and sample standard deviation (n-1) of the per-record XPD values;
// a single record reports zero spread
inline XpdStats xpd_stats(const std::vector<XpdRecord> &records)
{
    if (records.empty())
        throw std::invalid_argument("xpd_stats: empty record list");

    XpdStats stats;
    for (const XpdRecord &r : records)
        stats.mean_db += xpd(r);
    stats.mean_db /= static_cast<double>(records.size());

    if (records.size() > 1)
    {
        double sse = 0.0;
        for (const XpdRecord &r : records)
        {
            const double d = xpd(r) - stats.mean_db;
            sse += d * d;
        }
        stats.std_db = std::sqrt(sse / static_cast<double>(records.size() - 1));
    }
    return stats;
}

// Calibration linearity: least-squares slope of measured power against
// negated attenuation, with the largest residual. The sweep is declared
// linear when the slope lies in [0.95, 1.05].
inline LinearityResult linearity_check(const std::vector<std::pair<double, double>> &sweep)
{
    if (sweep.size() < 3)
        throw std::invalid_argument("linearity_check: need at least 3 sweep points");

    const double n = static_cast<double>(sweep.size());
    double su = 0.0, sy = 0.0;
    for (const auto &[att, pwr] : sweep)
    {
        su += -att;
        sy += pwr;
    }
    const double mu = su / n, my = sy / n;

    double suu = 0.0, suy = 0.0;
    for (const auto &[att, pwr] : sweep)
    {
        const double du = -att - mu;
        suu += du * du;
        suy += du * (pwr - my);
    }
    if (!(suu > 0.0))
        throw std::invalid_argument("linearity_check: attenuation sweep is constant");

    LinearityResult res;
    res.slope = suy / suu;
    for (const auto &[att, pwr] : sweep)
    {
        const double dev = std::abs(pwr - (my + res.slope * (-att - mu)));
        res.max_deviation_db = std::max(res.max_deviation_db, dev);
    }
    res.linear = res.slope >= 0.95 && res.slope <= 1.05;
    return res;
}

} // namespace sounderlab::analysis

#endif
