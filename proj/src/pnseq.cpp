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

#include "sounderlab/pnseq.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace sounderlab::pnseq
{

static std::uint32_t tap_mask(const std::vector<int> &taps, int n_stages)
{
    std::uint32_t mask = 0;
    for (int t : taps)
        mask |= 1U << (t % n_stages); // stage n_stages folds onto the output bit
    return mask;
}

// One register clock: emit bit 0, shift right, feedback enters at the top
static std::uint32_t step(std::uint32_t reg, std::uint32_t mask, int n_stages)
{
    std::uint32_t fb = static_cast<std::uint32_t>(std::popcount(reg & mask)) & 1U;
    return (reg >> 1) | (fb << (n_stages - 1));
}

void PnConfig::validate() const
{
    if (n_stages < 5 || n_stages > 12)
        throw std::invalid_argument("PnConfig: n_stages must be in 5..12, got " + std::to_string(n_stages));

    if ((seed & ((1U << n_stages) - 1U)) == 0U)
        throw std::invalid_argument("PnConfig: seed must be a nonzero register state");

    if (taps.empty())
        throw std::invalid_argument("PnConfig: tap set must not be empty");

    for (int t : taps)
        if (t < 1 || t > n_stages)
            throw std::invalid_argument("PnConfig: tap stage " + std::to_string(t) + " outside 1.." + std::to_string(n_stages));

    if (*std::max_element(taps.begin(), taps.end()) != n_stages)
        throw std::invalid_argument("PnConfig: the output stage " + std::to_string(n_stages) + " must be tapped");

    std::vector<int> sorted = taps;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("PnConfig: duplicate tap stage");

    if (!(chip_rate_hz > 0.0))
        throw std::invalid_argument("PnConfig: chip_rate_hz must be positive");
}

int RunLengthStats::total_runs() const
{
    int n = 0;
    for (const auto &[len, count] : runs_of_ones)
        n += count;
    for (const auto &[len, count] : runs_of_zeros)
        n += count;
    return n;
}

std::uint32_t all_ones_seed(int n_stages)
{
    if (n_stages < 1 || n_stages > 31)
        throw std::invalid_argument("all_ones_seed: n_stages outside 1..31");
    return (1U << n_stages) - 1U;
}

std::vector<int> default_taps(int n_stages)
{
    switch (n_stages)
    {
    case 5:
        return {5, 3};
    case 6:
        return {6, 5};
    case 7:
        return {7, 6};
    case 8:
        return {8, 6, 5, 4};
    case 9:
        return {9, 5};
    case 10:
        return {10, 7};
    case 11:
        return {11, 9};
    case 12:
        return {12, 6, 4, 1};
    default:
        throw std::invalid_argument("default_taps: no tap set for n_stages = " + std::to_string(n_stages));
    }
}

ChipSequence generate(const PnConfig &config)
{
    config.validate();

    const int n = config.n_stages;
    const std::uint32_t mask = tap_mask(config.taps, n);
    const std::uint32_t seed = config.seed & ((1U << n) - 1U);

    // Run until the state returns to the seed. The update is invertible because
    // stage n is always tapped, so the walk from any nonzero state is a pure cycle.
    std::vector<std::uint8_t> chips;
    chips.reserve((std::size_t(1) << n) - 1U);

    std::uint32_t reg = seed;
    const std::size_t cap = std::size_t(1) << n;
    do
    {
        chips.push_back(static_cast<std::uint8_t>(reg & 1U));
        reg = step(reg, mask, n);
    } while (reg != seed && chips.size() < cap);

    return ChipSequence{std::move(chips), config};
}

bool validate_maximal(const std::vector<int> &taps, int n_stages)
{
    if (n_stages < 1 || n_stages > 16)
        throw std::invalid_argument("validate_maximal: n_stages outside 1..16");
    if (taps.empty())
        throw std::invalid_argument("validate_maximal: tap set must not be empty");
    for (int t : taps)
        if (t < 1 || t > n_stages)
            throw std::invalid_argument("validate_maximal: tap stage " + std::to_string(t) + " outside 1.." + std::to_string(n_stages));

    // Walk the cycle containing state 1; the sequence is maximal iff that cycle
    // visits all 2^n - 1 nonzero states (first return time = 2^n - 1).
    const std::uint32_t mask = tap_mask(taps, n_stages);
    const std::uint32_t start = 1U;
    const std::size_t want = (std::size_t(1) << n_stages) - 1U;

    std::uint32_t reg = start;
    for (std::size_t k = 1; k <= want; ++k)
    {
        reg = step(reg, mask, n_stages);
        if (reg == start)
            return k == want;
        if (reg == 0U)
            return false; // non-invertible feedback fell into the lockup state
    }
    return false;
}

std::vector<int> taps_from_switch_word(const std::string &word, int n_stages)
{
    if (word.size() != 12)
        throw std::invalid_argument("switch word must have exactly 12 bits, got " + std::to_string(word.size()));
    if (n_stages < 5 || n_stages > 12)
        throw std::invalid_argument("taps_from_switch_word: n_stages must be in 5..12");

    // Leftmost character is bit 12; bit i selects stage i
    std::vector<int> taps;
    for (int i = 12; i >= 1; --i)
    {
        char c = word[static_cast<std::size_t>(12 - i)];
        if (c != '0' && c != '1')
            throw std::invalid_argument("switch word must contain only 0 and 1");
        if (c == '1')
        {
            if (i > n_stages)
                throw std::invalid_argument("switch word selects stage " + std::to_string(i) + " above n_stages = " + std::to_string(n_stages));
            taps.push_back(i);
        }
    }

    // The output stage always participates in the feedback
    if (std::find(taps.begin(), taps.end(), n_stages) == taps.end())
        taps.insert(taps.begin(), n_stages);

    return taps;
}

int stages_from_length_word(const std::string &word)
{
    if (word.size() != 3)
        throw std::invalid_argument("length word must have exactly 3 bits, got " + std::to_string(word.size()));
    int v = 0;
    for (char c : word)
    {
        if (c != '0' && c != '1')
            throw std::invalid_argument("length word must contain only 0 and 1");
        v = (v << 1) | (c == '1' ? 1 : 0);
    }
    return 5 + v;
}

Eigen::VectorXi circular_autocorrelation(const ChipSequence &seq)
{
    const auto L = static_cast<Eigen::Index>(seq.chips.size());
    if (L == 0)
        throw std::invalid_argument("circular_autocorrelation: empty sequence");

    std::vector<int> b(static_cast<std::size_t>(L));
    for (Eigen::Index i = 0; i < L; ++i)
        b[static_cast<std::size_t>(i)] = seq.chips[static_cast<std::size_t>(i)] ? 1 : -1;

    Eigen::VectorXi out(L);
    for (Eigen::Index k = 0; k < L; ++k)
    {
        int acc = 0;
        for (Eigen::Index i = 0; i < L; ++i)
            acc += b[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>((i + k) % L)];
        out[k] = acc;
    }
    return out;
}

RunLengthStats run_length_stats(const ChipSequence &seq)
{
    const std::size_t L = seq.chips.size();
    if (L == 0)
        throw std::invalid_argument("run_length_stats: empty sequence");

    RunLengthStats stats;

    // Locate a symbol boundary; without one the whole circle is a single run
    std::size_t start = L;
    for (std::size_t i = 0; i < L; ++i)
        if (seq.chips[i] != seq.chips[(i + L - 1) % L])
        {
            start = i;
            break;
        }
    if (start == L)
    {
        auto &runs = seq.chips[0] ? stats.runs_of_ones : stats.runs_of_zeros;
        runs[static_cast<int>(L)] = 1;
        return stats;
    }

    std::size_t i = start;
    std::size_t consumed = 0;
    while (consumed < L)
    {
        std::uint8_t sym = seq.chips[i];
        int len = 0;
        while (consumed < L && seq.chips[i] == sym)
        {
            ++len;
            ++consumed;
            i = (i + 1) % L;
        }
        auto &runs = sym ? stats.runs_of_ones : stats.runs_of_zeros;
        runs[len] += 1;
    }
    return stats;
}

} // namespace sounderlab::pnseq
