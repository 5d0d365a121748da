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

#ifndef sounderlab_pnseq_H
#define sounderlab_pnseq_H

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sounderlab::pnseq
{

// Settings of one programmable Fibonacci LFSR PN source.
//
// The register has n_stages bits. Each clock, the feedback bit is the XOR of
// the tapped stages and is shifted in at the top while the bottom bit leaves
// as the output chip. Stage numbers run 1..n_stages and the highest stage
// (n_stages) must always be tapped, which keeps the state update invertible.
//
// The seed maps directly onto the first chips out of the register: bit k of
// the seed (bit 0 = LSB) is output chip k, for k < n_stages.
struct PnConfig
{
    int n_stages = 12;            // Register length N, supported range 5..12
    std::vector<int> taps;        // Feedback stages, subset of {1..N}, must contain N
    std::uint32_t seed = 0xFFFU;  // Initial register state, low N bits used, must be nonzero
    double chip_rate_hz = 1.0e9;  // Chip clock rate in Hz

    void validate() const; // Throws std::invalid_argument on bad settings
};

// One full period of a generated PN sequence, chips in {0,1}.
struct ChipSequence
{
    std::vector<std::uint8_t> chips; // Chip values, one period
    PnConfig config;                 // Settings that produced the sequence

    std::size_t length() const { return chips.size(); }
};

// Circular run-length census of a binary sequence.
struct RunLengthStats
{
    std::map<int, int> runs_of_ones;  // Run length -> number of runs
    std::map<int, int> runs_of_zeros; // Run length -> number of runs

    int total_runs() const;
};

// All-ones register state for a given register length
std::uint32_t all_ones_seed(int n_stages);

// Known maximal-length feedback sets for register lengths 5..12
// Output: tap stages in descending order, e.g. {12, 6, 4, 1} for n_stages = 12
std::vector<int> default_taps(int n_stages);

// Generate one full period of the PN sequence.
// The period is detected by running the register until the state returns to
// the seed. Maximal-length settings give 2^N - 1 chips; non-maximal settings
// give the (shorter) cycle that contains the seed state.
ChipSequence generate(const PnConfig &config);

// Check whether a feedback set produces a maximal-length sequence (period 2^N - 1)
bool validate_maximal(const std::vector<int> &taps, int n_stages);

// Decode a 12 bit tap switch word, written MSB first (bit 12 ... bit 1).
// Bit i selects stage i as a feedback tap; stage n_stages is always added.
// Throws std::invalid_argument if a selected stage exceeds n_stages.
// Example: "000000101001" with n_stages = 12 -> {12, 6, 4, 1}
std::vector<int> taps_from_switch_word(const std::string &word, int n_stages);

// Decode a 3 bit register length word, written MSB first. Value v selects
// n_stages = 5 + v, so "000" -> 5 and "111" -> 12.
int stages_from_length_word(const std::string &word);

// Map chips to symbols: chip 1 -> +1, chip 0 -> -1
template <typename Scalar = double>
Eigen::Vector<Scalar, Eigen::Dynamic> to_bipolar(const ChipSequence &seq)
{
    Eigen::Vector<Scalar, Eigen::Dynamic> out(seq.chips.size());
    for (std::size_t i = 0; i < seq.chips.size(); ++i)
        out[static_cast<Eigen::Index>(i)] = seq.chips[i] ? Scalar(1) : Scalar(-1);
    return out;
}

// Circular autocorrelation of the bipolar sequence at all lags 0..L-1.
// A maximal-length sequence returns L at lag 0 and -1 everywhere else.
Eigen::VectorXi circular_autocorrelation(const ChipSequence &seq);

// Circular run-length statistics of the chip sequence
RunLengthStats run_length_stats(const ChipSequence &seq);

} // namespace sounderlab::pnseq

#endif
