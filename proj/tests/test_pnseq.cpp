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

#include <catch2/catch_amalgamated.hpp>

#include "sounderlab/pnseq.hpp"

using namespace sounderlab;

static pnseq::ChipSequence literal_sequence(std::vector<std::uint8_t> chips)
{
    pnseq::ChipSequence seq;
    seq.chips = std::move(chips);
    return seq;
}

TEST_CASE("Generate: known short sequence")
{
    pnseq::PnConfig cfg;
    cfg.n_stages = 5;
    cfg.taps = {5, 3};
    cfg.seed = 1;
    cfg.chip_rate_hz = 1.0e6;

    auto seq = pnseq::generate(cfg);

    // Full period from seed 00001, independently enumerated
    std::vector<std::uint8_t> want = {1, 0, 0, 0, 0, 1, 0, 1, 0, 1, 1, 1, 0, 1, 1, 0,
                                      0, 0, 1, 1, 1, 1, 1, 0, 0, 1, 1, 0, 1, 0, 0};
    REQUIRE(seq.length() == 31);
    CHECK(seq.chips == want);

    // The first n_stages chips replay the seed bits
    for (int k = 0; k < 5; ++k)
        CHECK(seq.chips[k] == ((cfg.seed >> k) & 1U));

    // Balance: 16 ones, 15 zeros
    int ones = 0;
    for (auto c : seq.chips)
        ones += c;
    CHECK(ones == 16);
}

TEST_CASE("Generate: published 4095-chip configuration")
{
    pnseq::PnConfig cfg;
    cfg.n_stages = 12;
    cfg.taps = {12, 6, 4, 1};
    cfg.seed = 0xFFF;

    auto seq = pnseq::generate(cfg);
    REQUIRE(seq.length() == 4095);

    int ones = 0;
    for (auto c : seq.chips)
        ones += c;
    CHECK(ones == 2048);
}

TEST_CASE("Generate: non-maximal tap set yields the shorter cycle")
{
    pnseq::PnConfig cfg;
    cfg.n_stages = 5;
    cfg.taps = {5, 1};
    cfg.seed = 1;

    // x^5 + x + 1 is not primitive; the cycle through 00001 has period 21
    auto seq = pnseq::generate(cfg);
    CHECK(seq.length() == 21);
}

TEST_CASE("Generate: different seeds give rotations of the same sequence")
{
    pnseq::PnConfig cfg;
    cfg.n_stages = 7;
    cfg.taps = pnseq::default_taps(7);

    cfg.seed = 1;
    auto a = pnseq::generate(cfg);
    cfg.seed = 0x41;
    auto b = pnseq::generate(cfg);
    REQUIRE(a.length() == 127);
    REQUIRE(b.length() == 127);

    // Search b inside a doubled copy of a
    std::vector<std::uint8_t> doubled = a.chips;
    doubled.insert(doubled.end(), a.chips.begin(), a.chips.end());
    bool found = false;
    for (std::size_t off = 0; off < a.chips.size() && !found; ++off)
        found = std::equal(b.chips.begin(), b.chips.end(), doubled.begin() + off);
    CHECK(found);
}

TEST_CASE("Generate: every nonzero seed has the full period")
{
    pnseq::PnConfig cfg;
    cfg.n_stages = 7;
    cfg.taps = pnseq::default_taps(7);
    for (std::uint32_t seed = 1; seed < 128; ++seed)
    {
        cfg.seed = seed;
        CHECK(pnseq::generate(cfg).length() == 127);
    }
}

TEST_CASE("Generate: input validation")
{
    pnseq::PnConfig cfg;
    cfg.n_stages = 5;
    cfg.taps = {5, 3};
    cfg.seed = 1;

    auto bad = cfg;
    bad.seed = 0;
    CHECK_THROWS_AS(pnseq::generate(bad), std::invalid_argument);

    bad = cfg;
    bad.taps = {};
    CHECK_THROWS_AS(pnseq::generate(bad), std::invalid_argument);

    bad = cfg;
    bad.taps = {5, 3, 7};
    CHECK_THROWS_AS(pnseq::generate(bad), std::invalid_argument);

    bad = cfg;
    bad.taps = {3, 2};
    CHECK_THROWS_AS(pnseq::generate(bad), std::invalid_argument); // output stage not tapped

    bad = cfg;
    bad.taps = {5, 3, 3};
    CHECK_THROWS_AS(pnseq::generate(bad), std::invalid_argument);

    bad = cfg;
    bad.n_stages = 4;
    bad.taps = {4, 1};
    CHECK_THROWS_AS(pnseq::generate(bad), std::invalid_argument);

    bad = cfg;
    bad.n_stages = 13;
    bad.taps = {13, 4};
    CHECK_THROWS_AS(pnseq::generate(bad), std::invalid_argument);

    bad = cfg;
    bad.chip_rate_hz = 0.0;
    CHECK_THROWS_AS(pnseq::generate(bad), std::invalid_argument);
}

TEST_CASE("Validate maximal: known classifications")
{
    CHECK(pnseq::validate_maximal({12, 6, 4, 1}, 12));
    CHECK(pnseq::validate_maximal({3, 2}, 3));
    CHECK_FALSE(pnseq::validate_maximal({4, 2}, 4));
    CHECK_FALSE(pnseq::validate_maximal({5, 1}, 5));

    CHECK_THROWS_AS(pnseq::validate_maximal({}, 5), std::invalid_argument);
    CHECK_THROWS_AS(pnseq::validate_maximal({6, 1}, 5), std::invalid_argument);
    CHECK_THROWS_AS(pnseq::validate_maximal({1}, 0), std::invalid_argument);
}

TEST_CASE("Default tap table is maximal for every register length")
{
    for (int n = 5; n <= 12; ++n)
    {
        auto taps = pnseq::default_taps(n);
        INFO("n_stages = " << n);
        CHECK(pnseq::validate_maximal(taps, n));
    }
    CHECK_THROWS_AS(pnseq::default_taps(4), std::invalid_argument);
    CHECK_THROWS_AS(pnseq::default_taps(13), std::invalid_argument);
}

TEST_CASE("Switch word decoding")
{
    // Published pairing: word 000000101001 selects stages 6, 4, 1 plus the output stage
    CHECK(pnseq::taps_from_switch_word("000000101001", 12) == std::vector<int>{12, 6, 4, 1});
    CHECK(pnseq::taps_from_switch_word("000000000000", 12) == std::vector<int>{12});
    CHECK(pnseq::taps_from_switch_word("000000000101", 11) == std::vector<int>{11, 3, 1});

    CHECK_THROWS_AS(pnseq::taps_from_switch_word("00000010100", 12), std::invalid_argument);
    CHECK_THROWS_AS(pnseq::taps_from_switch_word("0000001010011", 12), std::invalid_argument);
    CHECK_THROWS_AS(pnseq::taps_from_switch_word("00000010100x", 12), std::invalid_argument);
    // Selected stage above the register length
    CHECK_THROWS_AS(pnseq::taps_from_switch_word("100000000001", 11), std::invalid_argument);
}

TEST_CASE("Length word decoding")
{
    CHECK(pnseq::stages_from_length_word("111") == 12);
    CHECK(pnseq::stages_from_length_word("110") == 11);
    CHECK(pnseq::stages_from_length_word("000") == 5);

    CHECK_THROWS_AS(pnseq::stages_from_length_word("11"), std::invalid_argument);
    CHECK_THROWS_AS(pnseq::stages_from_length_word("1111"), std::invalid_argument);
    CHECK_THROWS_AS(pnseq::stages_from_length_word("1a1"), std::invalid_argument);
}

TEST_CASE("Bipolar mapping")
{
    auto v = pnseq::to_bipolar(literal_sequence({1, 0, 1}));
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 1.0);
    CHECK(v[1] == -1.0);
    CHECK(v[2] == 1.0);

    auto ones = pnseq::to_bipolar(literal_sequence({1, 1, 1, 1, 1, 1, 1}));
    CHECK(ones.sum() == 7.0);

    // 7-chip m-sequence
    auto m = pnseq::to_bipolar(literal_sequence({1, 1, 1, 0, 1, 0, 0}));
    std::vector<double> want = {1, 1, 1, -1, 1, -1, -1};
    for (int i = 0; i < 7; ++i)
        CHECK(m[i] == want[static_cast<std::size_t>(i)]);
}

TEST_CASE("Circular autocorrelation is two-valued for m-sequences")
{
    auto ac7 = pnseq::circular_autocorrelation(literal_sequence({1, 1, 1, 0, 1, 0, 0}));
    REQUIRE(ac7.size() == 7);
    CHECK(ac7[0] == 7);
    for (int k = 1; k < 7; ++k)
        CHECK(ac7[k] == -1);

    pnseq::PnConfig cfg;
    cfg.n_stages = 5;
    cfg.taps = {5, 3};
    cfg.seed = 1;
    auto ac31 = pnseq::circular_autocorrelation(pnseq::generate(cfg));
    REQUIRE(ac31.size() == 31);
    CHECK(ac31[0] == 31);
    for (int k = 1; k < 31; ++k)
        CHECK(ac31[k] == -1);

    auto ac1 = pnseq::circular_autocorrelation(literal_sequence({1}));
    REQUIRE(ac1.size() == 1);
    CHECK(ac1[0] == 1);
}

TEST_CASE("Run length statistics")
{
    // 7-chip m-sequence: runs 3x1, 1x1, 2x0, 1x0 around the circle
    auto s7 = pnseq::run_length_stats(literal_sequence({1, 1, 1, 0, 1, 0, 0}));
    CHECK(s7.runs_of_ones == std::map<int, int>{{3, 1}, {1, 1}});
    CHECK(s7.runs_of_zeros == std::map<int, int>{{2, 1}, {1, 1}});
    CHECK(s7.total_runs() == 4);

    // 31-chip m-sequence: 16 runs in total
    pnseq::PnConfig cfg;
    cfg.n_stages = 5;
    cfg.taps = {5, 3};
    cfg.seed = 1;
    auto s31 = pnseq::run_length_stats(pnseq::generate(cfg));
    CHECK(s31.total_runs() == 16);

    // Run-length census of a maximal sequence: 2^(N-1-r) runs of length r
    // (half ones, half zeros) for r < N-1, one zeros-run of N-1, one ones-run of N
    pnseq::PnConfig cfg9;
    cfg9.n_stages = 9;
    cfg9.taps = pnseq::default_taps(9);
    auto s511 = pnseq::run_length_stats(pnseq::generate(cfg9));
    for (int r = 1; r <= 7; ++r)
    {
        CHECK(s511.runs_of_ones.at(r) == (1 << (8 - r)) / 2);
        CHECK(s511.runs_of_zeros.at(r) == (1 << (8 - r)) / 2);
    }
    CHECK(s511.runs_of_zeros.at(8) == 1);
    CHECK(s511.runs_of_ones.at(9) == 1);
    CHECK(s511.total_runs() == 256);

    // Non-maximal all-ones input is a single circular run
    auto all1 = pnseq::run_length_stats(literal_sequence({1, 1, 1, 1, 1, 1, 1}));
    CHECK(all1.runs_of_ones == std::map<int, int>{{7, 1}});
    CHECK(all1.runs_of_zeros.empty());
}

TEST_CASE("Maximal-sequence properties hold for all register lengths")
{
    for (int n = 5; n <= 12; ++n)
    {
        INFO("n_stages = " << n);
        pnseq::PnConfig cfg;
        cfg.n_stages = n;
        cfg.taps = pnseq::default_taps(n);
        cfg.seed = pnseq::all_ones_seed(n);
        auto seq = pnseq::generate(cfg);

        const auto L = static_cast<int>((1U << n) - 1U);
        REQUIRE(static_cast<int>(seq.length()) == L);

        int ones = 0;
        for (auto c : seq.chips)
            ones += c;
        CHECK(2 * ones - L == 1); // ones - zeros = 1

        auto ac = pnseq::circular_autocorrelation(seq);
        CHECK(ac[0] == L);
        CHECK(ac.tail(L - 1).minCoeff() == -1);
        CHECK(ac.tail(L - 1).maxCoeff() == -1);
    }
}
