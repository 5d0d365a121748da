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

// End-to-end tests of the sounderlab command line tool. The binary under
// test is located through the SOUNDERLAB_CLI environment variable, which
// the build system points at the freshly built executable.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using nlohmann::json;

namespace
{

namespace fs = std::filesystem;

std::string cli_binary()
{
    const char *env = std::getenv("SOUNDERLAB_CLI");
    REQUIRE(env != nullptr);
    return env;
}

// Fresh scratch directory, removed when the test section ends
struct Scratch
{
    fs::path dir;

    Scratch()
    {
        static int counter = 0;
        dir = fs::temp_directory_path() /
              ("sounderlab_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(dir);
    }

    ~Scratch()
    {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }

    fs::path operator/(const std::string &name) const { return dir / name; }
};

std::string read_file(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

void write_file(const fs::path &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary);
    out << content;
}

struct CliResult
{
    int exit_code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::string &args, const Scratch &scratch)
{
    static int counter = 0;
    const fs::path out_file = scratch / ("stdout_" + std::to_string(counter));
    const fs::path err_file = scratch / ("stderr_" + std::to_string(counter));
    ++counter;

    const std::string cmd =
        cli_binary() + " " + args + " >" + out_file.string() + " 2>" + err_file.string();
    const int status = std::system(cmd.c_str());

    CliResult res;
    if (WIFEXITED(status))
        res.exit_code = WEXITSTATUS(status);
    res.out = read_file(out_file);
    res.err = read_file(err_file);
    return res;
}

json load_report(const fs::path &dir)
{
    const std::string text = read_file(dir / "report.json");
    REQUIRE_FALSE(text.empty());
    return json::parse(text);
}

std::vector<std::string> lines_of(const std::string &text)
{
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        lines.push_back(line);
    return lines;
}

// First column of a CSV data row
double time_of_row(const std::string &row)
{
    return std::strtod(row.c_str(), nullptr);
}

} // namespace

TEST_CASE("usage errors exit with code 2")
{
    Scratch scratch;

    CHECK(run_cli("--help", scratch).exit_code == 0);
    CHECK(run_cli("", scratch).exit_code == 2);         // subcommand required
    CHECK(run_cli("warp", scratch).exit_code == 2);     // unknown subcommand
    CHECK(run_cli("pdp --config", scratch).exit_code == 2); // missing option value

    const CliResult none = run_cli("pdp", scratch);
    CHECK(none.exit_code == 2);
    CHECK_THAT(none.err, ContainsSubstring("--config") && ContainsSubstring("--preset"));

    write_file(scratch / "empty.conf", "pn.n_stages = 9\nsounder.beta_hz = 990e6\n");
    const CliResult both =
        run_cli("pdp --config " + (scratch / "empty.conf").string() + " --preset fig6_7", scratch);
    CHECK(both.exit_code == 2);
    CHECK_THAT(both.err, ContainsSubstring("not both"));
}

TEST_CASE("preset fig4 writes the spectrum artifacts")
{
    Scratch scratch;
    const fs::path out = scratch / "out";

    const CliResult res = run_cli("spectrum --preset fig4 --out " + out.string(), scratch);
    REQUIRE(res.exit_code == 0);
    CHECK_THAT(res.out, ContainsSubstring("spectrum.csv"));
    CHECK_THAT(res.out, ContainsSubstring("report.json"));
    REQUIRE(fs::exists(out / "spectrum.csv"));
    REQUIRE(fs::exists(out / "report.json"));

    const std::vector<std::string> csv = lines_of(read_file(out / "spectrum.csv"));
    REQUIRE(csv.size() > 1);
    CHECK(csv[0] == "freq_hz,power_db");

    // Report layout: four top level sections in a fixed order
    const std::string raw = read_file(out / "report.json");
    const auto pos = [&raw](const char *key) { return raw.find(key); };
    CHECK(pos("\"experiment\"") < pos("\"config_echo\""));
    CHECK(pos("\"config_echo\"") < pos("\"results\""));
    CHECK(pos("\"results\"") < pos("\"derived\""));

    const json rep = load_report(out);
    REQUIRE(rep.size() == 4);
    CHECK(rep["experiment"] == "spectrum");
    CHECK(rep["config_echo"]["pn.s_word"] == "111");
    CHECK(rep["config_echo"]["pn.sw_word"] == "000000101001");

    const json &derived = rep["derived"];
    CHECK(derived["chip_rate_hz"] == 1.0e9);
    CHECK(derived["segments"] == 3);
    CHECK_THAT(derived["first_null_hz"].get<double>(), WithinAbs(1.0e9, 20.0e6));
    CHECK_THAT(derived["sidelobe_db"].get<double>(), WithinAbs(-13.0, 0.5));
    CHECK_THAT(derived["null_to_null_bandwidth_hz"].get<double>(), WithinAbs(2.0e9, 40.0e6));
}

TEST_CASE("preset fig5 recovers the sync pulse train")
{
    Scratch scratch;
    const fs::path out = scratch / "out";

    const CliResult res = run_cli("sync --preset fig5 --out " + out.string(), scratch);
    REQUIRE(res.exit_code == 0);
    REQUIRE(fs::exists(out / "pdp.csv"));

    const json rep = load_report(out);
    CHECK(rep["experiment"] == "sync");
    CHECK(rep["derived"]["pulse_count"] == 3);
    CHECK(rep["results"].size() == 3);
    CHECK_THAT(rep["derived"]["t_sync_expected_s"].get<double>(), WithinRel(0.0031, 1.0e-12));
    CHECK_THAT(rep["derived"]["t_sync_measured_s"].get<double>(), WithinRel(0.0031, 1.0e-3));

    // Pulse times are strictly increasing and roughly one sync period apart
    const double t0 = rep["results"][0]["time_s"].get<double>();
    const double t1 = rep["results"][1]["time_s"].get<double>();
    const double t2 = rep["results"][2]["time_s"].get<double>();
    CHECK(t0 < t1);
    CHECK(t1 < t2);
    CHECK_THAT(t2 - t1, WithinRel(0.0031, 1.0e-3));
}

TEST_CASE("preset fig6_7 resolves the multipath taps and is deterministic")
{
    Scratch scratch;
    const fs::path out1 = scratch / "a";
    const fs::path out2 = scratch / "b";

    REQUIRE(run_cli("pdp --preset fig6_7 --out " + out1.string(), scratch).exit_code == 0);
    REQUIRE(run_cli("pdp --preset fig6_7 --out " + out2.string(), scratch).exit_code == 0);

    // Byte-identical artifacts across runs
    CHECK(read_file(out1 / "pdp.csv") == read_file(out2 / "pdp.csv"));
    CHECK(read_file(out1 / "report.json") == read_file(out2 / "report.json"));

    const std::vector<std::string> csv = lines_of(read_file(out1 / "pdp.csv"));
    REQUIRE(csv.size() > 2);
    CHECK(csv[0] == "time_s,power_linear,power_db");

    // Undilated by default: consecutive rows step by one true-time sample
    const double dt = time_of_row(csv[2]) - time_of_row(csv[1]);
    CHECK_THAT(dt, WithinRel(1.0e-10, 1.0e-9));

    const json rep = load_report(out1);
    CHECK(rep["experiment"] == "pdp");
    CHECK(rep["derived"]["gamma"] == 20000.0);
    CHECK(rep["derived"]["method"] == "fast");
    CHECK(rep["derived"]["peak_count"] == 3);
    CHECK_THAT(rep["derived"]["first_peak_delay_ns"].get<double>(), WithinAbs(100.0, 0.5));

    REQUIRE(rep["results"].size() == 3);
    const double d0 = rep["results"][0]["delay_ns"].get<double>();
    CHECK_THAT(rep["results"][0]["relative_power_db"].get<double>(), WithinAbs(0.0, 1.0e-12));
    CHECK_THAT(rep["results"][1]["delay_ns"].get<double>() - d0, WithinAbs(1.0, 0.1));
    CHECK_THAT(rep["results"][2]["delay_ns"].get<double>() - d0, WithinAbs(3.0, 0.1));
    CHECK_THAT(rep["results"][1]["relative_power_db"].get<double>(), WithinAbs(-1.5, 0.5));
    CHECK_THAT(rep["results"][2]["relative_power_db"].get<double>(), WithinAbs(-6.0, 0.5));
}

TEST_CASE("preset fig9 fits the path loss exponent and averages xpd")
{
    Scratch scratch;
    const fs::path out = scratch / "out";

    const CliResult res = run_cli("xpd --preset fig9 --out " + out.string(), scratch);
    REQUIRE(res.exit_code == 0);
    REQUIRE(fs::exists(out / "report.json"));
    CHECK_FALSE(fs::exists(out / "pdp.csv"));

    const json rep = load_report(out);
    CHECK(rep["experiment"] == "xpd");
    REQUIRE(rep["results"].size() == 5);
    for (const json &row : rep["results"])
    {
        CHECK(row.contains("distance_m"));
        CHECK(row.contains("pl_vv_db"));
        CHECK(row.contains("pl_vh_db"));
        CHECK(row.contains("xpd_db"));
    }
    CHECK_THAT(rep["results"][0]["xpd_db"].get<double>(), WithinAbs(27.28, 1.0e-9));

    const json &derived = rep["derived"];
    CHECK(derived["d0_m"] == 1.0);
    CHECK(derived["fc_hz"] == 142.0e9);
    CHECK_THAT(derived["fspl_d0_db"].get<double>(), WithinAbs(75.493550109545, 1.0e-6));
    CHECK_THAT(derived["ple"].get<double>(), WithinAbs(2.0, 0.01));
    CHECK_THAT(derived["xpd_mean_db"].get<double>(), WithinAbs(27.28, 1.0e-9));
    CHECK_THAT(derived["xpd_std_db"].get<double>(), WithinAbs(0.790569415042, 1.0e-6));
}

TEST_CASE("sequence experiment emits the chip stream and statistics")
{
    Scratch scratch;
    const fs::path out = scratch / "out";
    const fs::path conf = scratch / "seq.conf";
    write_file(conf, "pn.s_word = 111\npn.sw_word = 000000101001\nsounder.alpha_hz = 1e9\n");

    const CliResult res =
        run_cli("sequence --config " + conf.string() + " --out " + out.string(), scratch);
    REQUIRE(res.exit_code == 0);
    REQUIRE(fs::exists(out / "chips.txt"));

    const std::vector<std::string> chips = lines_of(read_file(out / "chips.txt"));
    REQUIRE(chips.size() == 4095);
    std::size_t ones = 0;
    for (const std::string &c : chips)
    {
        REQUIRE((c == "0" || c == "1"));
        ones += c == "1";
    }
    CHECK(ones == 2048);

    const json rep = load_report(out);
    CHECK(rep["experiment"] == "sequence");
    CHECK(rep["derived"]["length"] == 4095);
    CHECK(rep["derived"]["ones"] == 2048);
    CHECK(rep["derived"]["zeros"] == 2047);
    CHECK(rep["derived"]["maximal"] == true);
    CHECK(rep["derived"]["chip_rate_hz"] == 1.0e9);

    // The echo preserves the input keys verbatim
    CHECK(rep["config_echo"].size() == 3);
    CHECK(rep["config_echo"]["sounder.alpha_hz"] == "1e9");
}

TEST_CASE("dilated flag keeps the profile on the observed time axis")
{
    Scratch scratch;
    const fs::path out = scratch / "out";

    REQUIRE(run_cli("pdp --preset fig6_7 --dilated --out " + out.string(), scratch).exit_code == 0);
    const std::vector<std::string> csv = lines_of(read_file(out / "pdp.csv"));
    REQUIRE(csv.size() > 2);

    // gamma = 20000 at fs = 10 GS/s: one dilated sample spans 2 microseconds
    const double dt = time_of_row(csv[2]) - time_of_row(csv[1]);
    CHECK_THAT(dt, WithinRel(2.0e-6, 1.0e-9));
}

TEST_CASE("seed option controls the noise draw")
{
    Scratch scratch;
    const fs::path conf = scratch / "noisy.conf";
    write_file(conf, "pn.n_stages = 9\n"
                     "sounder.alpha_hz = 1e9\n"
                     "sounder.beta_hz = 990e6\n"
                     "channel.snr_db = 0\n"
                     "channel.noise_seed = 42\n"
                     "channel.tap.0.delay_ns = 0\n"
                     "channel.tap.0.gain_db = 0\n");
    const std::string base = "pdp --config " + conf.string() + " --out ";

    const fs::path s5a = scratch / "s5a";
    const fs::path s5b = scratch / "s5b";
    const fs::path s6 = scratch / "s6";
    const fs::path def = scratch / "def";
    REQUIRE(run_cli(base + s5a.string() + " --seed 5", scratch).exit_code == 0);
    REQUIRE(run_cli(base + s5b.string() + " --seed 5", scratch).exit_code == 0);
    REQUIRE(run_cli(base + s6.string() + " --seed 6", scratch).exit_code == 0);
    REQUIRE(run_cli(base + def.string(), scratch).exit_code == 0);

    CHECK(read_file(s5a / "pdp.csv") == read_file(s5b / "pdp.csv"));
    CHECK(read_file(s5a / "pdp.csv") != read_file(s6 / "pdp.csv"));
    CHECK(read_file(s5a / "pdp.csv") != read_file(def / "pdp.csv"));

    CHECK(load_report(s5a)["derived"]["noise_seed"] == 5);
    CHECK(load_report(s6)["derived"]["noise_seed"] == 6);
    CHECK(load_report(def)["derived"]["noise_seed"] == 42); // falls back to the config seed
}

TEST_CASE("print-config dumps the preset text without running")
{
    Scratch scratch;

    const CliResult res = run_cli("spectrum --preset fig4 --print-config", scratch);
    CHECK(res.exit_code == 0);
    CHECK_THAT(res.out, ContainsSubstring("pn.s_word = 111"));
    CHECK_THAT(res.out, ContainsSubstring("sounder.alpha_hz = 1e9"));

    write_file(scratch / "c.conf", "pn.n_stages = 5\n");
    const CliResult bad =
        run_cli("sequence --config " + (scratch / "c.conf").string() + " --print-config", scratch);
    CHECK(bad.exit_code == 2);
}

TEST_CASE("config mistakes exit with code 2 and name the offending line")
{
    Scratch scratch;

    write_file(scratch / "unknown.conf", "pn.n_stages = 5\nsync.threshold = 0.5\n");
    const CliResult unknown =
        run_cli("sequence --config " + (scratch / "unknown.conf").string(), scratch);
    CHECK(unknown.exit_code == 2);
    CHECK_THAT(unknown.err, ContainsSubstring("unknown.conf:2"));
    CHECK_THAT(unknown.err, ContainsSubstring("sync.threshold"));
    CHECK_THAT(unknown.err, ContainsSubstring("sequence"));

    write_file(scratch / "nan.conf", "sounder.alpha_hz = fast\n");
    const CliResult nan = run_cli("sequence --config " + (scratch / "nan.conf").string(), scratch);
    CHECK(nan.exit_code == 2);
    CHECK_THAT(nan.err, ContainsSubstring("not a number"));

    const CliResult mismatch = run_cli("pdp --preset fig4", scratch);
    CHECK(mismatch.exit_code == 2);
    CHECK_THAT(mismatch.err, ContainsSubstring("belongs to experiment 'spectrum'"));

    const CliResult missing_preset = run_cli("spectrum --preset fig99", scratch);
    CHECK(missing_preset.exit_code == 2);
    CHECK_THAT(missing_preset.err, ContainsSubstring("unknown preset"));
}

TEST_CASE("an infeasible slow clock exits with code 3")
{
    Scratch scratch;
    const fs::path conf = scratch / "slip.conf";

    // gamma = 400 with a 31-chip sequence at 10x oversampling: the scan
    // advances less than one output sample per period, so the run aborts
    write_file(conf, "pn.n_stages = 5\n"
                     "sounder.alpha_hz = 1e6\n"
                     "sounder.beta_hz = 997500\n"
                     "sounder.oversample = 10\n");
    const CliResult res = run_cli("pdp --config " + conf.string(), scratch);
    CHECK(res.exit_code == 3);
    CHECK_THAT(res.err, ContainsSubstring("run error"));
}

TEST_CASE("io failures exit with code 4")
{
    Scratch scratch;

    const CliResult missing = run_cli("pdp --config " + (scratch / "nope.conf").string(), scratch);
    CHECK(missing.exit_code == 4);
    CHECK_THAT(missing.err, ContainsSubstring("io error"));

    const CliResult unwritable = run_cli("xpd --preset fig9 --out /proc/nope/out", scratch);
    CHECK(unwritable.exit_code == 4);
    CHECK_THAT(unwritable.err, ContainsSubstring("io error"));
}

TEST_CASE("nested output directories are created on demand")
{
    Scratch scratch;
    const fs::path out = scratch / "a";

    const CliResult res =
        run_cli("xpd --preset fig9 --out " + (out / "b" / "c").string(), scratch);
    CHECK(res.exit_code == 0);
    CHECK(fs::exists(out / "b" / "c" / "report.json"));
}
