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

#include <cstdint>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sounderlab/config.hpp"
#include "sounderlab/presets.hpp"
#include "sounderlab/runner.hpp"

namespace
{

namespace cli = sounderlab::cli;

struct SubArgs
{
    cli::Experiment experiment = cli::Experiment::pdp;
    std::string config_path;
    std::string preset;
    std::string out_dir = ".";
    bool dilated = false;
    bool print_config = false;
    std::uint64_t seed = 0;
    CLI::Option *seed_opt = nullptr;
};

void run_experiment(const SubArgs &args)
{
    if (!args.config_path.empty() && !args.preset.empty())
        throw cli::config_error("give either --config or --preset, not both");
    if (args.config_path.empty() && args.preset.empty())
        throw cli::config_error("one of --config <file> or --preset <name> is required");

    std::string text;
    std::string origin;
    if (!args.preset.empty())
    {
        const cli::Experiment owner = cli::preset_experiment(args.preset);
        if (owner != args.experiment)
            throw cli::config_error("preset '" + args.preset + "' belongs to experiment '" +
                                    cli::experiment_name(owner) + "'");
        text = cli::preset_config_text(args.preset);
        origin = "preset:" + args.preset;
    }

    if (args.print_config)
    {
        if (text.empty())
            throw cli::config_error("--print-config is only meaningful with --preset");
        std::cout << text;
        return;
    }

    cli::ScenarioConfig cfg;
    if (!text.empty())
        cfg = cli::parse_scenario(text, args.experiment, origin);
    else
        cfg = cli::load_scenario(args.config_path, args.experiment);

    cli::RunOptions options;
    options.out_dir = args.out_dir;
    options.dilated = args.dilated;
    if (args.seed_opt && args.seed_opt->count() > 0)
        options.seed_override = args.seed;

    const cli::RunResult result = cli::run(cfg, options);
    for (const auto &path : result.outputs)
        std::cout << "wrote " << path.string() << "\n";
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"sliding correlation channel sounder: simulation and analysis experiments"};
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> experiments = {
        {"sequence", "generate one PN sequence period and its statistics"},
        {"spectrum", "power spectrum of the PN waveform with null/sidelobe extraction"},
        {"sync", "sliding correlator sync pulse train timing"},
        {"pdp", "multipath power delay profile with peak extraction"},
        {"xpd", "path loss exponent fit and cross-polarization statistics"},
        {"linearity", "receiver calibration sweep linearity check"},
    };

    std::vector<std::unique_ptr<SubArgs>> storage;
    for (const auto &[name, description] : experiments)
    {
        auto args = std::make_unique<SubArgs>();
        args->experiment = cli::experiment_from_name(name);
        CLI::App *sub = app.add_subcommand(name, description);
        sub->add_option("--config", args->config_path, "scenario config file");
        sub->add_option("--preset", args->preset, "bundled preset name (fig4, fig5, fig6_7, fig9)");
        sub->add_option("--out", args->out_dir, "output directory (default: current)");
        sub->add_flag("--dilated", args->dilated, "keep profile CSV on the observed-time axis");
        args->seed_opt = sub->add_option("--seed", args->seed, "override channel.noise_seed");
        sub->add_flag("--print-config", args->print_config, "print the preset config text and exit");
        SubArgs *raw = args.get();
        sub->callback([raw]() { run_experiment(*raw); });
        storage.push_back(std::move(args));
    }

    try
    {
        app.parse(argc, argv);
        return 0;
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 2;
    }
    catch (const cli::io_error &e)
    {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    }
    catch (const cli::config_error &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::runtime_error &e)
    {
        std::cerr << "run error: " << e.what() << "\n";
        return 3;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
