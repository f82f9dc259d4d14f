// SPDX-License-Identifier: Apache-2.0
//
// falawn — fluid-antenna base-station simulator and transmit-power optimizer
// Copyright (C) 2026 the falawn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <CLI11.hpp>
#include <iostream>

#include "falawn/cli.hpp"

int main(int argc, char **argv) {
    CLI::App app{"falawn: joint transmit-beamforming and fluid-antenna position "
                 "optimization testbed"};
    app.require_subcommand(1);

    falawn::CliOptions options;
    std::uint64_t seed_value = 0;
    std::string out_dir;

    const auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--config", options.config_path,
                        "configuration file (defaults apply when omitted)");
        cmd->add_option("--seed", seed_value, "override the run seed")
            ->each([&](const std::string &) { options.seed = seed_value; });
        cmd->add_option("--out", out_dir, "output directory")
            ->each([&](const std::string &) { options.out_dir = out_dir; });
        cmd->add_flag("--plot", options.plot, "emit SVG charts");
        cmd->add_flag("--no-timestamp", options.no_timestamp,
                      "suppress timestamps for reproducible output");
        cmd->add_option("--threads", options.threads,
                        "worker threads (0 = FA_LAWN_THREADS or hardware)");
    };

    CLI::App *run = app.add_subcommand(
        "run", "optimize one scenario under FPA, FA(5λ) and FA(10λ)");
    add_common(run);

    CLI::App *sweep = app.add_subcommand(
        "sweep", "Monte Carlo requirement sweep producing a CSV table");
    add_common(sweep);
    sweep->add_option("--axis", options.axis, "swept requirement")
        ->check(CLI::IsMember({"rate", "beampattern", "lqr"}))
        ->required();

    CLI::App *validate = app.add_subcommand(
        "validate", "check a configuration and echo the resolved values");
    add_common(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? falawn::kExitOk : falawn::kExitConfig;
    }

    try {
        if (run->parsed())
            return falawn::cmd_run(options, std::cerr);
        if (sweep->parsed())
            return falawn::cmd_sweep(options, std::cerr);
        if (validate->parsed())
            return falawn::cmd_validate(options, std::cout);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return falawn::kExitConfig;
    }
    return falawn::kExitConfig;
}
