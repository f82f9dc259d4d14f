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

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "falawn/config.hpp"
#include "falawn/harness.hpp"

namespace falawn {

// exit codes shared by all subcommands
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitInfeasible = 2;

struct CliOptions {
    std::string config_path;               // empty: built-in defaults
    std::string axis = "rate";             // sweep: rate | beampattern | lqr
    std::optional<std::uint64_t> seed;     // overrides [run] seed
    std::optional<std::string> out_dir;    // overrides [output] directory
    bool plot = false;                     // also emit an SVG chart
    bool no_timestamp = false;             // reproducible file names / reports
    int threads = 0;                       // 0: FA_LAWN_THREADS or hardware
};

/// Optimizes one scenario under all three architectures and writes a
/// human-readable report. Returns 2 when any architecture is infeasible.
int cmd_run(const CliOptions &options, std::ostream &diag);

/// Runs one requirement sweep and writes the CSV (plus SVG when requested).
int cmd_sweep(const CliOptions &options, std::ostream &diag);

/// Parses and range-checks the configuration without running anything;
/// prints the resolved values with provenance tags.
int cmd_validate(const CliOptions &options, std::ostream &out);

} // namespace falawn
