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

#include <optional>
#include <string>

#include "falawn/position_opt.hpp"

namespace falawn {

enum class Architecture { FPA, FaSmall, FaLarge };

/// Display / CSV names: "FPA", "FA(5λ)", "FA(10λ)".
std::string architecture_name(Architecture arch);

enum class SweepAxis { Rate, BeampatternGain, LqrCost };

std::string axis_name(SweepAxis axis); // "rate", "beampattern_gain", "lqr_cost"

struct InvalidSpec : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One Monte Carlo sweep: the axis values replace the corresponding
/// requirement in the base config, every seed reuses one channel realization
/// across all values and architectures (common random numbers).
struct SweepSpec {
    SweepAxis axis = SweepAxis::Rate;
    std::vector<double> values; // rate: bps/Hz, beampattern: dBm, lqr: cost
    std::vector<Architecture> architectures{
        Architecture::FPA, Architecture::FaSmall, Architecture::FaLarge};
    int num_seeds = 10;
    std::uint64_t base_seed = 1;
    ScenarioConfig base_config;
    PSOConfig pso;

    void check() const; // throws InvalidSpec
};

struct SweepRow {
    double value = 0.0;
    Architecture architecture = Architecture::FPA;
    double mean_dbm = 0.0;
    double std_dbm = 0.0;
    double feasibility = 0.0; // fraction of seeds with a feasible point
};

struct SweepTable {
    SweepAxis axis = SweepAxis::Rate;
    std::vector<SweepRow> rows; // value-major, architecture-minor
};

/// Power of one (seed, value, architecture) cell, kept for invariant checks.
struct SweepCell {
    double power_mw = 0.0;
    bool feasible = false;
};

struct SweepResult {
    SweepTable table;
    // detail[seed][value_index][architecture_index], architecture order as in
    // the spec's architectures list
    std::vector<std::vector<std::vector<SweepCell>>> detail;
};

/// Deterministic PSO seed shared by every run of (scenario seed, arch), so a
/// sweep reuses the same search randomness across axis values.
std::uint64_t pso_seed_for(std::uint64_t scenario_seed, Architecture arch);

/// One scenario, one architecture: the FPA baseline or a PSO position search
/// seeded with the canonical layout plus any extra warm starts.
struct PointOutcome {
    double power_mw = 0.0;
    bool feasible = false;
    ArrayGeometry geometry;
    InnerReport inner_report;  // FPA path only
    long pso_evaluations = 0;  // FA paths only
    int pso_rounds = 0;
};

PointOutcome run_point(const Scenario &scenario, Architecture arch,
                       const PSOConfig &pso,
                       const std::vector<ArrayGeometry> &extra_warm_starts = {},
                       ThreadPool *pool = nullptr, InnerAudit *audit = nullptr);

SweepResult run_sweep_detailed(const SweepSpec &spec, ThreadPool *pool = nullptr,
                               InnerAudit *audit = nullptr);

SweepTable run_sweep(const SweepSpec &spec, ThreadPool *pool = nullptr,
                     InnerAudit *audit = nullptr);

/// CSV schema (bit-exact): header
///   axis,value,architecture,mean_dBm,std_dBm,feasibility
/// one row per (value, architecture), UTF-8, '.' decimal separator, six
/// significant digits.
void emit_csv(const SweepTable &table, const std::string &path);
std::string csv_text(const SweepTable &table);
SweepTable parse_csv(const std::string &path);

} // namespace falawn
