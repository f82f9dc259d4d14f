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

#include "falawn/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "falawn/rng.hpp"
#include "falawn/units.hpp"

namespace falawn {

namespace {

constexpr std::uint64_t kPsoSeedStream = 0xa57; // per (seed, architecture)

int arch_id(Architecture arch) {
    switch (arch) {
    case Architecture::FPA:
        return 0;
    case Architecture::FaSmall:
        return 1;
    case Architecture::FaLarge:
        return 2;
    }
    return -1;
}

void apply_axis_value(Scenario &scenario, SweepAxis axis, double value) {
    switch (axis) {
    case SweepAxis::Rate:
        for (auto &user : scenario.users)
            user.rate_req = value;
        break;
    case SweepAxis::BeampatternGain:
        for (auto &target : scenario.targets)
            target.gain_floor_mw = dbm_to_mw(value);
        break;
    case SweepAxis::LqrCost:
        for (auto &plant : scenario.plants)
            plant.max_control_cost = value;
        break;
    }
}

/// Value indices ordered hardest requirement first, so each later (easier)
/// point inherits the harder point's geometry as a warm start and the
/// per-seed power stays monotone along the axis by construction.
std::vector<int> processing_order(SweepAxis axis, int count) {
    std::vector<int> order(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        order[static_cast<std::size_t>(i)] =
            axis == SweepAxis::LqrCost ? i : count - 1 - i;
    return order;
}

std::string format_sig(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

double clamped_dbm(double power_mw) {
    return mw_to_dbm(std::max(power_mw, 1e-30));
}

} // namespace

std::string architecture_name(Architecture arch) {
    switch (arch) {
    case Architecture::FPA:
        return "FPA";
    case Architecture::FaSmall:
        return "FA(5λ)";
    case Architecture::FaLarge:
        return "FA(10λ)";
    }
    return "?";
}

std::string axis_name(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::Rate:
        return "rate";
    case SweepAxis::BeampatternGain:
        return "beampattern_gain";
    case SweepAxis::LqrCost:
        return "lqr_cost";
    }
    return "?";
}

std::uint64_t pso_seed_for(std::uint64_t scenario_seed, Architecture arch) {
    return mix_seed(scenario_seed, kPsoSeedStream,
                    static_cast<std::uint64_t>(arch_id(arch)));
}

void SweepSpec::check() const {
    if (values.empty())
        throw InvalidSpec("sweep: values must be non-empty");
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] > values[i - 1]))
            throw InvalidSpec("sweep: values must be strictly increasing");
    if (architectures.empty())
        throw InvalidSpec("sweep: architectures must be non-empty");
    if (num_seeds < 1)
        throw InvalidSpec("sweep: num_seeds must be >= 1");
    const auto violations = base_config.validate();
    if (!violations.empty())
        throw InvalidSpec("sweep: invalid base config: " + violations.front());
    pso.check();
}

PointOutcome run_point(const Scenario &scenario, Architecture arch,
                       const PSOConfig &pso,
                       const std::vector<ArrayGeometry> &extra_warm_starts,
                       ThreadPool *pool, InnerAudit *audit) {
    PointOutcome out;
    if (arch == Architecture::FPA) {
        out.geometry = fpa_layout(scenario);
        const ScenarioThresholds thresholds = compute_thresholds(scenario);
        if (!thresholds.feasible)
            return out;
        const ProblemData problem =
            build_problem(out.geometry, scenario, thresholds);
        const InnerSolve inner = solve_inner(problem, audit);
        out.inner_report = inner.report;
        out.feasible = inner.report.status != InnerStatus::Infeasible;
        out.power_mw = inner.solution.total_power_mw;
        return out;
    }

    Scenario sized = scenario;
    sized.bounds.region_side =
        arch == Architecture::FaSmall ? scenario.region_small : scenario.region_large;

    std::vector<ArrayGeometry> warm;
    warm.push_back(fpa_layout(scenario));
    for (const auto &g : extra_warm_starts)
        warm.push_back(g);

    try {
        PSOTrace trace = pso_optimize(sized, pso, warm, pool, audit);
        out.feasible = true;
        out.power_mw = trace.best_fitness;
        out.geometry = trace.best_geometry;
        out.pso_evaluations = trace.evaluations;
        out.pso_rounds = static_cast<int>(trace.best_fitness_per_iter.size()) - 1;
    } catch (const NoFeasibleGeometry &) {
        out.feasible = false;
        out.geometry = fpa_layout(scenario);
    }
    return out;
}

SweepResult run_sweep_detailed(const SweepSpec &spec, ThreadPool *pool,
                               InnerAudit *audit) {
    spec.check();
    const int num_values = static_cast<int>(spec.values.size());
    const int num_archs = static_cast<int>(spec.architectures.size());

    SweepResult result;
    result.table.axis = spec.axis;
    result.detail.assign(
        static_cast<std::size_t>(spec.num_seeds),
        std::vector<std::vector<SweepCell>>(
            static_cast<std::size_t>(num_values),
            std::vector<SweepCell>(static_cast<std::size_t>(num_archs))));

    const auto seed_task = [&](int s) {
        const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(s);
        const Scenario base = sample_scenario(spec.base_config, seed);

        // geometry found at the previously processed (harder) value, per arch
        std::vector<std::optional<ArrayGeometry>> chained(
            static_cast<std::size_t>(num_archs));

        for (int vi : processing_order(spec.axis, num_values)) {
            Scenario point = base;
            apply_axis_value(point, spec.axis,
                             spec.values[static_cast<std::size_t>(vi)]);

            std::optional<ArrayGeometry> small_best_here;
            for (int ai = 0; ai < num_archs; ++ai) {
                const Architecture arch =
                    spec.architectures[static_cast<std::size_t>(ai)];
                PSOConfig pso = spec.pso;
                pso.seed = pso_seed_for(seed, arch);

                std::vector<ArrayGeometry> extra;
                if (arch == Architecture::FaLarge && small_best_here)
                    extra.push_back(*small_best_here);
                if (arch != Architecture::FPA &&
                    chained[static_cast<std::size_t>(ai)])
                    extra.push_back(*chained[static_cast<std::size_t>(ai)]);

                const PointOutcome outcome =
                    run_point(point, arch, pso, extra, pool, audit);
                result.detail[static_cast<std::size_t>(s)]
                             [static_cast<std::size_t>(vi)]
                             [static_cast<std::size_t>(ai)] = {outcome.power_mw,
                                                               outcome.feasible};
                if (outcome.feasible) {
                    chained[static_cast<std::size_t>(ai)] = outcome.geometry;
                    if (arch == Architecture::FaSmall)
                        small_best_here = outcome.geometry;
                }
            }
        }
    };

    if (pool)
        pool->parallel_indexed(spec.num_seeds, seed_task);
    else
        for (int s = 0; s < spec.num_seeds; ++s)
            seed_task(s);

    for (int vi = 0; vi < num_values; ++vi)
        for (int ai = 0; ai < num_archs; ++ai) {
            SweepRow row;
            row.value = spec.values[static_cast<std::size_t>(vi)];
            row.architecture = spec.architectures[static_cast<std::size_t>(ai)];
            std::vector<double> dbm;
            for (int s = 0; s < spec.num_seeds; ++s) {
                const SweepCell &cell = result.detail[static_cast<std::size_t>(s)]
                                                     [static_cast<std::size_t>(vi)]
                                                     [static_cast<std::size_t>(ai)];
                if (cell.feasible)
                    dbm.push_back(clamped_dbm(cell.power_mw));
            }
            row.feasibility =
                static_cast<double>(dbm.size()) / static_cast<double>(spec.num_seeds);
            if (dbm.empty()) {
                row.mean_dbm = std::nan("");
                row.std_dbm = std::nan("");
            } else {
                double mean = 0.0;
                for (double v : dbm)
                    mean += v;
                mean /= static_cast<double>(dbm.size());
                double var = 0.0;
                for (double v : dbm)
                    var += (v - mean) * (v - mean);
                row.mean_dbm = mean;
                row.std_dbm = dbm.size() > 1
                                  ? std::sqrt(var / static_cast<double>(dbm.size() - 1))
                                  : 0.0;
            }
            result.table.rows.push_back(row);
        }
    return result;
}

SweepTable run_sweep(const SweepSpec &spec, ThreadPool *pool, InnerAudit *audit) {
    return run_sweep_detailed(spec, pool, audit).table;
}

std::string csv_text(const SweepTable &table) {
    std::ostringstream os;
    os << "axis,value,architecture,mean_dBm,std_dBm,feasibility\n";
    const std::string axis = axis_name(table.axis);
    for (const auto &row : table.rows)
        os << axis << ',' << format_sig(row.value) << ','
           << architecture_name(row.architecture) << ',' << format_sig(row.mean_dbm)
           << ',' << format_sig(row.std_dbm) << ',' << format_sig(row.feasibility)
           << '\n';
    return os.str();
}

void emit_csv(const SweepTable &table, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("emit_csv: cannot open " + path);
    out << csv_text(table);
    if (!out)
        throw IoError("emit_csv: write failed for " + path);
}

SweepTable parse_csv(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("parse_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) ||
        line != "axis,value,architecture,mean_dBm,std_dBm,feasibility")
        throw IoError("parse_csv: bad header in " + path);

    SweepTable table;
    bool axis_set = false;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ','))
            fields.push_back(field);
        if (fields.size() != 6)
            throw IoError("parse_csv: malformed row in " + path);

        if (!axis_set) {
            for (SweepAxis axis : {SweepAxis::Rate, SweepAxis::BeampatternGain,
                                   SweepAxis::LqrCost})
                if (axis_name(axis) == fields[0]) {
                    table.axis = axis;
                    axis_set = true;
                }
            if (!axis_set)
                throw IoError("parse_csv: unknown axis " + fields[0]);
        }

        SweepRow row;
        row.value = std::stod(fields[1]);
        bool arch_ok = false;
        for (Architecture arch : {Architecture::FPA, Architecture::FaSmall,
                                  Architecture::FaLarge})
            if (architecture_name(arch) == fields[2]) {
                row.architecture = arch;
                arch_ok = true;
            }
        if (!arch_ok)
            throw IoError("parse_csv: unknown architecture " + fields[2]);
        row.mean_dbm = std::stod(fields[3]);
        row.std_dbm = std::stod(fields[4]);
        row.feasibility = std::stod(fields[5]);
        table.rows.push_back(row);
    }
    return table;
}

} // namespace falawn
