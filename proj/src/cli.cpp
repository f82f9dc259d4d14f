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

#include "falawn/cli.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "falawn/svg.hpp"
#include "falawn/units.hpp"

namespace falawn {

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
    return buf;
}

std::string g9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

/// Loads config (file or defaults), applies CLI overrides, range-checks.
/// Returns false after printing every issue.
bool load_config(const CliOptions &options, RunConfig &config, std::ostream &diag) {
    try {
        config = options.config_path.empty()
                     ? default_run_config()
                     : parse_config_file(options.config_path);
    } catch (const ConfigError &e) {
        diag << e.what() << "\n";
        return false;
    }
    if (options.seed)
        config.seed = *options.seed;
    if (options.out_dir)
        config.output.directory = *options.out_dir;
    if (options.plot)
        config.output.plot = true;
    if (options.no_timestamp)
        config.output.timestamp = false;

    const auto issues = validate_run_config(config);
    if (!issues.empty()) {
        diag << "configuration errors:\n";
        for (const auto &issue : issues)
            diag << "  " << issue << "\n";
        return false;
    }
    return true;
}

bool ensure_out_dir(const std::string &dir, std::ostream &diag) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        diag << "cannot create output directory '" << dir << "': " << ec.message()
             << "\n";
        return false;
    }
    return true;
}

struct ArchReport {
    Architecture arch;
    PointOutcome outcome;
    InnerSolve final_solve; // re-solved at the reported geometry
    ConstraintCheck check;
};

void describe_architecture(const ArchReport &r, std::ostream &out) {
    out << "architecture: " << architecture_name(r.arch) << "\n";
    if (!r.outcome.feasible) {
        out << "  status: infeasible\n";
        return;
    }
    out << "  status: feasible\n";
    out << "  transmit power: " << g9(r.outcome.power_mw) << " mW ("
        << g9(mw_to_dbm(std::max(r.outcome.power_mw, 1e-30))) << " dBm)\n";
    out << "  sca iterations: " << r.final_solve.report.iterations
        << ", trajectory points: " << r.final_solve.report.power_trajectory.size()
        << "\n";
    if (r.arch != Architecture::FPA)
        out << "  pso rounds: " << r.outcome.pso_rounds
            << ", fitness evaluations: " << r.outcome.pso_evaluations << "\n";
    out << "  element positions (m):\n";
    for (const auto &p : r.outcome.geometry.positions)
        out << "    (" << g9(p.x()) << ", " << g9(p.y()) << ")\n";
    out << "  constraint margins (relative):\n";
    for (const auto &e : r.check.entries) {
        const char *kind = e.kind == ConstraintCheck::Entry::Kind::UserSinr
                               ? "user SINR"
                               : e.kind == ConstraintCheck::Entry::Kind::PlantSinr
                                     ? "plant SINR"
                                     : "target gain";
        out << "    " << kind << " " << e.index << ": required " << g9(e.required)
            << ", achieved " << g9(e.achieved) << ", margin " << g9(e.rel_margin)
            << "\n";
    }

}

} // namespace

int cmd_run(const CliOptions &options, std::ostream &diag) {
    RunConfig config;
    if (!load_config(options, config, diag))
        return kExitConfig;
    if (!ensure_out_dir(config.output.directory, diag))
        return kExitConfig;

    ThreadPool pool(ThreadPool::resolve_worker_count(options.threads));
    const Scenario scenario = sample_scenario(config.scenario, config.seed);
    const ScenarioThresholds thresholds = compute_thresholds(scenario);

    std::vector<ArchReport> reports;
    std::optional<ArrayGeometry> small_geometry;
    for (Architecture arch :
         {Architecture::FPA, Architecture::FaSmall, Architecture::FaLarge}) {
        PSOConfig pso = config.pso;
        pso.seed = pso_seed_for(config.seed, arch);
        std::vector<ArrayGeometry> extra;
        if (arch == Architecture::FaLarge && small_geometry)
            extra.push_back(*small_geometry);

        ArchReport report{arch, run_point(scenario, arch, pso, extra, &pool), {}, {}};
        if (report.outcome.feasible) {
            if (arch == Architecture::FaSmall)
                small_geometry = report.outcome.geometry;
            if (thresholds.feasible) {
                const ProblemData problem =
                    build_problem(report.outcome.geometry, scenario, thresholds);
                report.final_solve = solve_inner(problem);
                report.check = verify_solution(problem, report.final_solve.solution);
            }
        }
        reports.push_back(std::move(report));
    }

    const std::string path = config.output.directory + "/run_report.txt";
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        diag << "cannot write report to " << path << "\n";
        return kExitConfig;
    }
    out << "falawn single-run report\n";
    out << "========================\n";
    if (config.output.timestamp)
        out << "generated: " << utc_timestamp() << " UTC\n";
    out << "seed: " << config.seed << "\n";
    out << "users: " << scenario.users.size() << ", targets: "
        << scenario.targets.size() << ", plants: " << scenario.plants.size()
        << ", elements: " << scenario.bounds.num_tx << "\n\n";
    if (!thresholds.feasible)
        out << "control-cost ceiling is unreachable: " << thresholds.reason << "\n\n";

    bool any_infeasible = false;
    for (const auto &r : reports) {
        describe_architecture(r, out);
        out << "\n";
        any_infeasible |= !r.outcome.feasible;
    }

    out << "summary (dBm):";
    for (const auto &r : reports) {
        out << " " << architecture_name(r.arch) << "=";
        if (r.outcome.feasible)
            out << g9(mw_to_dbm(std::max(r.outcome.power_mw, 1e-30)));
        else
            out << "infeasible";
    }
    out << "\n";
    diag << "report written to " << path << "\n";
    return any_infeasible ? kExitInfeasible : kExitOk;
}

int cmd_sweep(const CliOptions &options, std::ostream &diag) {
    RunConfig config;
    if (!load_config(options, config, diag))
        return kExitConfig;

    SweepSpec spec;
    if (options.axis == "rate") {
        spec.axis = SweepAxis::Rate;
        spec.values = config.sweep.rate_values;
    } else if (options.axis == "beampattern") {
        spec.axis = SweepAxis::BeampatternGain;
        spec.values = config.sweep.beampattern_values_dbm;
    } else if (options.axis == "lqr") {
        spec.axis = SweepAxis::LqrCost;
        spec.values = config.sweep.lqr_cost_values;
    } else {
        diag << "unknown sweep axis '" << options.axis
             << "' (expected rate | beampattern | lqr)\n";
        return kExitConfig;
    }
    spec.num_seeds = config.sweep.num_seeds;
    spec.base_seed = config.seed;
    spec.base_config = config.scenario;
    spec.pso = config.pso;

    if (!ensure_out_dir(config.output.directory, diag))
        return kExitConfig;

    ThreadPool pool(ThreadPool::resolve_worker_count(options.threads));
    SweepTable table;
    try {
        table = run_sweep(spec, &pool);
    } catch (const InvalidSpec &e) {
        diag << e.what() << "\n";
        return kExitConfig;
    }

    const std::string stem =
        config.output.directory + "/sweep_" + axis_name(spec.axis) +
        (config.output.timestamp ? "_" + utc_timestamp() : "");
    const std::string csv_path = stem + ".csv";
    try {
        emit_csv(table, csv_path);
    } catch (const IoError &e) {
        diag << e.what() << "\n";
        return kExitConfig;
    }
    diag << "sweep table written to " << csv_path << "\n";

    for (const auto &row : table.rows)
        if (row.feasibility < 0.5)
            diag << "warning: low feasibility (" << row.feasibility << ") at "
                 << axis_name(spec.axis) << "=" << row.value << " for "
                 << architecture_name(row.architecture) << "\n";

    if (config.output.plot) {
        ChartSpec chart;
        chart.y_label = "Transmit power (dBm)";
        switch (spec.axis) {
        case SweepAxis::Rate:
            chart.title = "Transmit power versus the required communication rate";
            chart.x_label = "Required communication rate (bps/Hz)";
            break;
        case SweepAxis::BeampatternGain:
            chart.title = "Transmit power versus the required beampattern gain";
            chart.x_label = "Required beampattern gain (dBm)";
            break;
        case SweepAxis::LqrCost:
            chart.title = "Transmit power versus the maximum allowable LQR cost";
            chart.x_label = "Maximum allowable LQR cost";
            break;
        }
        for (Architecture arch : spec.architectures) {
            ChartSeries series;
            series.name = architecture_name(arch);
            for (const auto &row : table.rows)
                if (row.architecture == arch)
                    series.points.emplace_back(row.value, row.mean_dbm);
            chart.series.push_back(std::move(series));
        }
        const std::string svg_path = stem + ".svg";
        write_svg_chart(chart, svg_path);
        diag << "chart written to " << svg_path << "\n";
    }
    return kExitOk;
}

int cmd_validate(const CliOptions &options, std::ostream &out) {
    RunConfig config;
    try {
        config = options.config_path.empty()
                     ? default_run_config()
                     : parse_config_file(options.config_path);
    } catch (const ConfigError &e) {
        out << e.what() << "\n";
        return kExitConfig;
    }
    if (options.seed)
        config.seed = *options.seed;
    if (options.out_dir)
        config.output.directory = *options.out_dir;

    const auto issues = validate_run_config(config);
    if (!issues.empty()) {
        out << "configuration errors:\n";
        for (const auto &issue : issues)
            out << "  " << issue << "\n";
        return kExitConfig;
    }
    out << "configuration ok\n";
    print_effective_config(config, out);
    return kExitOk;
}

} // namespace falawn
