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

#include "falawn/position_opt.hpp"

#include <algorithm>
#include <cmath>

#include "falawn/rng.hpp"

namespace falawn {

namespace {

constexpr std::uint64_t kParticleStream = 0x50534f; // "PSO"
constexpr double kSpacingPad = 1e-9; // relative pad when restoring spacing

struct EvalOutcome {
    double fitness = 0.0;
    double penalty = 0.0;
    bool inner_feasible = false;
};

ArrayGeometry to_geometry(const Eigen::VectorXd &flat, const GeometryBounds &bounds) {
    ArrayGeometry g;
    g.region_side = bounds.region_side;
    g.min_spacing = bounds.min_spacing;
    g.positions.resize(static_cast<std::size_t>(bounds.num_tx));
    for (int i = 0; i < bounds.num_tx; ++i)
        g.positions[static_cast<std::size_t>(i)] =
            Eigen::Vector2d(flat[2 * i], flat[2 * i + 1]);
    return g;
}

Eigen::VectorXd to_flat(const ArrayGeometry &g) {
    Eigen::VectorXd flat(2 * g.num_elements());
    for (int i = 0; i < g.num_elements(); ++i) {
        flat[2 * i] = g.positions[static_cast<std::size_t>(i)].x();
        flat[2 * i + 1] = g.positions[static_cast<std::size_t>(i)].y();
    }
    return flat;
}

EvalOutcome evaluate(const ArrayGeometry &geometry, const Scenario &scenario,
                     const ScenarioThresholds &thresholds, const PSOConfig &config,
                     InnerAudit *audit) {
    EvalOutcome out;
    out.penalty = spacing_penalty(geometry, scenario.bounds.min_spacing,
                                  config.penalty_weight);
    if (!thresholds.feasible) {
        out.fitness = config.infeasible_fitness + out.penalty;
        return out;
    }
    const ProblemData problem = build_problem(geometry, scenario, thresholds);
    const InnerSolve inner = solve_inner(problem, audit);
    out.inner_feasible = inner.report.status != InnerStatus::Infeasible;
    out.fitness = (out.inner_feasible ? inner.solution.total_power_mw
                                      : config.infeasible_fitness) +
                  out.penalty;
    return out;
}

/// Deterministic greedy repair: push the worst violating pair apart until
/// every pairwise distance clears the (padded) spacing floor.
bool repair_spacing(std::vector<Eigen::Vector2d> &positions, double min_spacing,
                    double side) {
    const double floor = min_spacing * (1.0 + kSpacingPad);
    const int n = static_cast<int>(positions.size());
    for (int sweep = 0; sweep < 400; ++sweep) {
        int worst_i = -1, worst_j = -1;
        double worst_d = floor;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double d = (positions[static_cast<std::size_t>(i)] -
                                  positions[static_cast<std::size_t>(j)])
                                     .norm();
                if (d < worst_d) {
                    worst_d = d;
                    worst_i = i;
                    worst_j = j;
                }
            }
        if (worst_i < 0)
            return true;

        auto &a = positions[static_cast<std::size_t>(worst_i)];
        auto &b = positions[static_cast<std::size_t>(worst_j)];
        Eigen::Vector2d dir = a - b;
        const double d = dir.norm();
        if (d < 1e-12) {
            // coincident pair: separate along a fixed pair-dependent angle
            const double angle =
                2.399963229728653 * (worst_i * n + worst_j + 1); // golden angle
            dir = Eigen::Vector2d(std::cos(angle), std::sin(angle));
        } else {
            dir /= d;
        }
        const double push = 0.5 * (floor - d) + 1e-12 + floor * 1e-6;
        a += push * dir;
        b -= push * dir;
        const auto clamp01 = [side](Eigen::Vector2d &p) {
            p.x() = std::clamp(p.x(), 0.0, side);
            p.y() = std::clamp(p.y(), 0.0, side);
        };
        clamp01(a);
        clamp01(b);
    }
    return false;
}

} // namespace

void PSOConfig::check() const {
    if (swarm_size < 1)
        throw std::invalid_argument("PSOConfig: swarm_size must be >= 1");
    if (iterations < 1)
        throw std::invalid_argument("PSOConfig: iterations must be >= 1");
    if (!(velocity_cap > 0.0) || velocity_cap > 1.0)
        throw std::invalid_argument("PSOConfig: velocity_cap must be in (0, 1]");
    if (!(penalty_weight > 0.0))
        throw std::invalid_argument("PSOConfig: penalty_weight must be > 0");
    if (stall_rounds < 0)
        throw std::invalid_argument("PSOConfig: stall_rounds must be >= 0");
}

double spacing_penalty(const ArrayGeometry &geometry, double min_spacing,
                       double weight) {
    double total = 0.0;
    const int n = geometry.num_elements();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = (geometry.positions[static_cast<std::size_t>(i)] -
                              geometry.positions[static_cast<std::size_t>(j)])
                                 .norm();
            const double deficit = std::max(0.0, min_spacing - d);
            total += deficit * deficit;
        }
    return weight * total;
}

std::vector<Eigen::Vector2d> clamp_to_region(std::vector<Eigen::Vector2d> positions,
                                             double side) {
    for (auto &p : positions) {
        p.x() = std::clamp(p.x(), 0.0, side);
        p.y() = std::clamp(p.y(), 0.0, side);
    }
    return positions;
}

double fitness(const ArrayGeometry &geometry, const Scenario &scenario,
               const PSOConfig &config) {
    return evaluate(geometry, scenario, compute_thresholds(scenario), config,
                    nullptr)
        .fitness;
}

PSOTrace pso_optimize(const Scenario &scenario, const PSOConfig &config,
                      const std::vector<ArrayGeometry> &warm_starts,
                      ThreadPool *pool, InnerAudit *audit) {
    config.check();
    const GeometryBounds &bounds = scenario.bounds;
    const double side = bounds.region_side;
    const double vmax = config.velocity_cap * side;
    const int dims = 2 * bounds.num_tx;
    const int swarm = config.swarm_size;
    const ScenarioThresholds thresholds = compute_thresholds(scenario);

    std::vector<RandomStream> streams;
    streams.reserve(static_cast<std::size_t>(swarm));
    for (int i = 0; i < swarm; ++i)
        streams.emplace_back(
            mix_seed(config.seed, kParticleStream, static_cast<std::uint64_t>(i)));

    std::vector<Eigen::VectorXd> position(static_cast<std::size_t>(swarm));
    std::vector<Eigen::VectorXd> velocity(static_cast<std::size_t>(swarm));
    for (int i = 0; i < swarm; ++i) {
        auto &rng = streams[static_cast<std::size_t>(i)];
        if (i < static_cast<int>(warm_starts.size())) {
            ArrayGeometry warm = warm_starts[static_cast<std::size_t>(i)];
            warm.positions = clamp_to_region(std::move(warm.positions), side);
            position[static_cast<std::size_t>(i)] = to_flat(warm);
            velocity[static_cast<std::size_t>(i)] = Eigen::VectorXd::Zero(dims);
        } else {
            Eigen::VectorXd p(dims), v(dims);
            for (int d = 0; d < dims; ++d)
                p[d] = rng.uniform(0.0, side);
            for (int d = 0; d < dims; ++d)
                v[d] = rng.uniform(-vmax, vmax);
            position[static_cast<std::size_t>(i)] = std::move(p);
            velocity[static_cast<std::size_t>(i)] = std::move(v);
        }
    }

    PSOTrace trace;
    std::vector<EvalOutcome> outcome(static_cast<std::size_t>(swarm));
    const auto evaluate_swarm = [&]() {
        const auto task = [&](int i) {
            outcome[static_cast<std::size_t>(i)] =
                evaluate(to_geometry(position[static_cast<std::size_t>(i)], bounds),
                         scenario, thresholds, config, audit);
        };
        if (pool)
            pool->parallel_indexed(swarm, task);
        else
            for (int i = 0; i < swarm; ++i)
                task(i);
        trace.evaluations += swarm;
    };

    evaluate_swarm();

    std::vector<Eigen::VectorXd> personal_best = position;
    std::vector<double> personal_fit(static_cast<std::size_t>(swarm));
    for (int i = 0; i < swarm; ++i)
        personal_fit[static_cast<std::size_t>(i)] =
            outcome[static_cast<std::size_t>(i)].fitness;

    Eigen::VectorXd global_best;
    double global_fit = std::numeric_limits<double>::infinity();
    double global_penalty = 0.0;
    bool any_inner_feasible = false;
    bool have_spacing_feasible = false;
    double best_spacing_fit = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_spacing_pos;

    const auto absorb = [&](int i) {
        const auto &res = outcome[static_cast<std::size_t>(i)];
        any_inner_feasible |= res.inner_feasible;
        if (res.fitness < global_fit) {
            global_fit = res.fitness;
            global_best = position[static_cast<std::size_t>(i)];
            global_penalty = res.penalty;
        }
        if (res.inner_feasible && res.penalty == 0.0 &&
            res.fitness < best_spacing_fit) {
            best_spacing_fit = res.fitness;
            best_spacing_pos = position[static_cast<std::size_t>(i)];
            have_spacing_feasible = true;
        }
    };
    for (int i = 0; i < swarm; ++i)
        absorb(i);
    trace.best_fitness_per_iter.push_back(global_fit);

    int stall = 0;
    for (int round = 1; round <= config.iterations; ++round) {
        const double frac = config.iterations > 1
                                ? static_cast<double>(round - 1) /
                                      static_cast<double>(config.iterations - 1)
                                : 0.0;
        const double inertia =
            config.inertia_start + (config.inertia_end - config.inertia_start) * frac;

        for (int i = 0; i < swarm; ++i) {
            auto &rng = streams[static_cast<std::size_t>(i)];
            auto &vel = velocity[static_cast<std::size_t>(i)];
            auto &pos = position[static_cast<std::size_t>(i)];
            const auto &pbest = personal_best[static_cast<std::size_t>(i)];
            for (int d = 0; d < dims; ++d) {
                const double r1 = rng.uniform();
                const double r2 = rng.uniform();
                double v = inertia * vel[d] +
                           config.cognitive * r1 * (pbest[d] - pos[d]) +
                           config.social * r2 * (global_best[d] - pos[d]);
                v = std::clamp(v, -vmax, vmax);
                vel[d] = v;
                pos[d] = std::clamp(pos[d] + v, 0.0, side);
            }
        }

        evaluate_swarm();
        const double previous_best = global_fit;
        for (int i = 0; i < swarm; ++i) {
            if (outcome[static_cast<std::size_t>(i)].fitness <
                personal_fit[static_cast<std::size_t>(i)]) {
                personal_fit[static_cast<std::size_t>(i)] =
                    outcome[static_cast<std::size_t>(i)].fitness;
                personal_best[static_cast<std::size_t>(i)] =
                    position[static_cast<std::size_t>(i)];
            }
            absorb(i);
        }
        trace.best_fitness_per_iter.push_back(global_fit);

        if (config.stall_rounds > 0) {
            if (global_fit < previous_best * (1.0 - 1e-6))
                stall = 0;
            else if (++stall >= config.stall_rounds)
                break;
        }
    }

    if (!any_inner_feasible)
        throw NoFeasibleGeometry(
            "pso_optimize: every fitness evaluation hit the infeasible sentinel");

    // certify the reported geometry: restore spacing if the incumbent is
    // penalized, then keep whichever spacing-feasible candidate is best
    bool have_final = false;
    double final_fit = std::numeric_limits<double>::infinity();
    Eigen::VectorXd final_pos;
    if (global_penalty == 0.0) {
        final_fit = global_fit;
        final_pos = global_best;
        have_final = true;
    } else {
        ArrayGeometry incumbent = to_geometry(global_best, bounds);
        if (repair_spacing(incumbent.positions, bounds.min_spacing, side)) {
            const EvalOutcome repaired =
                evaluate(incumbent, scenario, thresholds, config, audit);
            trace.evaluations += 1;
            any_inner_feasible |= repaired.inner_feasible;
            if (repaired.inner_feasible && repaired.penalty == 0.0) {
                final_fit = repaired.fitness;
                final_pos = to_flat(incumbent);
                have_final = true;
            }
        }
    }
    if (have_spacing_feasible && best_spacing_fit < final_fit) {
        final_fit = best_spacing_fit;
        final_pos = best_spacing_pos;
        have_final = true;
    }
    if (!have_final)
        throw NoFeasibleGeometry(
            "pso_optimize: found no spacing-feasible geometry with a feasible "
            "inner solve");

    trace.best_geometry = to_geometry(final_pos, bounds);
    trace.best_fitness = final_fit;
    return trace;
}

} // namespace falawn
