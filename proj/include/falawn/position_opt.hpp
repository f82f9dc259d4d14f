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

#include <cstdint>

#include "falawn/beamforming.hpp"
#include "falawn/thread_pool.hpp"

namespace falawn {

/// Particle-swarm settings for the outer position search. Textbook global
/// best topology with linearly decayed inertia and a per-dimension velocity
/// clamp.
struct PSOConfig {
    int swarm_size = 30;
    int iterations = 100;
    double inertia_start = 0.9;
    double inertia_end = 0.4;
    double cognitive = 2.0;
    double social = 2.0;
    double velocity_cap = 0.2;       // fraction of the region side
    double penalty_weight = 1e6;     // mW per m^2 of squared spacing deficit
    double infeasible_fitness = 1e6; // sentinel mW when the inner solve fails
    std::uint64_t seed = 0;
    int stall_rounds = 25; // stop after this many rounds without improvement
                           // (0 disables the early stop)

    void check() const; // throws std::invalid_argument on bad settings
};

struct PSOTrace {
    std::vector<double> best_fitness_per_iter; // global best after each round
    ArrayGeometry best_geometry;               // spacing-feasible
    double best_fitness = 0.0;                 // fitness of best_geometry
    long evaluations = 0;
};

struct NoFeasibleGeometry : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sum of squared pairwise spacing deficits, scaled to milliwatts:
/// weight * sum_{i<j} max(0, min_spacing - d_ij)^2. Zero exactly when every
/// pair clears the spacing floor.
double spacing_penalty(const ArrayGeometry &geometry, double min_spacing,
                       double weight);

/// Componentwise projection onto [0, side]^2. Idempotent.
std::vector<Eigen::Vector2d> clamp_to_region(std::vector<Eigen::Vector2d> positions,
                                             double side);

/// Inner optimal power plus the spacing penalty; the sentinel stands in for
/// the power when the inner layer reports infeasible.
double fitness(const ArrayGeometry &geometry, const Scenario &scenario,
               const PSOConfig &config = {});

/// Outer layer: particle swarm over the 2*Tx element coordinates of the
/// region in scenario.bounds. The first warm_starts.size() particles start
/// exactly at the warm starts, so their fitness bounds the result from above.
/// The returned geometry always satisfies the region and spacing constraints
/// (a greedy repair pass runs when the incumbent does not).
/// Throws NoFeasibleGeometry when every evaluation hit the sentinel.
PSOTrace pso_optimize(const Scenario &scenario, const PSOConfig &config,
                      const std::vector<ArrayGeometry> &warm_starts,
                      ThreadPool *pool = nullptr, InnerAudit *audit = nullptr);

} // namespace falawn
