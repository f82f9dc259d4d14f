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

#include <doctest.h>

#include "falawn/harness.hpp"
#include "falawn/position_opt.hpp"
#include "falawn/rng.hpp"

using namespace falawn;

namespace {

ScenarioConfig small_config() {
    ScenarioConfig config;
    config.num_tx = 4;
    config.num_users = 2;
    config.num_targets = 1;
    config.num_plants = 0;
    return config;
}

PSOConfig small_pso() {
    PSOConfig pso;
    pso.swarm_size = 8;
    pso.iterations = 10;
    pso.seed = 99;
    return pso;
}

} // namespace

TEST_CASE("spacing penalty") {
    const double d_min = 0.05;
    const double weight = 1e6;

    SUBCASE("grid at the spacing floor is penalty-free") {
        const Scenario sc = sample_scenario(ScenarioConfig{}, 1);
        const ArrayGeometry g = fpa_layout(sc);
        CHECK(spacing_penalty(g, sc.bounds.min_spacing, weight) == 0.0);
    }

    SUBCASE("one coincident pair costs weight * d_min^2") {
        ArrayGeometry g;
        g.positions = {Eigen::Vector2d(0.1, 0.1), Eigen::Vector2d(0.1, 0.1),
                       Eigen::Vector2d(0.4, 0.4)};
        const double penalty = spacing_penalty(g, d_min, weight);
        CHECK(penalty == doctest::Approx(weight * d_min * d_min));
    }

    SUBCASE("permutation invariant") {
        RandomStream rng(3);
        ArrayGeometry g;
        for (int i = 0; i < 5; ++i)
            g.positions.emplace_back(rng.uniform(0.0, 0.1), rng.uniform(0.0, 0.1));
        ArrayGeometry shuffled = g;
        std::swap(shuffled.positions[0], shuffled.positions[3]);
        std::swap(shuffled.positions[1], shuffled.positions[4]);
        CHECK(spacing_penalty(g, d_min, weight) ==
              doctest::Approx(spacing_penalty(shuffled, d_min, weight)));
    }
}

TEST_CASE("clamp_to_region") {
    SUBCASE("in-region points pass through") {
        std::vector<Eigen::Vector2d> pts{{0.1, 0.2}, {0.0, 0.5}};
        const auto out = clamp_to_region(pts, 0.5);
        CHECK(out[0] == pts[0]);
        CHECK(out[1] == pts[1]);
    }

    SUBCASE("negative coordinates project to zero") {
        const auto out = clamp_to_region({Eigen::Vector2d(-0.3, 0.7)}, 0.5);
        CHECK(out[0].x() == 0.0);
        CHECK(out[0].y() == 0.5);
    }

    SUBCASE("idempotent on random inputs") {
        RandomStream rng(8);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<Eigen::Vector2d> pts;
            for (int i = 0; i < 6; ++i)
                pts.emplace_back(rng.uniform(-1.0, 1.5), rng.uniform(-1.0, 1.5));
            const auto once = clamp_to_region(pts, 0.5);
            const auto twice = clamp_to_region(once, 0.5);
            for (std::size_t i = 0; i < pts.size(); ++i)
                CHECK(once[i] == twice[i]);
        }
    }
}

TEST_CASE("fitness") {
    const Scenario sc = sample_scenario(small_config(), 5);

    SUBCASE("spacing-feasible geometry reduces to the inner power") {
        const ArrayGeometry g = fpa_layout(sc);
        const double fit = fitness(g, sc);
        const double inner = solve_inner(g, sc).solution.total_power_mw;
        CHECK(fit == inner);
    }

    SUBCASE("coincident elements add a positive penalty") {
        ArrayGeometry g = fpa_layout(sc);
        g.positions[1] = g.positions[0];
        const double fit = fitness(g, sc);
        const double inner = solve_inner(g, sc).solution.total_power_mw;
        CHECK(fit > inner);
    }

    SUBCASE("deterministic") {
        const ArrayGeometry g = fpa_layout(sc);
        CHECK(fitness(g, sc) == fitness(g, sc));
    }
}

TEST_CASE("pso_optimize") {
    const Scenario sc = sample_scenario(small_config(), 11);
    const ArrayGeometry warm = fpa_layout(sc);

    SUBCASE("warm start bounds the result from above") {
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            PSOConfig pso = small_pso();
            pso.seed = seed;
            const PSOTrace trace = pso_optimize(sc, pso, {warm});
            const double warm_fitness = fitness(warm, sc, pso);
            CHECK(trace.best_fitness <= warm_fitness);
        }
    }

    SUBCASE("degenerate single-particle swarm returns the warm start") {
        PSOConfig pso;
        pso.swarm_size = 1;
        pso.iterations = 1;
        pso.seed = 4;
        const PSOTrace trace = pso_optimize(sc, pso, {warm});
        CHECK(trace.best_fitness == fitness(warm, sc, pso));
        REQUIRE(trace.best_geometry.num_elements() == warm.num_elements());
        for (int i = 0; i < warm.num_elements(); ++i)
            CHECK(trace.best_geometry.positions[static_cast<std::size_t>(i)] ==
                  warm.positions[static_cast<std::size_t>(i)]);
    }

    SUBCASE("identical seeds give identical traces") {
        const PSOConfig pso = small_pso();
        const PSOTrace a = pso_optimize(sc, pso, {warm});
        const PSOTrace b = pso_optimize(sc, pso, {warm});
        CHECK(a.best_fitness == b.best_fitness);
        REQUIRE(a.best_fitness_per_iter.size() == b.best_fitness_per_iter.size());
        for (std::size_t i = 0; i < a.best_fitness_per_iter.size(); ++i)
            CHECK(a.best_fitness_per_iter[i] == b.best_fitness_per_iter[i]);
        CHECK(a.evaluations == b.evaluations);
    }

    SUBCASE("trace is non-increasing and the result is certified feasible") {
        const PSOConfig pso = small_pso();
        const PSOTrace trace = pso_optimize(sc, pso, {warm});
        for (std::size_t i = 1; i < trace.best_fitness_per_iter.size(); ++i)
            CHECK(trace.best_fitness_per_iter[i] <=
                  trace.best_fitness_per_iter[i - 1]);
        CHECK(trace.best_geometry.in_region(1e-12));
        CHECK(trace.best_geometry.min_pairwise_distance() >=
              sc.bounds.min_spacing);
    }

    SUBCASE("thread pool does not change the outcome") {
        const PSOConfig pso = small_pso();
        const PSOTrace serial = pso_optimize(sc, pso, {warm});
        ThreadPool pool2(2);
        const PSOTrace parallel2 = pso_optimize(sc, pso, {warm}, &pool2);
        ThreadPool pool4(4);
        const PSOTrace parallel4 = pso_optimize(sc, pso, {warm}, &pool4);
        CHECK(serial.best_fitness == parallel2.best_fitness);
        CHECK(serial.best_fitness == parallel4.best_fitness);
        REQUIRE(serial.best_fitness_per_iter.size() ==
                parallel2.best_fitness_per_iter.size());
        for (std::size_t i = 0; i < serial.best_fitness_per_iter.size(); ++i) {
            CHECK(serial.best_fitness_per_iter[i] ==
                  parallel2.best_fitness_per_iter[i]);
            CHECK(serial.best_fitness_per_iter[i] ==
                  parallel4.best_fitness_per_iter[i]);
        }
    }

    SUBCASE("hopeless scenarios raise NoFeasibleGeometry") {
        // sensing floor with no beams to radiate: every inner solve fails
        ScenarioConfig config;
        config.num_tx = 4;
        config.num_users = 0;
        config.num_targets = 1;
        config.num_plants = 0;
        const Scenario hopeless = sample_scenario(config, 3);
        CHECK_THROWS_AS(pso_optimize(hopeless, small_pso(), {}),
                        NoFeasibleGeometry);
    }

    SUBCASE("config validation") {
        PSOConfig bad = small_pso();
        bad.swarm_size = 0;
        CHECK_THROWS_AS(pso_optimize(sc, bad, {}), std::invalid_argument);
        bad = small_pso();
        bad.velocity_cap = 0.0;
        CHECK_THROWS_AS(pso_optimize(sc, bad, {}), std::invalid_argument);
    }
}

TEST_CASE("early stall stop shortens the trace") {
    const Scenario sc = sample_scenario(small_config(), 21);
    PSOConfig pso = small_pso();
    pso.iterations = 100;
    pso.stall_rounds = 3;
    const PSOTrace trace = pso_optimize(sc, pso, {fpa_layout(sc)});
    CHECK(trace.best_fitness_per_iter.size() < 101);
}
