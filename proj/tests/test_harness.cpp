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

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "falawn/harness.hpp"

using namespace falawn;

namespace {

SweepSpec tiny_spec() {
    SweepSpec spec;
    spec.axis = SweepAxis::Rate;
    spec.values = {1.0, 2.0};
    spec.num_seeds = 2;
    spec.base_seed = 7;
    spec.base_config.num_tx = 4;
    spec.base_config.num_users = 2;
    spec.base_config.num_targets = 1;
    spec.base_config.num_plants = 1;
    spec.pso.swarm_size = 6;
    spec.pso.iterations = 6;
    return spec;
}

std::filesystem::path temp_file(const char *name) {
    return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_CASE("names") {
    CHECK(architecture_name(Architecture::FPA) == "FPA");
    CHECK(architecture_name(Architecture::FaSmall) == "FA(5λ)");
    CHECK(architecture_name(Architecture::FaLarge) == "FA(10λ)");
    CHECK(axis_name(SweepAxis::Rate) == "rate");
    CHECK(axis_name(SweepAxis::BeampatternGain) == "beampattern_gain");
    CHECK(axis_name(SweepAxis::LqrCost) == "lqr_cost");
}

TEST_CASE("spec validation") {
    SweepSpec spec = tiny_spec();
    spec.values = {};
    CHECK_THROWS_AS(run_sweep(spec), InvalidSpec);
    spec = tiny_spec();
    spec.values = {2.0, 1.0};
    CHECK_THROWS_AS(run_sweep(spec), InvalidSpec);
    spec = tiny_spec();
    spec.num_seeds = 0;
    CHECK_THROWS_AS(run_sweep(spec), InvalidSpec);
    spec = tiny_spec();
    spec.architectures = {};
    CHECK_THROWS_AS(run_sweep(spec), InvalidSpec);
}

TEST_CASE("architecture ordering holds cell-wise in a tiny sweep") {
    const SweepResult result = run_sweep_detailed(tiny_spec());
    for (const auto &per_seed : result.detail)
        for (const auto &per_value : per_seed) {
            REQUIRE(per_value.size() == 3);
            REQUIRE(per_value[0].feasible); // FPA
            REQUIRE(per_value[1].feasible); // FA(5λ)
            REQUIRE(per_value[2].feasible); // FA(10λ)
            CHECK(per_value[1].power_mw <= per_value[0].power_mw);
            CHECK(per_value[2].power_mw <= per_value[1].power_mw);
        }
}

TEST_CASE("per-seed power rises along the rate axis") {
    const SweepResult result = run_sweep_detailed(tiny_spec());
    for (const auto &per_seed : result.detail)
        for (std::size_t ai = 0; ai < 3; ++ai) {
            const double easy = per_seed[0][ai].power_mw;
            const double hard = per_seed[1][ai].power_mw;
            // 0.3 dB slack, same as the sweep-level contract
            CHECK(hard >= easy / std::pow(10.0, 0.03));
        }
}

TEST_CASE("single point sweep reduces to run_point") {
    SweepSpec spec = tiny_spec();
    spec.values = {1.5};
    spec.num_seeds = 1;
    spec.architectures = {Architecture::FPA};
    const SweepResult result = run_sweep_detailed(spec);
    REQUIRE(result.table.rows.size() == 1);

    Scenario scenario = sample_scenario(spec.base_config, spec.base_seed);
    for (auto &user : scenario.users)
        user.rate_req = 1.5;
    PSOConfig pso = spec.pso;
    pso.seed = pso_seed_for(spec.base_seed, Architecture::FPA);
    const PointOutcome point = run_point(scenario, Architecture::FPA, pso);
    CHECK(result.detail[0][0][0].power_mw == point.power_mw);
    CHECK(result.table.rows[0].mean_dbm ==
          doctest::Approx(10.0 * std::log10(point.power_mw)));
    CHECK(result.table.rows[0].std_dbm == 0.0);
    CHECK(result.table.rows[0].feasibility == 1.0);
}

TEST_CASE("lqr axis saturates and never raises power") {
    SweepSpec spec = tiny_spec();
    spec.axis = SweepAxis::LqrCost;
    spec.values = {0.5, 2.0, 40.0, 60.0};
    spec.num_seeds = 1;
    spec.architectures = {Architecture::FPA};
    const SweepResult result = run_sweep_detailed(spec);
    const auto &cells = result.detail[0];
    for (std::size_t vi = 1; vi < cells.size(); ++vi)
        CHECK(cells[vi][0].power_mw <=
              cells[vi - 1][0].power_mw * std::pow(10.0, 0.03));
    // the two largest ceilings should be essentially indistinguishable
    const double last = cells[3][0].power_mw;
    const double prev = cells[2][0].power_mw;
    CHECK(std::abs(10.0 * std::log10(last / prev)) <= 0.1);
}

TEST_CASE("all-zero requirements cost nothing under every architecture") {
    ScenarioConfig config;
    config.num_tx = 4;
    config.num_users = 1;
    config.num_targets = 0;
    config.num_plants = 0;
    config.rate_bps_hz = 0.0;
    const Scenario sc = sample_scenario(config, 9);
    PSOConfig pso;
    pso.swarm_size = 4;
    pso.iterations = 2;
    for (Architecture arch :
         {Architecture::FPA, Architecture::FaSmall, Architecture::FaLarge}) {
        pso.seed = pso_seed_for(9, arch);
        const PointOutcome point = run_point(sc, arch, pso);
        CHECK(point.feasible);
        CHECK(point.power_mw == 0.0);
    }
}

TEST_CASE("single-user powers follow the matched-filter law at each geometry") {
    ScenarioConfig config;
    config.num_tx = 4;
    config.num_users = 1;
    config.num_targets = 0;
    config.num_plants = 0;
    const Scenario sc = sample_scenario(config, 31);
    PSOConfig pso;
    pso.swarm_size = 6;
    pso.iterations = 6;

    const auto law = [&](const ArrayGeometry &g) {
        const ComplexVector h = channel(sc.users[0], g, sc.wavelength, sc.ref_gain);
        return rate_to_sinr(sc.users[0].rate_req) * sc.noise_mw / h.squaredNorm();
    };

    pso.seed = pso_seed_for(31, Architecture::FPA);
    const PointOutcome fpa = run_point(sc, Architecture::FPA, pso);
    CHECK(fpa.power_mw == doctest::Approx(law(fpa.geometry)).epsilon(1e-6));

    pso.seed = pso_seed_for(31, Architecture::FaSmall);
    const PointOutcome fa = run_point(sc, Architecture::FaSmall, pso);
    CHECK(fa.power_mw == doctest::Approx(law(fa.geometry)).epsilon(1e-6));
    CHECK(fa.power_mw <= fpa.power_mw);
}

TEST_CASE("csv") {
    SUBCASE("empty table prints only the header") {
        SweepTable table;
        CHECK(csv_text(table) ==
              "axis,value,architecture,mean_dBm,std_dBm,feasibility\n");
    }

    SUBCASE("round trip through a file preserves six significant digits") {
        SweepTable table;
        table.axis = SweepAxis::BeampatternGain;
        table.rows = {
            {-10.0, Architecture::FPA, 6.12345, 0.54321, 1.0},
            {-10.0, Architecture::FaSmall, 4.98765, 0.11111, 0.9},
            {-5.0, Architecture::FaLarge, 3.14159, 0.27182, 1.0},
        };
        const auto path = temp_file("falawn_roundtrip.csv");
        emit_csv(table, path.string());
        const SweepTable back = parse_csv(path.string());
        REQUIRE(back.rows.size() == table.rows.size());
        CHECK(back.axis == table.axis);
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            CHECK(back.rows[i].architecture == table.rows[i].architecture);
            CHECK(back.rows[i].value ==
                  doctest::Approx(table.rows[i].value).epsilon(1e-6));
            CHECK(back.rows[i].mean_dbm ==
                  doctest::Approx(table.rows[i].mean_dbm).epsilon(1e-6));
            CHECK(back.rows[i].std_dbm ==
                  doctest::Approx(table.rows[i].std_dbm).epsilon(1e-6));
            CHECK(back.rows[i].feasibility ==
                  doctest::Approx(table.rows[i].feasibility).epsilon(1e-6));
        }
        std::filesystem::remove(path);
    }

    SUBCASE("byte-identical for identical tables") {
        SweepTable table;
        table.axis = SweepAxis::Rate;
        table.rows = {{1.0, Architecture::FPA, 5.0, 0.1, 1.0}};
        CHECK(csv_text(table) == csv_text(table));
    }

    SUBCASE("unwritable path raises IoError") {
        SweepTable table;
        CHECK_THROWS_AS(emit_csv(table, "/nonexistent-dir/x.csv"), IoError);
    }
}

TEST_CASE("sweep output is identical across worker counts") {
    const SweepSpec spec = tiny_spec();
    std::vector<std::string> outputs;
    for (int workers : {1, 2, 8}) {
        ThreadPool pool(workers);
        outputs.push_back(csv_text(run_sweep(spec, &pool)));
    }
    CHECK(outputs[0] == outputs[1]);
    CHECK(outputs[0] == outputs[2]);
}

TEST_CASE("infeasible cells are excluded from means but tallied") {
    // no beams, positive sensing floor: every architecture fails
    SweepSpec spec;
    spec.axis = SweepAxis::BeampatternGain;
    spec.values = {-10.0};
    spec.num_seeds = 2;
    spec.base_config.num_tx = 4;
    spec.base_config.num_users = 0;
    spec.base_config.num_targets = 1;
    spec.base_config.num_plants = 0;
    spec.architectures = {Architecture::FPA};
    spec.pso.swarm_size = 2;
    spec.pso.iterations = 2;
    const SweepResult result = run_sweep_detailed(spec);
    REQUIRE(result.table.rows.size() == 1);
    CHECK(result.table.rows[0].feasibility == 0.0);
    CHECK(std::isnan(result.table.rows[0].mean_dbm));
}
