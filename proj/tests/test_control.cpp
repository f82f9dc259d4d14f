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

#include "falawn/control.hpp"
#include "falawn/rng.hpp"

using namespace falawn;

namespace {

ControlledPlant scalar_plant(double a, double b = 1.0, double q = 1.0,
                             double r = 1.0, double w = 1.0) {
    ControlledPlant plant;
    plant.A = Eigen::MatrixXd::Constant(1, 1, a);
    plant.B = Eigen::MatrixXd::Constant(1, 1, b);
    plant.Q = Eigen::MatrixXd::Constant(1, 1, q);
    plant.R = Eigen::MatrixXd::Constant(1, 1, r);
    plant.W = Eigen::MatrixXd::Constant(1, 1, w);
    return plant;
}

/// Independent classical Riccati iteration started from Q (no loss model).
Eigen::MatrixXd dare_reference(const Eigen::MatrixXd &A, const Eigen::MatrixXd &B,
                               const Eigen::MatrixXd &Q, const Eigen::MatrixXd &R) {
    Eigen::MatrixXd S = Q;
    for (int i = 0; i < 200000; ++i) {
        const Eigen::MatrixXd K =
            (R + B.transpose() * S * B).inverse() * B.transpose() * S * A;
        const Eigen::MatrixXd next =
            Q + A.transpose() * S * A - A.transpose() * S * B * K;
        if ((next - S).norm() < 1e-13)
            return next;
        S = next;
    }
    return S;
}

ControlledPlant random_stable_plant(RandomStream &rng, int dim) {
    ControlledPlant plant;
    Eigen::MatrixXd a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            a(i, j) = rng.normal();
    // scale the spectrum inside the unit circle
    const double radius = a.eigenvalues().cwiseAbs().maxCoeff();
    a *= 0.9 / std::max(radius, 1e-6);
    plant.A = a;
    plant.B = Eigen::MatrixXd::Zero(dim, 1);
    for (int i = 0; i < dim; ++i)
        plant.B(i, 0) = rng.normal();
    plant.Q = Eigen::MatrixXd::Identity(dim, dim);
    plant.R = Eigen::MatrixXd::Identity(1, 1);
    plant.W = 0.1 * Eigen::MatrixXd::Identity(dim, dim);
    return plant;
}

} // namespace

TEST_CASE("scalar golden-ratio fixed point at loss-free delivery") {
    // S = 1 + S - S^2/(1+S)  =>  S^2 = S + 1
    const RiccatiResult r = lossy_lqr_cost(scalar_plant(1.0), 1.0);
    REQUIRE(r.converged());
    CHECK(std::abs(r.cost - (1.0 + std::sqrt(5.0)) / 2.0) < 1e-8);
}

TEST_CASE("scalar critical probability for A = 2") {
    const ControlledPlant plant = scalar_plant(2.0);
    CHECK_FALSE(lossy_lqr_cost(plant, 0.70).converged());
    CHECK_FALSE(lossy_lqr_cost(plant, 0.74).converged());
    CHECK(lossy_lqr_cost(plant, 0.76).converged());
    CHECK(lossy_lqr_cost(plant, 0.90).converged());
}

TEST_CASE("scalar stable plant with total loss has the closed form") {
    // p = 0: S = Q + A^2 S  =>  S = 1/(1 - 0.25)
    const RiccatiResult r = lossy_lqr_cost(scalar_plant(0.5), 0.0);
    REQUIRE(r.converged());
    CHECK(r.cost == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("cost is non-increasing in the delivery probability") {
    RandomStream rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const ControlledPlant plant = random_stable_plant(rng, 1 + trial % 3);
        double previous = std::numeric_limits<double>::infinity();
        for (double p : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
            const RiccatiResult r = lossy_lqr_cost(plant, p);
            REQUIRE(r.converged()); // stable plants converge for every p
            CHECK(r.cost <= previous + 1e-8);
            previous = r.cost;
        }
    }
}

TEST_CASE("loss-free recursion matches the classical Riccati solution") {
    RandomStream rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const ControlledPlant plant = random_stable_plant(rng, 2);
        const RiccatiResult r = lossy_lqr_cost(plant, 1.0);
        REQUIRE(r.converged());
        const Eigen::MatrixXd S = dare_reference(plant.A, plant.B, plant.Q, plant.R);
        CHECK(std::abs(r.cost - (S * plant.W).trace()) < 1e-8 * (1.0 + r.cost));
    }
    const ControlledPlant di = make_double_integrator_plant();
    const RiccatiResult r = lossy_lqr_cost(di, 1.0);
    REQUIRE(r.converged());
    const Eigen::MatrixXd S = dare_reference(di.A, di.B, di.Q, di.R);
    CHECK(std::abs(r.cost - (S * di.W).trace()) < 1e-8);
}

TEST_CASE("divergence brackets the scalar stabilizability threshold") {
    const ControlledPlant plant = scalar_plant(2.0); // p_c = 1 - 1/4 = 0.75
    for (double p : {0.1, 0.3, 0.5, 0.6, 0.7, 0.74})
        CHECK_FALSE(lossy_lqr_cost(plant, p).converged());
    for (double p : {0.7511, 0.76, 0.8, 0.9, 1.0})
        CHECK(lossy_lqr_cost(plant, p).converged());
}

TEST_CASE("min_success_prob round-trips the forward map") {
    const ControlledPlant di = make_double_integrator_plant();
    for (double p : {0.05, 0.2, 0.5, 0.9}) {
        const RiccatiResult r = lossy_lqr_cost(di, p);
        REQUIRE(r.converged());
        const double p_min = min_success_prob(di, r.cost);
        CHECK(std::abs(p_min - p) < 1e-6);
    }
}

TEST_CASE("min_success_prob degenerate cases") {
    SUBCASE("stable plants tolerate total loss under a large ceiling") {
        CHECK(min_success_prob(scalar_plant(0.5), 1e6) == 0.0);
    }

    SUBCASE("golden-ratio ceiling sits exactly at p = 1") {
        const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
        const ControlledPlant plant = scalar_plant(1.0);
        CHECK(min_success_prob(plant, golden + 1e-9) == doctest::Approx(1.0));
        CHECK_THROWS_AS(min_success_prob(plant, golden - 1e-3), InfeasibleCost);
    }
}

TEST_CASE("packet error model") {
    CHECK(packet_error(0.0, 0.5) == 1.0);
    CHECK(packet_error(std::log(2.0) / 0.5, 0.5) == doctest::Approx(0.5));
    double previous = 1.0;
    for (double sinr : {0.5, 1.0, 2.0, 5.0, 20.0, 100.0}) {
        const double eps = packet_error(sinr, 0.5);
        CHECK(eps < previous);
        previous = eps;
    }
    CHECK(previous < 1e-20);
}

TEST_CASE("control SINR floor") {
    ControlledPlant di = make_double_integrator_plant();
    di.kappa = 1.0;

    SUBCASE("zero link requirement when even total loss is fine") {
        CHECK(control_sinr_floor(scalar_plant(0.5), 1e6) == 0.0);
    }

    SUBCASE("inverting the exponential at p = 1 - 1/e gives unit SINR") {
        // pick the ceiling that lands at p_min = 1 - 1/e
        const double p_target = 1.0 - std::exp(-1.0);
        const RiccatiResult r = lossy_lqr_cost(di, p_target);
        REQUIRE(r.converged());
        const double gamma = control_sinr_floor(di, r.cost);
        CHECK(gamma == doctest::Approx(1.0).epsilon(1e-4));
    }

    SUBCASE("floor never rises when the ceiling is relaxed") {
        double previous = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 20; ++i) {
            const double ceiling = 0.45 * std::pow(400.0, i / 19.0);
            const double gamma = control_sinr_floor(di, ceiling);
            CHECK(gamma <= previous + 1e-9);
            previous = gamma;
        }
    }

    SUBCASE("ceiling met only by loss-free delivery is unattainable") {
        const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
        CHECK_THROWS_AS(control_sinr_floor(scalar_plant(1.0), golden + 1e-9),
                        UnattainableReliability);
    }
}

TEST_CASE("plant validation rejects bad weighting matrices") {
    ControlledPlant plant = scalar_plant(1.0);
    plant.R = Eigen::MatrixXd::Constant(1, 1, 0.0); // not PD
    CHECK_THROWS_AS(lossy_lqr_cost(plant, 1.0), std::invalid_argument);

    ControlledPlant bad_dim = scalar_plant(1.0);
    bad_dim.B = Eigen::MatrixXd::Ones(2, 1);
    CHECK_THROWS_AS(lossy_lqr_cost(bad_dim, 1.0), std::invalid_argument);
}
