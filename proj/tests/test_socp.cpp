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

#include "falawn/socp.hpp"

using namespace falawn;

TEST_CASE("unconstrained minimum is the origin") {
    SocpProblem prob;
    prob.dim = 3;
    const Eigen::VectorXd x = solve_socp(prob, std::nullopt);
    CHECK(x.norm() == 0.0);
}

TEST_CASE("single halfspace: projection onto a plane") {
    // min x'x s.t. q'x >= 1 with unit q: optimum q, value 1
    SocpProblem prob;
    prob.dim = 4;
    LinearConstraint hs;
    hs.q = Eigen::VectorXd::Zero(4);
    hs.q[1] = 1.0;
    hs.r = 1.0;
    prob.halfspaces.push_back(hs);

    const Eigen::VectorXd x = solve_socp(prob, std::nullopt);
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(x.squaredNorm() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(prob.min_slack(x) >= 0.0);
}

TEST_CASE("second-order cone pins the scaled norm") {
    // min x'x s.t. ||(x0, x1)|| <= x2 - 1 has optimum at x2 = 1, x0 = x1 = 0
    SocpProblem prob;
    prob.dim = 3;
    SocConstraint cone;
    cone.A = Eigen::MatrixXd::Zero(2, 3);
    cone.A(0, 0) = 1.0;
    cone.A(1, 1) = 1.0;
    cone.b = Eigen::VectorXd::Zero(2);
    cone.c = Eigen::VectorXd::Zero(3);
    cone.c[2] = 1.0;
    cone.d = -1.0;
    prob.cones.push_back(cone);

    const Eigen::VectorXd x = solve_socp(prob, std::nullopt);
    CHECK(x[2] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(std::abs(x[0]) < 1e-5);
    CHECK(std::abs(x[1]) < 1e-5);
}

TEST_CASE("two halfspaces combine") {
    // min x'x s.t. x0 >= 2, x0 + x1 >= 5: optimum (3.5, 1.5) by KKT? check:
    // interior of first at the optimum of the second alone? optimum of
    //   min x'x s.t. x0 + x1 >= 5  is (2.5, 2.5) which satisfies x0 >= 2,
    // so the answer is (2.5, 2.5).
    SocpProblem prob;
    prob.dim = 2;
    LinearConstraint h1, h2;
    h1.q = Eigen::VectorXd::Zero(2);
    h1.q[0] = 1.0;
    h1.r = 2.0;
    h2.q = Eigen::VectorXd::Ones(2);
    h2.r = 5.0;
    prob.halfspaces = {h1, h2};

    const Eigen::VectorXd x = solve_socp(prob, std::nullopt);
    CHECK(x[0] == doctest::Approx(2.5).epsilon(1e-5));
    CHECK(x[1] == doctest::Approx(2.5).epsilon(1e-5));
}

TEST_CASE("warm start from a strictly feasible point is honored") {
    SocpProblem prob;
    prob.dim = 2;
    LinearConstraint hs;
    hs.q = Eigen::VectorXd::Ones(2);
    hs.r = 2.0;
    prob.halfspaces.push_back(hs);

    Eigen::VectorXd start(2);
    start << 5.0, 5.0;
    const Eigen::VectorXd x = solve_socp(prob, start);
    CHECK(x.squaredNorm() == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("phase-1 finds interior points and certifies infeasibility") {
    SUBCASE("feasible pair of halfspaces") {
        SocpProblem prob;
        prob.dim = 2;
        LinearConstraint h1, h2;
        h1.q = Eigen::VectorXd::Zero(2);
        h1.q[0] = 1.0;
        h1.r = 1.0;
        h2.q = Eigen::VectorXd::Zero(2);
        h2.q[1] = -1.0;
        h2.r = -3.0; // x1 <= 3
        prob.halfspaces = {h1, h2};
        const Eigen::VectorXd x = find_strictly_feasible(prob);
        CHECK(prob.min_slack(x) > 0.0);
    }

    SUBCASE("contradictory halfspaces throw SolverFailure") {
        SocpProblem prob;
        prob.dim = 2;
        LinearConstraint h1, h2;
        h1.q = Eigen::VectorXd::Zero(2);
        h1.q[0] = 1.0;
        h1.r = 1.0; // x0 >= 1
        h2.q = Eigen::VectorXd::Zero(2);
        h2.q[0] = -1.0;
        h2.r = 0.0; // x0 <= 0
        prob.halfspaces = {h1, h2};
        CHECK_THROWS_AS(find_strictly_feasible(prob), SolverFailure);
        CHECK_THROWS_AS(solve_socp(prob, std::nullopt), SolverFailure);
    }
}

TEST_CASE("iterates remain inside every constraint") {
    SocpProblem prob;
    prob.dim = 5;
    SocConstraint cone;
    cone.A = Eigen::MatrixXd::Random(3, 5);
    cone.b = Eigen::VectorXd::Zero(3);
    cone.c = Eigen::VectorXd::Zero(5);
    cone.c[4] = 1.0;
    cone.d = -0.5;
    prob.cones.push_back(cone);
    LinearConstraint hs;
    hs.q = Eigen::VectorXd::Ones(5);
    hs.r = 1.0;
    prob.halfspaces.push_back(hs);

    const Eigen::VectorXd x = solve_socp(prob, std::nullopt);
    CHECK(prob.min_slack(x) >= 0.0);
}
