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

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <vector>

namespace falawn {

// Small dense second-order-cone program solved with a feasible-start
// log-barrier Newton method:
//
//   minimize   x'x
//   subject to ||A_i x + b_i||  <=  c_i'x + d_i      (second-order cones)
//              q_m'x  >=  r_m                        (half-spaces)
//
// Problems here are tiny (dim ~ 1e2, a handful of cones), so dense Newton
// with Cholesky factorization is the whole story.

struct SocConstraint {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::VectorXd c;
    double d = 0.0;
};

struct LinearConstraint {
    Eigen::VectorXd q;
    double r = 0.0;
};

struct SocpProblem {
    int dim = 0;
    std::vector<SocConstraint> cones;
    std::vector<LinearConstraint> halfspaces;

    /// Smallest slack over all constraints; > 0 means strictly feasible.
    double min_slack(const Eigen::VectorXd &x) const;
};

struct SocpOptions {
    double rel_gap = 1e-9;   // duality-gap bound relative to the objective
    double abs_gap = 1e-12;  // absolute duality-gap floor
    double barrier_growth = 25.0;
    int max_newton_steps = 2000;
    double initial_gap_hint = 0.0; // > 0: objective is within this of optimal
};

struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Interior point via phase-1 (auxiliary slack minimization). Throws
/// SolverFailure when the constraint set has empty interior.
Eigen::VectorXd find_strictly_feasible(const SocpProblem &problem);

/// Minimizes x'x over the problem's feasible set. When no start is supplied a
/// phase-1 run finds one. Every iterate stays strictly feasible, so the
/// returned point satisfies all constraints exactly.
Eigen::VectorXd solve_socp(const SocpProblem &problem,
                           std::optional<Eigen::VectorXd> strictly_feasible_start,
                           const SocpOptions &options = {});

} // namespace falawn
