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

#include "falawn/socp.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace falawn {

namespace {

// Hyperbolic barrier for one cone: -log((c'x+d)^2 - ||Ax+b||^2), valid on the
// branch c'x + d > 0 which the line search preserves.
struct ConeState {
    double s = 0.0;         // c'x + d
    double f = 0.0;         // s^2 - ||u||^2
    Eigen::VectorXd u;      // A x + b
    Eigen::VectorXd grad_f; // 2 s c - 2 A'u
};

struct Workspace {
    const SocpProblem &prob;
    std::vector<Eigen::MatrixXd> ata; // per-cone A'A, fixed for the solve
    std::vector<ConeState> cones;
    std::vector<double> halfspace_slack;

    explicit Workspace(const SocpProblem &p) : prob(p) {
        ata.reserve(p.cones.size());
        for (const auto &cone : p.cones)
            ata.push_back(cone.A.transpose() * cone.A);
        cones.resize(p.cones.size());
        halfspace_slack.resize(p.halfspaces.size());
    }

    // Returns false when x leaves the barrier domain.
    bool refresh(const Eigen::VectorXd &x) {
        for (std::size_t i = 0; i < prob.cones.size(); ++i) {
            const auto &cone = prob.cones[i];
            auto &st = cones[i];
            st.s = cone.c.dot(x) + cone.d;
            if (st.s <= 0.0)
                return false;
            st.u = cone.A * x + cone.b;
            st.f = st.s * st.s - st.u.squaredNorm();
            if (st.f <= 0.0)
                return false;
        }
        for (std::size_t m = 0; m < prob.halfspaces.size(); ++m) {
            halfspace_slack[m] = prob.halfspaces[m].q.dot(x) - prob.halfspaces[m].r;
            if (halfspace_slack[m] <= 0.0)
                return false;
        }
        return true;
    }

    double barrier_value() const {
        double v = 0.0;
        for (const auto &st : cones)
            v -= std::log(st.f);
        for (double g : halfspace_slack)
            v -= std::log(g);
        return v;
    }

    void add_barrier_derivatives(Eigen::VectorXd &grad, Eigen::MatrixXd &hess) {
        for (std::size_t i = 0; i < prob.cones.size(); ++i) {
            const auto &cone = prob.cones[i];
            auto &st = cones[i];
            st.grad_f = 2.0 * st.s * cone.c - 2.0 * (cone.A.transpose() * st.u);
            const double inv_f = 1.0 / st.f;
            grad.noalias() -= inv_f * st.grad_f;
            hess.noalias() += (inv_f * inv_f) * (st.grad_f * st.grad_f.transpose());
            hess.noalias() += (2.0 * inv_f) * ata[i];
            hess.noalias() -= (2.0 * inv_f) * (cone.c * cone.c.transpose());
        }
        for (std::size_t m = 0; m < prob.halfspaces.size(); ++m) {
            const auto &hs = prob.halfspaces[m];
            const double inv_g = 1.0 / halfspace_slack[m];
            grad.noalias() -= inv_g * hs.q;
            hess.noalias() += (inv_g * inv_g) * (hs.q * hs.q.transpose());
        }
    }
};

struct Objective {
    // f0(x) = weight * x'x + lin'x  (lin selects the auxiliary slack variable
    // in phase-1, where the ridge weight only anchors the iterates)
    double quad_weight = 1.0;
    Eigen::VectorXd lin;

    double value(const Eigen::VectorXd &x) const {
        double v = quad_weight * x.squaredNorm();
        if (lin.size() > 0)
            v += lin.dot(x);
        return v;
    }
};

/// Damped Newton descent of t*f0 + barrier, starting strictly feasible.
/// Returns the number of steps spent.
int center(const SocpProblem &prob, Workspace &ws, const Objective &obj,
           double t, Eigen::VectorXd &x, int step_budget) {
    const int n = prob.dim;
    Eigen::VectorXd grad(n);
    Eigen::MatrixXd hess(n, n);
    int steps = 0;

    while (steps < step_budget) {
        if (!ws.refresh(x))
            throw SolverFailure("socp: iterate left the barrier domain");
        grad = 2.0 * t * obj.quad_weight * x;
        if (obj.lin.size() > 0)
            grad += t * obj.lin;
        hess = (2.0 * t * obj.quad_weight) * Eigen::MatrixXd::Identity(n, n);
        ws.add_barrier_derivatives(grad, hess);
        // relative ridge: keeps the factorization alive without distorting
        // the step on badly scaled problems
        hess.diagonal().array() +=
            1e-12 * hess.diagonal().maxCoeff() +
            std::numeric_limits<double>::min();

        Eigen::LLT<Eigen::MatrixXd> llt(hess);
        Eigen::VectorXd dir;
        if (llt.info() == Eigen::Success) {
            dir = -llt.solve(grad);
        } else {
            dir = -hess.ldlt().solve(grad);
        }
        const double decrement2 = -grad.dot(dir);
        ++steps;
        if (!(decrement2 > 0.0))
            break; // ascent or NaN: numerically centered
        if (0.5 * decrement2 <= 1e-11 * (1.0 + std::abs(t * obj.value(x))))
            break;

        const double base_value = t * obj.value(x) + ws.barrier_value();
        double alpha = 1.0;
        bool moved = false;
        while (alpha > 1e-14) {
            Eigen::VectorXd trial = x + alpha * dir;
            if (ws.refresh(trial)) {
                const double trial_value = t * obj.value(trial) + ws.barrier_value();
                if (trial_value <= base_value + 0.25 * alpha * grad.dot(dir)) {
                    x = std::move(trial);
                    moved = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!moved)
            break; // step too small to make progress: accept current center
    }
    return steps;
}

/// Row-normalized copy: every cone and halfspace scaled to unit size so the
/// barrier works near O(1) regardless of the caller's units.
SocpProblem normalized_copy(const SocpProblem &problem, double &scale_ref) {
    SocpProblem out;
    out.dim = problem.dim;
    scale_ref = 1.0;
    for (const auto &cone : problem.cones) {
        double nu = std::max(cone.c.norm(), std::abs(cone.d));
        nu = std::max(nu, cone.b.norm());
        for (int r = 0; r < cone.A.rows(); ++r)
            nu = std::max(nu, cone.A.row(r).norm());
        if (nu <= 0.0)
            nu = 1.0;
        SocConstraint scaled = cone;
        scaled.A /= nu;
        scaled.b /= nu;
        scaled.c /= nu;
        scaled.d /= nu;
        out.cones.push_back(std::move(scaled));
        scale_ref = std::max({scale_ref, cone.b.norm() / nu, std::abs(cone.d) / nu});
    }
    for (const auto &hs : problem.halfspaces) {
        const double nu = hs.q.norm() > 0.0 ? hs.q.norm() : 1.0;
        LinearConstraint scaled;
        scaled.q = hs.q / nu;
        scaled.r = hs.r / nu;
        out.halfspaces.push_back(std::move(scaled));
        scale_ref = std::max(scale_ref, std::abs(hs.r) / nu);
    }
    return out;
}

} // namespace

double SocpProblem::min_slack(const Eigen::VectorXd &x) const {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto &cone : cones)
        worst = std::min(worst, cone.c.dot(x) + cone.d - (cone.A * x + cone.b).norm());
    for (const auto &hs : halfspaces)
        worst = std::min(worst, hs.q.dot(x) - hs.r);
    return worst;
}

Eigen::VectorXd find_strictly_feasible(const SocpProblem &problem) {
    const int n = problem.dim;
    if (problem.cones.empty() && problem.halfspaces.empty())
        return Eigen::VectorXd::Zero(n);

    double scale_ref = 1.0;
    const SocpProblem normalized = normalized_copy(problem, scale_ref);

    // Auxiliary program over (x, s): minimize s with every constraint relaxed
    // by s; any point with s < 0 is strictly feasible for the original.
    SocpProblem aux;
    aux.dim = n + 1;
    for (const auto &cone : normalized.cones) {
        SocConstraint widened;
        widened.A.setZero(cone.A.rows(), n + 1);
        widened.A.leftCols(n) = cone.A;
        widened.b = cone.b;
        widened.c.setZero(n + 1);
        widened.c.head(n) = cone.c;
        widened.c[n] = 1.0;
        widened.d = cone.d;
        aux.cones.push_back(std::move(widened));
    }
    for (const auto &hs : normalized.halfspaces) {
        LinearConstraint widened;
        widened.q.setZero(n + 1);
        widened.q.head(n) = hs.q;
        widened.q[n] = 1.0;
        widened.r = hs.r;
        aux.halfspaces.push_back(std::move(widened));
    }

    double s0 = 1.0;
    for (const auto &cone : normalized.cones)
        s0 = std::max(s0, cone.b.norm() - cone.d + 1.0);
    for (const auto &hs : normalized.halfspaces)
        s0 = std::max(s0, hs.r + 1.0);

    const double m = static_cast<double>(aux.cones.size() + aux.halfspaces.size());
    double final_s = s0;

    // ladder of anchor strengths: a strong ridge keeps the search bounded;
    // weaker retries cover feasible sets that only open up far from 0
    for (double rho : {1e-4, 1e-8, 1e-12}) {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(n + 1);
        y[n] = 2.0 * s0;

        Objective obj;
        obj.quad_weight = rho / (scale_ref * scale_ref);
        obj.lin = Eigen::VectorXd::Zero(n + 1);
        obj.lin[n] = 1.0;

        Workspace ws(aux);
        if (!ws.refresh(y))
            throw SolverFailure("socp phase-1: failed to initialize");

        double t = 1.0 / std::max(1.0, 2.0 * s0);
        int budget = 4000;
        for (int stage = 0; stage < 60 && budget > 0; ++stage) {
            budget -= center(aux, ws, obj, t, y, budget);
            if (y[n] < -1e-7 * scale_ref)
                return y.head(n);
            if (m / t <= 1e-10 * (1.0 + std::abs(y[n])))
                break;
            t *= 20.0;
        }
        final_s = y[n];
        if (y[n] < 0.0 && problem.min_slack(y.head(n)) > 0.0)
            return y.head(n);
    }

    std::ostringstream os;
    os << "socp phase-1: no strictly feasible point (best slack margin "
       << -final_s << ")";
    throw SolverFailure(os.str());
}

Eigen::VectorXd solve_socp(const SocpProblem &problem,
                           std::optional<Eigen::VectorXd> start,
                           const SocpOptions &options) {
    const int n = problem.dim;
    if (problem.cones.empty() && problem.halfspaces.empty())
        return Eigen::VectorXd::Zero(n);

    Eigen::VectorXd x;
    if (start && start->size() == n && problem.min_slack(*start) > 0.0) {
        x = *start;
    } else {
        x = find_strictly_feasible(problem);
    }

    double scale_ref = 1.0;
    const SocpProblem normalized = normalized_copy(problem, scale_ref);

    Objective obj; // plain x'x
    Workspace ws(normalized);
    if (!ws.refresh(x))
        throw SolverFailure("socp: start is not strictly feasible");

    const double m =
        static_cast<double>(problem.cones.size() + problem.halfspaces.size());
    const double obj0 = std::max(obj.value(x), 1e-12);
    const double first_gap = options.initial_gap_hint > 0.0
                                 ? options.initial_gap_hint
                                 : 0.5 * obj0;
    double t = m / std::max(first_gap, 1e-15);

    int budget = options.max_newton_steps;
    for (int stage = 0; stage < 160 && budget > 0; ++stage) {
        budget -= center(normalized, ws, obj, t, x, budget);
        const double value = obj.value(x);
        if (m / t <= options.abs_gap + options.rel_gap * std::max(value, 1e-15))
            return x;
        t *= options.barrier_growth;
    }
    if (budget <= 0)
        throw SolverFailure("socp: Newton step budget exhausted");
    return x;
}

} // namespace falawn
