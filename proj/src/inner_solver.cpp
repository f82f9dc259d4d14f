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
//
// Inner layer of the two-layer optimizer: minimum-power transmit weights for
// fixed element positions. SINR floors are exact second-order-cone rows;
// beampattern floors enter through tangent minorants that get re-expanded
// each round (successive convex restriction). When every beampattern floor
// is slack at the SINR-only optimum, that optimum is certified globally
// optimal and the loop exits after a single round.

#include <cmath>
#include <sstream>

#include "falawn/beamforming.hpp"

namespace falawn {

namespace {

constexpr double kInitMargin = 1e-6;      // relative margin of the feasible start
constexpr double kScaStopRel = 1e-4;      // relative power change stop
constexpr int kScaMaxIterations = 50;
constexpr double kPowerCapMw = 1e6;       // 60 dBm

struct ActiveLink {
    int beam = 0;             // serving beam index
    ComplexVector scaled;     // channel divided by the noise std
    double min_sinr = 0.0;
};

/// Virtual-uplink fixed point for the pure SINR power-minimization problem.
/// Returns false when the link set cannot be served (uplink powers blow up)
/// or the iteration stalls; true fills per-active-link downlink beams whose
/// SINRs sit on their floors.
bool duality_power_min(int num_tx, const std::vector<ActiveLink> &links,
                       std::vector<ComplexVector> &beams) {
    const int count = static_cast<int>(links.size());
    beams.assign(static_cast<std::size_t>(count), ComplexVector::Zero(num_tx));
    if (count == 0)
        return true;

    ComplexMatrix basis(num_tx, count);
    for (int k = 0; k < count; ++k)
        basis.col(k) = links[static_cast<std::size_t>(k)].scaled;

    Eigen::VectorXd uplink = Eigen::VectorXd::Zero(count);
    ComplexMatrix cov(num_tx, num_tx);
    ComplexMatrix filtered(num_tx, count);

    const auto refresh = [&]() -> bool {
        cov = ComplexMatrix::Identity(num_tx, num_tx);
        for (int j = 0; j < count; ++j)
            cov.noalias() += uplink[j] * (basis.col(j) * basis.col(j).adjoint());
        Eigen::LLT<ComplexMatrix> llt(cov);
        if (llt.info() != Eigen::Success)
            return false;
        filtered = llt.solve(basis);
        return true;
    };

    bool converged = false;
    for (int iter = 0; iter < 3000; ++iter) {
        if (!refresh())
            return false;
        double rel = 0.0;
        for (int k = 0; k < count; ++k) {
            const double quad = basis.col(k).dot(filtered.col(k)).real();
            const double leave_one_out = 1.0 - uplink[k] * quad;
            if (!(quad > 0.0) || !(leave_one_out > 1e-15))
                return false;
            const double next =
                links[static_cast<std::size_t>(k)].min_sinr * leave_one_out / quad;
            rel = std::max(rel, std::abs(next - uplink[k]) /
                                    std::max(next, 1e-300));
            uplink[k] = next;
        }
        if (uplink.sum() > 1e16)
            return false; // below the feasibility boundary
        if (rel < 1e-12) {
            converged = true;
            break;
        }
    }
    if (!converged)
        return false;

    if (!refresh())
        return false;
    ComplexMatrix directions(num_tx, count);
    for (int k = 0; k < count; ++k) {
        const double norm = filtered.col(k).norm();
        if (!(norm > 0.0))
            return false;
        directions.col(k) = filtered.col(k) / norm;
    }

    // downlink powers that put every SINR exactly on its floor
    const ComplexMatrix cross = basis.adjoint() * directions; // (k,j): e_k^H u_j
    Eigen::MatrixXd balance(count, count);
    for (int k = 0; k < count; ++k)
        for (int j = 0; j < count; ++j) {
            const double g = std::norm(cross(k, j));
            balance(k, j) =
                (k == j) ? g / links[static_cast<std::size_t>(k)].min_sinr : -g;
        }
    const Eigen::VectorXd powers =
        balance.partialPivLu().solve(Eigen::VectorXd::Ones(count));
    if (!powers.allFinite() || powers.minCoeff() < -1e-9 * powers.cwiseAbs().maxCoeff())
        return false;

    for (int k = 0; k < count; ++k)
        beams[static_cast<std::size_t>(k)] =
            std::sqrt(std::max(powers[k], 0.0)) * directions.col(k);
    return true;
}

std::vector<ActiveLink> collect_active_links(const ProblemData &problem) {
    std::vector<ActiveLink> links;
    const double noise_std = std::sqrt(problem.noise_mw);
    for (int i = 0; i < problem.num_links(); ++i) {
        const double floor = problem.link_sinr_floor(i);
        if (floor > 0.0) {
            ActiveLink link;
            link.beam = i;
            link.scaled = problem.link_channel(i) / noise_std;
            link.min_sinr = floor;
            links.push_back(std::move(link));
        }
    }
    return links;
}

BeamformingSolution assemble_solution(const ProblemData &problem,
                                      const std::vector<ActiveLink> &links,
                                      const std::vector<ComplexVector> &beams) {
    BeamformingSolution sol = BeamformingSolution::zeros(
        problem.num_tx, static_cast<int>(problem.user_channels.size()),
        static_cast<int>(problem.plant_channels.size()));
    for (std::size_t k = 0; k < links.size(); ++k)
        sol.beam(links[k].beam) = beams[k];
    sol.total_power_mw = sol.recompute_power();
    return sol;
}

bool sensing_satisfied(const ProblemData &problem,
                       const BeamformingSolution &solution, double rel_slack) {
    for (std::size_t m = 0; m < problem.target_steering.size(); ++m) {
        const double floor = problem.target_gain_floor_mw[m];
        if (floor <= 0.0)
            continue;
        if (beampattern_gain(problem.target_steering[m], solution) <
            floor * (1.0 - rel_slack))
            return false;
    }
    return true;
}

/// Rotate each constrained beam so the serving inner product is real and
/// nonnegative. A pure phase change: power, SINRs and gains are untouched.
void phase_align(const ConvexSubproblem &sub, BeamformingSolution &sol) {
    for (const auto &link : sub.links) {
        const std::complex<double> inner = link.channel.dot(sol.beam(link.beam));
        const double mag = std::abs(inner);
        if (mag > 0.0)
            sol.beam(link.beam) *= std::conj(inner) / mag;
    }
}

// ---- realified cone program ------------------------------------------------

int beam_count(const ConvexSubproblem &sub) { return sub.num_comm + sub.num_ctrl; }

Eigen::VectorXd realify(const ConvexSubproblem &sub,
                        const BeamformingSolution &sol) {
    const int t = sub.num_tx;
    Eigen::VectorXd x(2 * t * beam_count(sub));
    for (int j = 0; j < beam_count(sub); ++j) {
        x.segment(2 * t * j, t) = sol.beam(j).real();
        x.segment(2 * t * j + t, t) = sol.beam(j).imag();
    }
    return x;
}

BeamformingSolution complexify(const ConvexSubproblem &sub,
                               const Eigen::VectorXd &x) {
    const int t = sub.num_tx;
    BeamformingSolution sol =
        BeamformingSolution::zeros(t, sub.num_comm, sub.num_ctrl);
    for (int j = 0; j < beam_count(sub); ++j) {
        sol.beam(j).real() = x.segment(2 * t * j, t);
        sol.beam(j).imag() = x.segment(2 * t * j + t, t);
    }
    sol.total_power_mw = sol.recompute_power();
    return sol;
}

SocpProblem realified_problem(const ConvexSubproblem &sub) {
    const int t = sub.num_tx;
    const int beams = beam_count(sub);
    const int dim = 2 * t * beams;
    const double noise_std = std::sqrt(sub.noise_mw);

    SocpProblem prob;
    prob.dim = dim;

    for (const auto &link : sub.links) {
        if (link.min_sinr <= 0.0)
            continue;
        const Eigen::VectorXd re = (link.channel / noise_std).real();
        const Eigen::VectorXd im = (link.channel / noise_std).imag();

        SocConstraint cone;
        cone.A.setZero(2 * (beams - 1) + 1, dim);
        cone.b.setZero(2 * (beams - 1) + 1);
        int row = 0;
        for (int j = 0; j < beams; ++j) {
            if (j == link.beam)
                continue;
            cone.A.block(row, 2 * t * j, 1, t) = re.transpose();
            cone.A.block(row, 2 * t * j + t, 1, t) = im.transpose();
            cone.A.block(row + 1, 2 * t * j, 1, t) = -im.transpose();
            cone.A.block(row + 1, 2 * t * j + t, 1, t) = re.transpose();
            row += 2;
        }
        cone.b[row] = 1.0; // unit noise after scaling

        cone.c.setZero(dim);
        const double inv_root = 1.0 / std::sqrt(link.min_sinr);
        cone.c.segment(2 * t * link.beam, t) = inv_root * re;
        cone.c.segment(2 * t * link.beam + t, t) = inv_root * im;
        cone.d = 0.0;
        prob.cones.push_back(std::move(cone));
    }

    for (const auto &sense : sub.sensing) {
        LinearConstraint half;
        half.q.setZero(dim);
        for (int j = 0; j < beams; ++j) {
            half.q.segment(2 * t * j, t) =
                2.0 * sense.gradient[static_cast<std::size_t>(j)].real();
            half.q.segment(2 * t * j + t, t) =
                2.0 * sense.gradient[static_cast<std::size_t>(j)].imag();
        }
        half.r = sense.gain_floor_mw + sense.anchor_gain;
        prob.halfspaces.push_back(std::move(half));
    }
    return prob;
}

InnerSolve infeasible_result(const ProblemData &problem) {
    InnerSolve out;
    out.solution = BeamformingSolution::zeros(
        problem.num_tx, static_cast<int>(problem.user_channels.size()),
        static_cast<int>(problem.plant_channels.size()));
    out.report.status = InnerStatus::Infeasible;
    out.report.iterations = 0;
    return out;
}

} // namespace

ConvexSubproblem subproblem_at(const ProblemData &problem,
                               const BeamformingSolution &anchor) {
    ConvexSubproblem sub;
    sub.num_tx = problem.num_tx;
    sub.num_comm = static_cast<int>(problem.user_channels.size());
    sub.num_ctrl = static_cast<int>(problem.plant_channels.size());
    sub.noise_mw = problem.noise_mw;
    sub.anchor = anchor;

    for (int i = 0; i < problem.num_links(); ++i) {
        if (problem.link_sinr_floor(i) <= 0.0)
            continue;
        SinrConeConstraint link;
        link.channel = problem.link_channel(i);
        link.min_sinr = problem.link_sinr_floor(i);
        link.beam = i;
        sub.links.push_back(std::move(link));
    }

    const int beams = sub.num_comm + sub.num_ctrl;
    for (std::size_t m = 0; m < problem.target_steering.size(); ++m) {
        if (problem.target_gain_floor_mw[m] <= 0.0)
            continue;
        const ComplexVector &a = problem.target_steering[m];
        SensingLinearization sense;
        sense.steering = a;
        sense.gain_floor_mw = problem.target_gain_floor_mw[m];
        sense.gradient.reserve(static_cast<std::size_t>(beams));
        double anchor_gain = 0.0;
        for (int j = 0; j < beams; ++j) {
            const std::complex<double> proj = a.dot(anchor.beam(j));
            sense.gradient.push_back(a * proj);
            anchor_gain += std::norm(proj);
        }
        sense.anchor_gain = anchor_gain;
        sub.sensing.push_back(std::move(sense));
    }
    return sub;
}

BeamformingSolution convex_solve(const ConvexSubproblem &subproblem,
                                 const std::optional<BeamformingSolution> &warm,
                                 ConvexMethod method) {
    if (method == ConvexMethod::DualityFixedPoint && !subproblem.sensing.empty())
        throw std::invalid_argument(
            "convex_solve: the fixed-point route cannot carry sensing rows");

    const bool use_duality =
        method == ConvexMethod::DualityFixedPoint ||
        (method == ConvexMethod::Auto && subproblem.sensing.empty());

    if (use_duality) {
        const double noise_std = std::sqrt(subproblem.noise_mw);
        std::vector<ActiveLink> links;
        for (const auto &row : subproblem.links) {
            if (row.min_sinr <= 0.0)
                continue;
            ActiveLink link;
            link.beam = row.beam;
            link.scaled = row.channel / noise_std;
            link.min_sinr = row.min_sinr;
            links.push_back(std::move(link));
        }
        std::vector<ComplexVector> beams;
        if (!duality_power_min(subproblem.num_tx, links, beams))
            throw SolverFailure("convex_solve: uplink fixed point diverged "
                                "(link set unserved or on the feasibility "
                                "boundary)");
        BeamformingSolution sol = BeamformingSolution::zeros(
            subproblem.num_tx, subproblem.num_comm, subproblem.num_ctrl);
        for (std::size_t k = 0; k < links.size(); ++k)
            sol.beam(links[k].beam) = beams[k];
        sol.total_power_mw = sol.recompute_power();
        return sol;
    }

    const SocpProblem prob = realified_problem(subproblem);
    SocpOptions options;
    options.rel_gap = 1e-9;

    std::optional<Eigen::VectorXd> start;
    if (warm) {
        BeamformingSolution aligned = *warm;
        phase_align(subproblem, aligned);
        // a small inflation turns a boundary-feasible anchor strictly interior
        for (int j = 0; j < beam_count(subproblem); ++j)
            aligned.beam(j) *= 1.001;
        Eigen::VectorXd x = realify(subproblem, aligned);
        if (prob.min_slack(x) > 0.0) {
            start = std::move(x);
            options.initial_gap_hint =
                std::max(0.05 * aligned.recompute_power(), 1e-12);
        }
    }

    const Eigen::VectorXd x = solve_socp(prob, start, options);
    return complexify(subproblem, x);
}

std::optional<BeamformingSolution> feasibility_init(const ProblemData &problem) {
    const int num_comm = static_cast<int>(problem.user_channels.size());
    const int num_ctrl = static_cast<int>(problem.plant_channels.size());
    const int beams = num_comm + num_ctrl;
    const int t = problem.num_tx;

    bool any_link = false;
    for (int i = 0; i < problem.num_links(); ++i)
        any_link |= problem.link_sinr_floor(i) > 0.0;
    bool any_sense = false;
    for (double floor : problem.target_gain_floor_mw)
        any_sense |= floor > 0.0;

    if (!any_link && !any_sense)
        return BeamformingSolution::zeros(t, num_comm, num_ctrl);
    if (beams == 0)
        return std::nullopt; // nothing radiates, sensing floors unreachable

    // interference-nulling directions across every link channel
    ComplexMatrix stacked(t, beams);
    for (int i = 0; i < beams; ++i)
        stacked.col(i) = problem.link_channel(i);
    ComplexMatrix gram = stacked.adjoint() * stacked;
    const double ridge = 1e-10 * (gram.trace().real() / std::max(beams, 1)) + 1e-300;
    gram += ridge * ComplexMatrix::Identity(beams, beams);
    ComplexMatrix nulling = stacked * gram.ldlt().solve(
                                          ComplexMatrix::Identity(beams, beams));

    BeamformingSolution sol = BeamformingSolution::zeros(t, num_comm, num_ctrl);
    for (int i = 0; i < beams; ++i) {
        const double floor = problem.link_sinr_floor(i);
        if (floor <= 0.0)
            continue;
        ComplexVector dir = nulling.col(i);
        if (dir.norm() < 1e-30)
            dir = problem.link_channel(i); // collinear channels: fall back
        const double dnorm = dir.norm();
        if (dnorm < 1e-300)
            return std::nullopt; // dead channel cannot meet a positive floor
        dir /= dnorm;
        const double coupling = std::norm(problem.link_channel(i).dot(dir));
        if (coupling <= 0.0)
            return std::nullopt;
        const double power =
            floor * (1.0 + kInitMargin) * problem.noise_mw / coupling;
        sol.beam(i) = std::sqrt(power) * dir;
    }

    // give orphaned sensing directions a component to grow from
    for (std::size_t m = 0; m < problem.target_steering.size(); ++m) {
        const double floor = problem.target_gain_floor_mw[m];
        if (floor <= 0.0)
            continue;
        const ComplexVector &a = problem.target_steering[m];
        if (beampattern_gain(a, sol) > 1e-12 * floor)
            continue;
        int nearest = static_cast<int>(m) % beams;
        double best = -1.0;
        for (int j = 0; j < beams; ++j) {
            const double hn = problem.link_channel(j).norm();
            if (hn <= 0.0)
                continue;
            const double corr = std::abs(a.dot(problem.link_channel(j))) / hn;
            if (corr > best) {
                best = corr;
                nearest = j;
            }
        }
        ComplexVector steered = a / a.norm();
        const ComplexVector &h = problem.link_channel(nearest);
        const std::complex<double> via_beam = h.dot(sol.beam(nearest));
        const std::complex<double> via_steered = h.dot(steered);
        if (std::abs(via_beam) > 0.0 && std::abs(via_steered) > 0.0)
            steered *= (via_beam / std::abs(via_beam)) *
                       std::conj(via_steered / std::abs(via_steered));
        const double base = sol.beam(nearest).norm();
        const double boost =
            base > 0.0 ? 0.1 * base
                       : std::sqrt(floor * (1.0 + kInitMargin) /
                                   std::max(a.squaredNorm(), 1.0));
        sol.beam(nearest) += boost * steered;
    }

    // common scale-up until every floor clears with the required margin
    for (int round = 0; round < 64; ++round) {
        double scale2 = 1.0;
        bool shape_failure = false;
        for (int i = 0; i < beams && !shape_failure; ++i) {
            const double floor = problem.link_sinr_floor(i);
            if (floor <= 0.0)
                continue;
            const ComplexVector &h = problem.link_channel(i);
            const double signal = std::norm(h.dot(sol.beam(i)));
            double interference = 0.0;
            for (int j = 0; j < beams; ++j)
                if (j != i)
                    interference += std::norm(h.dot(sol.beam(j)));
            const double target = floor * (1.0 + kInitMargin);
            const double headroom = signal - target * interference;
            if (headroom <= 0.0) {
                // interference-limited shape: strengthen the serving beam
                const ComplexVector &hc = problem.link_channel(i);
                ComplexVector aligned = hc / hc.norm();
                const std::complex<double> via = hc.dot(sol.beam(i));
                if (std::abs(via) > 0.0)
                    aligned *= via / std::abs(via);
                sol.beam(i) += (0.5 * sol.beam(i).norm() + 1e-9) * aligned;
                shape_failure = true;
                break;
            }
            scale2 = std::max(scale2, target * problem.noise_mw / headroom);
        }
        if (shape_failure)
            continue;
        for (std::size_t m = 0; m < problem.target_steering.size(); ++m) {
            const double floor = problem.target_gain_floor_mw[m];
            if (floor <= 0.0)
                continue;
            const double gain = beampattern_gain(problem.target_steering[m], sol);
            if (gain <= 0.0)
                return std::nullopt;
            scale2 = std::max(scale2, floor * (1.0 + kInitMargin) / gain);
        }

        const double scale = std::sqrt(scale2);
        if (scale > 1.0)
            for (int j = 0; j < beams; ++j)
                sol.beam(j) *= scale;
        sol.total_power_mw = sol.recompute_power();
        if (sol.total_power_mw > kPowerCapMw)
            return std::nullopt;
        if (scale <= 1.0)
            return sol; // all floors already cleared with margin
    }
    return std::nullopt;
}

InnerSolve solve_inner(const ProblemData &problem, InnerAudit *audit) {
    InnerSolve out;
    const int num_comm = static_cast<int>(problem.user_channels.size());
    const int num_ctrl = static_cast<int>(problem.plant_channels.size());

    bool any_sense = false;
    for (double floor : problem.target_gain_floor_mw)
        any_sense |= floor > 0.0;

    const std::vector<ActiveLink> active = collect_active_links(problem);

    if (active.empty() && !any_sense) {
        out.solution = BeamformingSolution::zeros(problem.num_tx, num_comm, num_ctrl);
        out.report.status = InnerStatus::Feasible;
        out.report.power_trajectory = {0.0};
        out.report.iterations = 0;
        if (audit)
            audit->record(problem, out);
        return out;
    }

    // SINR-only optimum first: when the beampattern floors are already slack
    // there, it is the global optimum of the full problem.
    bool duality_diverged = false;
    if (!active.empty()) {
        std::vector<ComplexVector> beams;
        if (duality_power_min(problem.num_tx, active, beams)) {
            BeamformingSolution sol = assemble_solution(problem, active, beams);
            if (!any_sense || sensing_satisfied(problem, sol, 1e-9)) {
                out.solution = std::move(sol);
                out.report.status = InnerStatus::Feasible;
                out.report.power_trajectory = {out.solution.total_power_mw};
                out.report.iterations = 1;
                if (audit)
                    audit->record(problem, out);
                return out;
            }
        } else {
            duality_diverged = true;
        }
    }

    auto init = feasibility_init(problem);
    if (!init) {
        out = infeasible_result(problem);
        if (audit)
            audit->record(problem, out);
        return out;
    }
    (void)duality_diverged; // the constructive start is the final arbiter

    BeamformingSolution current = std::move(*init);
    out.report.power_trajectory = {current.total_power_mw};
    out.report.status = InnerStatus::Feasible;

    for (int step = 1; step <= kScaMaxIterations; ++step) {
        const ConvexSubproblem sub = subproblem_at(problem, current);
        BeamformingSolution candidate;
        try {
            candidate = convex_solve(sub, current, ConvexMethod::Auto);
        } catch (const SolverFailure &) {
            break; // keep the current feasible iterate
        }
        out.report.iterations = step;
        const double previous = current.total_power_mw;
        if (!(candidate.total_power_mw < previous))
            break; // restriction is tight here
        current = std::move(candidate);
        out.report.power_trajectory.push_back(current.total_power_mw);
        if (previous - current.total_power_mw <= kScaStopRel * previous)
            break;
        if (step == kScaMaxIterations)
            out.report.status = InnerStatus::IterationCap;
    }

    out.solution = std::move(current);
    if (audit)
        audit->record(problem, out);
    return out;
}

InnerSolve solve_inner(const ArrayGeometry &geometry, const Scenario &scenario) {
    const ScenarioThresholds thresholds = compute_thresholds(scenario);
    if (!thresholds.feasible) {
        ProblemData stub;
        stub.num_tx = geometry.num_elements();
        stub.user_channels.assign(scenario.users.size(),
                                  ComplexVector::Zero(stub.num_tx));
        stub.plant_channels.assign(scenario.plants.size(),
                                   ComplexVector::Zero(stub.num_tx));
        return infeasible_result(stub);
    }
    return solve_inner(build_problem(geometry, scenario, thresholds));
}

} // namespace falawn
