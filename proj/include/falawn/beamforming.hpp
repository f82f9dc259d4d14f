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

#include <atomic>
#include <optional>
#include <vector>

#include "falawn/scenario.hpp"
#include "falawn/socp.hpp"

namespace falawn {

/// Transmit weight vectors for every communication user and controlled
/// plant, plus their aggregate power.
struct BeamformingSolution {
    std::vector<ComplexVector> comm_weights;
    std::vector<ComplexVector> ctrl_weights;
    double total_power_mw = 0.0;

    double recompute_power() const;
    int num_beams() const {
        return static_cast<int>(comm_weights.size() + ctrl_weights.size());
    }
    const ComplexVector &beam(int index) const;
    ComplexVector &beam(int index);

    static BeamformingSolution zeros(int num_tx, int num_comm, int num_ctrl);
    static BeamformingSolution make(std::vector<ComplexVector> comm,
                                    std::vector<ComplexVector> ctrl);
};

enum class InnerStatus { Feasible, Infeasible, IterationCap };

struct InnerReport {
    std::vector<double> power_trajectory; // accepted power per iteration, mW
    int iterations = 0;
    InnerStatus status = InnerStatus::Infeasible;
};

struct InnerSolve {
    BeamformingSolution solution;
    InnerReport report;
};

/// Geometry-specific problem data: channels, steering vectors, and every
/// constraint threshold in linear units. Built once per inner solve.
struct ProblemData {
    int num_tx = 0;
    double noise_mw = 1e-10;
    double power_cap_mw = 1e6; // 60 dBm feasibility cap

    std::vector<ComplexVector> user_channels;
    std::vector<double> user_sinr_floor; // 2^rate - 1
    std::vector<ComplexVector> plant_channels;
    std::vector<double> plant_sinr_floor; // from the control-cost inversion
    std::vector<ComplexVector> target_steering;
    std::vector<double> target_gain_floor_mw;

    int num_links() const {
        return static_cast<int>(user_channels.size() + plant_channels.size());
    }
    const ComplexVector &link_channel(int index) const;
    double link_sinr_floor(int index) const;
};

/// Plant-side SINR floors depend only on the scenario, not on the geometry,
/// so they are computed once and shared across all inner solves.
struct ScenarioThresholds {
    std::vector<double> plant_sinr_floor;
    bool feasible = true;
    std::string reason; // set when feasible == false
};

ScenarioThresholds compute_thresholds(const Scenario &scenario);

ProblemData build_problem(const ArrayGeometry &geometry, const Scenario &scenario,
                          const ScenarioThresholds &thresholds);

/// Shannon inversion of a spectral-efficiency requirement: 2^rate - 1.
double rate_to_sinr(double rate_bps_hz);

/// SINR of one beam at its receiver, treating every other beam as
/// interference.
double sinr_of(const ComplexVector &link_channel, const ComplexVector &own_weight,
               const std::vector<const ComplexVector *> &other_weights,
               double noise_mw);

/// Radiated power density toward a direction: sum of |a^H w|^2 over all
/// transmit beams.
double beampattern_gain(const ComplexVector &target_steering,
                        const BeamformingSolution &solution);

/// Per-constraint recomputation of SINRs and beampattern gains straight from
/// the channels; the arbiter used to certify solver output.
struct ConstraintCheck {
    struct Entry {
        enum class Kind { UserSinr, PlantSinr, TargetGain } kind;
        int index = 0;
        double required = 0.0;
        double achieved = 0.0;
        double rel_margin = 0.0; // (achieved - required) / required
    };
    std::vector<Entry> entries;
    double worst_rel_margin = 0.0;

    bool ok(double rel_tol = 1e-6) const { return worst_rel_margin >= -rel_tol; }
};

ConstraintCheck verify_solution(const ProblemData &problem,
                                const BeamformingSolution &solution);

/// One communication/control SINR constraint of the convex restriction.
struct SinrConeConstraint {
    ComplexVector channel;
    double min_sinr = 0.0;
    int beam = 0; // index of the serving beam
};

/// Tangent minorant of one beampattern-gain constraint, taken at the anchor:
///   2 * sum_j Re(gradient_j^H w_j) - anchor_gain >= gain_floor.
struct SensingLinearization {
    ComplexVector steering;
    std::vector<ComplexVector> gradient; // per beam: a a^H w_anchor
    double anchor_gain = 0.0;
    double gain_floor_mw = 0.0;

    double linearized_gain(const BeamformingSolution &solution) const;
};

/// Convex restriction of the power-minimization problem at a feasible anchor:
/// exact second-order-cone SINR constraints plus linearized sensing floors.
/// The anchor is feasible for its own restriction by construction.
struct ConvexSubproblem {
    int num_tx = 0;
    int num_comm = 0;
    int num_ctrl = 0;
    double noise_mw = 1e-10;
    std::vector<SinrConeConstraint> links;
    std::vector<SensingLinearization> sensing;
    BeamformingSolution anchor;
};

ConvexSubproblem subproblem_at(const ProblemData &problem,
                               const BeamformingSolution &anchor);

enum class ConvexMethod {
    Auto,          // duality fixed point when no sensing rows, else barrier
    InteriorPoint, // force the log-barrier cone solver
    DualityFixedPoint,
};

/// Solves one convex restriction. The returned point satisfies every
/// subproblem constraint (interior iterates) and attains the optimum within
/// 1e-6 relative. Throws SolverFailure on contradictory constraints.
BeamformingSolution convex_solve(const ConvexSubproblem &subproblem,
                                 const std::optional<BeamformingSolution> &warm = {},
                                 ConvexMethod method = ConvexMethod::Auto);

/// Constraint-satisfying start for the convex-restriction loop: interference
/// nulling beams scaled to their thresholds, target components folded into
/// the nearest beam, then a common scale-up until every constraint clears
/// with relative margin >= 1e-6. Empty when the power cap is exceeded.
std::optional<BeamformingSolution> feasibility_init(const ProblemData &problem);

/// Order-independent tallies over many inner solves; used by long-running
/// experiment audits.
struct InnerAudit {
    std::atomic<long> solves{0};
    std::atomic<long> feasible{0};
    std::atomic<long> infeasible{0};
    std::atomic<long> iteration_caps{0};
    std::atomic<long> trajectory_violations{0}; // rise > 1e-9 relative
    std::atomic<long> checker_failures{0};      // margin < -1e-6 relative

    void record(const ProblemData &problem, const InnerSolve &result);
};

/// Inner layer: minimum transmit power for fixed element positions, by
/// successive convex restriction. Stops at 1e-4 relative power change or 50
/// iterations; the power trajectory is non-increasing.
InnerSolve solve_inner(const ArrayGeometry &geometry, const Scenario &scenario);
InnerSolve solve_inner(const ProblemData &problem, InnerAudit *audit = nullptr);

/// Canonical fixed-position layout: a half-wavelength grid (5x2 when ten
/// elements) centered in the small movable region.
ArrayGeometry fpa_layout(const Scenario &scenario);

/// Inner solve at the canonical fixed layout; the comparison baseline.
InnerSolve fpa_baseline(const Scenario &scenario);

} // namespace falawn
