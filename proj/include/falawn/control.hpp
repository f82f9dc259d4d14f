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
#include <stdexcept>

#include "falawn/model.hpp"

namespace falawn {

/// Discrete-time LTI plant whose actuation commands arrive over a lossy
/// downlink. The infinite-horizon LQR cost under Bernoulli command delivery
/// of probability p follows the modified Riccati recursion
///   S <- Q + A'SA - p * A'SB (R + B'SB)^-1 B'SA,   cost = tr(S W).
struct ControlledPlant {
    Eigen::MatrixXd A; // n x n state matrix
    Eigen::MatrixXd B; // n x m input matrix
    Eigen::MatrixXd Q; // n x n state weight, PSD
    Eigen::MatrixXd R; // m x m input weight, PD
    Eigen::MatrixXd W; // n x n process-noise covariance, PSD
    double max_control_cost = 10.58;
    CommUser link;      // control-downlink channel description
    double kappa = 0.5; // packet-error decay rate

    /// Throws std::invalid_argument when dimensions are inconsistent or the
    /// weighting matrices violate their definiteness requirements.
    void check() const;
};

/// Double-integrator per-axis UAV model: the stock plant used when a
/// scenario does not specify its own dynamics.
ControlledPlant make_double_integrator_plant(double step_seconds = 0.1,
                                             double noise_variance = 0.01);

enum class RiccatiStatus { Converged, Divergent };

struct RiccatiResult {
    RiccatiStatus status = RiccatiStatus::Divergent;
    double cost = 0.0; // valid when status == Converged

    bool converged() const { return status == RiccatiStatus::Converged; }
};

struct InfeasibleCost : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnattainableReliability : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Expected infinite-horizon LQR cost when each command packet is delivered
/// independently with probability p. Divergent signals that p lies below the
/// plant's stabilizability threshold (iterates blow past the norm cap).
RiccatiResult lossy_lqr_cost(const ControlledPlant &plant, double p);

/// Smallest delivery probability whose cost stays within max_cost, found by
/// bisection on the monotone cost map. Throws InfeasibleCost when even
/// loss-free delivery exceeds the ceiling.
double min_success_prob(const ControlledPlant &plant, double max_cost);

/// Packet error probability eps = exp(-kappa * sinr).
double packet_error(double sinr, double kappa);

/// Minimum control-link SINR (linear) that keeps the plant within max_cost:
/// gamma = -ln(1 - p_min) / kappa. Throws UnattainableReliability when only
/// p = 1 meets the ceiling (the exponential error model never reaches loss
/// probability zero at finite SINR).
double control_sinr_floor(const ControlledPlant &plant, double max_cost);

} // namespace falawn
