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

#include "falawn/control.hpp"

#include <cmath>

namespace falawn {

namespace {
constexpr double kConvergenceTol = 1e-10; // successive-iterate norm
constexpr double kDivergenceCap = 1e12;   // iterate norm blow-up cap
constexpr int kMaxIterations = 100000;
constexpr double kEigFloor = -1e-9; // PSD tolerance

bool is_psd(const Eigen::MatrixXd &m, double floor) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    return es.eigenvalues().minCoeff() >= floor;
}
} // namespace

void ControlledPlant::check() const {
    const auto n = A.rows();
    const auto m = B.cols();
    if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n ||
        R.rows() != m || R.cols() != m || W.rows() != n || W.cols() != n)
        throw std::invalid_argument("ControlledPlant: inconsistent dimensions");
    if (!is_psd(Q, kEigFloor))
        throw std::invalid_argument("ControlledPlant: Q must be PSD");
    if (!is_psd(R, 1e-12))
        throw std::invalid_argument("ControlledPlant: R must be PD");
    if (!is_psd(W, kEigFloor))
        throw std::invalid_argument("ControlledPlant: W must be PSD");
    if (kappa <= 0.0)
        throw std::invalid_argument("ControlledPlant: kappa must be > 0");
}

ControlledPlant make_double_integrator_plant(double step_seconds,
                                             double noise_variance) {
    ControlledPlant plant;
    plant.A.resize(2, 2);
    plant.A << 1.0, step_seconds, 0.0, 1.0;
    plant.B.resize(2, 1);
    plant.B << 0.0, step_seconds;
    plant.Q = Eigen::MatrixXd::Identity(2, 2);
    plant.R = Eigen::MatrixXd::Identity(1, 1);
    plant.W = noise_variance * Eigen::MatrixXd::Identity(2, 2);
    return plant;
}

RiccatiResult lossy_lqr_cost(const ControlledPlant &plant, double p) {
    plant.check();
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("lossy_lqr_cost: p must lie in [0, 1]");

    Eigen::MatrixXd S = plant.Q;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        const Eigen::MatrixXd AtS = plant.A.transpose() * S;
        const Eigen::MatrixXd gain_den = plant.R + plant.B.transpose() * S * plant.B;
        const Eigen::MatrixXd AtSB = AtS * plant.B;
        Eigen::MatrixXd next = plant.Q + AtS * plant.A -
                               p * AtSB * gain_den.ldlt().solve(AtSB.transpose());
        next = 0.5 * (next + next.transpose().eval()); // keep symmetric
        const double diff = (next - S).norm();
        S = next;
        if (S.norm() > kDivergenceCap)
            return {RiccatiStatus::Divergent, 0.0};
        if (diff <= kConvergenceTol)
            return {RiccatiStatus::Converged, (S * plant.W).trace()};
    }
    // iteration budget exhausted without meeting the tolerance: treat like
    // divergence so feasibility checks stay conservative
    return {RiccatiStatus::Divergent, 0.0};
}

double min_success_prob(const ControlledPlant &plant, double max_cost) {
    if (max_cost <= 0.0)
        throw std::invalid_argument("min_success_prob: max_cost must be > 0");

    const auto within = [&](double p) {
        const RiccatiResult r = lossy_lqr_cost(plant, p);
        return r.converged() && r.cost <= max_cost;
    };

    if (!within(1.0))
        throw InfeasibleCost("min_success_prob: cost ceiling unreachable even "
                             "with loss-free delivery");
    if (within(0.0))
        return 0.0;

    double lo = 0.0; // fails the ceiling
    double hi = 1.0; // meets the ceiling
    while (hi - lo > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        (within(mid) ? hi : lo) = mid;
    }
    return hi;
}

double packet_error(double sinr, double kappa) {
    if (sinr < 0.0)
        throw std::invalid_argument("packet_error: sinr must be >= 0");
    if (kappa <= 0.0)
        throw std::invalid_argument("packet_error: kappa must be > 0");
    return std::exp(-kappa * sinr);
}

double control_sinr_floor(const ControlledPlant &plant, double max_cost) {
    const double p_min = min_success_prob(plant, max_cost);
    if (p_min <= 0.0)
        return 0.0;
    if (p_min >= 1.0)
        throw UnattainableReliability(
            "control_sinr_floor: ceiling requires loss-free delivery, which "
            "the exponential error model never attains at finite SINR");
    return -std::log(1.0 - p_min) / plant.kappa;
}

} // namespace falawn
