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

#include "falawn/beamforming.hpp"

#include <cmath>
#include <limits>

namespace falawn {

double BeamformingSolution::recompute_power() const {
    double p = 0.0;
    for (const auto &w : comm_weights)
        p += w.squaredNorm();
    for (const auto &w : ctrl_weights)
        p += w.squaredNorm();
    return p;
}

const ComplexVector &BeamformingSolution::beam(int index) const {
    const int k = static_cast<int>(comm_weights.size());
    return index < k ? comm_weights[static_cast<std::size_t>(index)]
                     : ctrl_weights[static_cast<std::size_t>(index - k)];
}

ComplexVector &BeamformingSolution::beam(int index) {
    const int k = static_cast<int>(comm_weights.size());
    return index < k ? comm_weights[static_cast<std::size_t>(index)]
                     : ctrl_weights[static_cast<std::size_t>(index - k)];
}

BeamformingSolution BeamformingSolution::zeros(int num_tx, int num_comm,
                                               int num_ctrl) {
    BeamformingSolution s;
    s.comm_weights.assign(static_cast<std::size_t>(num_comm),
                          ComplexVector::Zero(num_tx));
    s.ctrl_weights.assign(static_cast<std::size_t>(num_ctrl),
                          ComplexVector::Zero(num_tx));
    s.total_power_mw = 0.0;
    return s;
}

BeamformingSolution BeamformingSolution::make(std::vector<ComplexVector> comm,
                                              std::vector<ComplexVector> ctrl) {
    BeamformingSolution s;
    s.comm_weights = std::move(comm);
    s.ctrl_weights = std::move(ctrl);
    s.total_power_mw = s.recompute_power();
    return s;
}

const ComplexVector &ProblemData::link_channel(int index) const {
    const int k = static_cast<int>(user_channels.size());
    return index < k ? user_channels[static_cast<std::size_t>(index)]
                     : plant_channels[static_cast<std::size_t>(index - k)];
}

double ProblemData::link_sinr_floor(int index) const {
    const int k = static_cast<int>(user_channels.size());
    return index < k ? user_sinr_floor[static_cast<std::size_t>(index)]
                     : plant_sinr_floor[static_cast<std::size_t>(index - k)];
}

double rate_to_sinr(double rate_bps_hz) {
    if (rate_bps_hz < 0.0)
        throw std::invalid_argument("rate_to_sinr: rate must be >= 0");
    return std::exp2(rate_bps_hz) - 1.0;
}

double sinr_of(const ComplexVector &link_channel, const ComplexVector &own_weight,
               const std::vector<const ComplexVector *> &other_weights,
               double noise_mw) {
    if (noise_mw <= 0.0)
        throw std::invalid_argument("sinr_of: noise power must be > 0");
    const double signal = std::norm(link_channel.dot(own_weight));
    double interference = 0.0;
    for (const auto *w : other_weights)
        interference += std::norm(link_channel.dot(*w));
    return signal / (interference + noise_mw);
}

double beampattern_gain(const ComplexVector &target_steering,
                        const BeamformingSolution &solution) {
    double gain = 0.0;
    for (const auto &w : solution.comm_weights)
        gain += std::norm(target_steering.dot(w));
    for (const auto &w : solution.ctrl_weights)
        gain += std::norm(target_steering.dot(w));
    return gain;
}

double SensingLinearization::linearized_gain(
    const BeamformingSolution &solution) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < gradient.size(); ++j)
        acc += 2.0 * gradient[j].dot(solution.beam(static_cast<int>(j))).real();
    return acc - anchor_gain;
}

namespace {

ConstraintCheck::Entry make_entry(ConstraintCheck::Entry::Kind kind, int index,
                                  double required, double achieved) {
    ConstraintCheck::Entry e;
    e.kind = kind;
    e.index = index;
    e.required = required;
    e.achieved = achieved;
    e.rel_margin =
        required > 0.0 ? (achieved - required) / required : 0.0;
    return e;
}

} // namespace

ConstraintCheck verify_solution(const ProblemData &problem,
                                const BeamformingSolution &solution) {
    ConstraintCheck check;
    const int links = problem.num_links();
    for (int i = 0; i < links; ++i) {
        const ComplexVector &h = problem.link_channel(i);
        const double signal = std::norm(h.dot(solution.beam(i)));
        double interference = 0.0;
        for (int j = 0; j < links; ++j)
            if (j != i)
                interference += std::norm(h.dot(solution.beam(j)));
        const double sinr = signal / (interference + problem.noise_mw);
        const bool is_user = i < static_cast<int>(problem.user_channels.size());
        check.entries.push_back(make_entry(
            is_user ? ConstraintCheck::Entry::Kind::UserSinr
                    : ConstraintCheck::Entry::Kind::PlantSinr,
            is_user ? i : i - static_cast<int>(problem.user_channels.size()),
            problem.link_sinr_floor(i), sinr));
    }
    for (std::size_t m = 0; m < problem.target_steering.size(); ++m)
        check.entries.push_back(
            make_entry(ConstraintCheck::Entry::Kind::TargetGain,
                       static_cast<int>(m), problem.target_gain_floor_mw[m],
                       beampattern_gain(problem.target_steering[m], solution)));

    check.worst_rel_margin = std::numeric_limits<double>::infinity();
    for (const auto &e : check.entries)
        check.worst_rel_margin = std::min(check.worst_rel_margin, e.rel_margin);
    if (check.entries.empty())
        check.worst_rel_margin = 0.0;
    return check;
}

ScenarioThresholds compute_thresholds(const Scenario &scenario) {
    ScenarioThresholds th;
    th.plant_sinr_floor.reserve(scenario.plants.size());
    for (std::size_t n = 0; n < scenario.plants.size(); ++n) {
        try {
            th.plant_sinr_floor.push_back(
                control_sinr_floor(scenario.plants[n], scenario.plants[n].max_control_cost));
        } catch (const InfeasibleCost &e) {
            th.feasible = false;
            th.reason = e.what();
            return th;
        } catch (const UnattainableReliability &e) {
            th.feasible = false;
            th.reason = e.what();
            return th;
        }
    }
    return th;
}

ProblemData build_problem(const ArrayGeometry &geometry, const Scenario &scenario,
                          const ScenarioThresholds &thresholds) {
    ProblemData pr;
    pr.num_tx = geometry.num_elements();
    pr.noise_mw = scenario.noise_mw;

    pr.user_channels.reserve(scenario.users.size());
    pr.user_sinr_floor.reserve(scenario.users.size());
    for (const auto &user : scenario.users) {
        pr.user_channels.push_back(
            channel(user, geometry, scenario.wavelength, scenario.ref_gain));
        pr.user_sinr_floor.push_back(rate_to_sinr(user.rate_req));
    }

    pr.plant_channels.reserve(scenario.plants.size());
    for (const auto &plant : scenario.plants)
        pr.plant_channels.push_back(
            channel(plant.link, geometry, scenario.wavelength, scenario.ref_gain));
    pr.plant_sinr_floor = thresholds.plant_sinr_floor;

    pr.target_steering.reserve(scenario.targets.size());
    pr.target_gain_floor_mw.reserve(scenario.targets.size());
    for (const auto &target : scenario.targets) {
        pr.target_steering.push_back(steering_vector(
            geometry, target.elevation, target.azimuth, scenario.wavelength));
        pr.target_gain_floor_mw.push_back(target.gain_floor_mw);
    }
    return pr;
}

void InnerAudit::record(const ProblemData &problem, const InnerSolve &result) {
    solves.fetch_add(1, std::memory_order_relaxed);
    switch (result.report.status) {
    case InnerStatus::Feasible:
        feasible.fetch_add(1, std::memory_order_relaxed);
        break;
    case InnerStatus::Infeasible:
        infeasible.fetch_add(1, std::memory_order_relaxed);
        break;
    case InnerStatus::IterationCap:
        iteration_caps.fetch_add(1, std::memory_order_relaxed);
        break;
    }
    const auto &traj = result.report.power_trajectory;
    for (std::size_t i = 1; i < traj.size(); ++i)
        if (traj[i] > traj[i - 1] * (1.0 + 1e-9))
            trajectory_violations.fetch_add(1, std::memory_order_relaxed);
    if (result.report.status != InnerStatus::Infeasible)
        if (!verify_solution(problem, result.solution).ok(1e-6))
            checker_failures.fetch_add(1, std::memory_order_relaxed);
}

ArrayGeometry fpa_layout(const Scenario &scenario) {
    const int count = scenario.bounds.num_tx;
    int rows = 1;
    for (int r = 1; r * r <= count; ++r)
        if (count % r == 0)
            rows = r;
    const int cols = count / rows;

    // half-wavelength pitch, padded one part in 1e9 so grid distances clear
    // the spacing floor despite rounding
    double pitch = 0.5 * scenario.wavelength * (1.0 + 1e-9);
    const int longest = std::max(cols, rows);
    if (longest > 1)
        pitch = std::min(pitch, scenario.region_small / (longest - 1));

    const double x0 = 0.5 * (scenario.region_small - (cols - 1) * pitch);
    const double y0 = 0.5 * (scenario.region_small - (rows - 1) * pitch);

    ArrayGeometry g;
    g.region_side = scenario.region_small;
    g.min_spacing = scenario.bounds.min_spacing;
    g.positions.reserve(static_cast<std::size_t>(count));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            g.positions.emplace_back(x0 + c * pitch, y0 + r * pitch);
    return g;
}

InnerSolve fpa_baseline(const Scenario &scenario) {
    return solve_inner(fpa_layout(scenario), scenario);
}

} // namespace falawn
