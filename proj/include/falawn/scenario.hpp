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

#include <cstdint>
#include <string>
#include <vector>

#include "falawn/control.hpp"
#include "falawn/model.hpp"

namespace falawn {

/// Everything needed to sample a reproducible problem instance. Values mirror
/// the case-study defaults; distribution knobs are explicit so experiments can
/// override them.
struct ScenarioConfig {
    double wavelength_m = 0.1;   // 3 GHz carrier
    double noise_dbm = -100.0;   // receiver noise power
    double ref_gain_db = -60.0;  // channel power gain at 1 m
    int num_tx = 10;             // transmit elements
    int num_users = 3;           // communication users
    int num_targets = 3;         // sensing targets
    int num_plants = 2;          // controlled UAVs
    double rate_bps_hz = 1.0;    // per-user rate requirement
    double target_gain_dbm = -10.0; // per-target beampattern floor
    double lqr_cost_max = 10.58; // per-plant cost ceiling
    double kappa = 0.5;          // packet-error decay rate

    double user_distance_min_m = 50.0;
    double user_distance_max_m = 150.0;
    double pathloss_exponent = 2.8;
    int paths_per_link = 4;          // 1 LoS + (paths_per_link - 1) NLoS
    double nlos_gain_variance = 0.1; // per NLoS path

    double region_small_wl = 5.0;  // movable-region side, wavelengths
    double region_large_wl = 10.0; // enlarged movable-region side
    double min_spacing_wl = 0.5;   // mutual-coupling guard

    /// Returns one "field: reason" entry per violated range check; empty
    /// means the config is valid.
    std::vector<std::string> validate() const;
};

struct InvalidConfig : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Bounds the movable region without fixing element coordinates.
struct GeometryBounds {
    int num_tx = 10;
    double region_side = 0.5; // meters
    double min_spacing = 0.05;
};

/// A fully sampled problem instance. Powers and gains are linear (mW).
struct Scenario {
    double wavelength = 0.1;
    double noise_mw = 1e-10;
    double ref_gain = 1e-6;
    std::vector<CommUser> users;
    std::vector<SensingTarget> targets;
    std::vector<ControlledPlant> plants;
    GeometryBounds bounds;      // defaults to the small movable region
    double region_small = 0.5;  // meters
    double region_large = 1.0;  // meters
    std::uint64_t seed = 0;
};

/// Samples users, targets and plant links from per-entity private random
/// streams. A pure function of (config, seed): identical inputs reproduce the
/// scenario bit-for-bit. Throws InvalidConfig naming every offending field.
Scenario sample_scenario(const ScenarioConfig &config, std::uint64_t seed);

} // namespace falawn
