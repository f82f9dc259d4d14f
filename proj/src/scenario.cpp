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

#include "falawn/scenario.hpp"

#include <cmath>
#include <sstream>

#include "falawn/rng.hpp"
#include "falawn/units.hpp"

namespace falawn {

namespace {

// stream ids for per-entity private RNG streams
enum StreamKind : std::uint64_t {
    kUserStream = 1,
    kTargetStream = 2,
    kPlantLinkStream = 3,
};

/// Hemisphere directions uniform in solid angle: elevation = acos(U).
void sample_direction(RandomStream &rng, double &elevation, double &azimuth) {
    elevation = std::acos(rng.uniform());
    azimuth = rng.uniform(0.0, 2.0 * M_PI);
}

std::vector<PathCluster> sample_paths(RandomStream &rng,
                                      const ScenarioConfig &cfg) {
    std::vector<PathCluster> paths(static_cast<std::size_t>(cfg.paths_per_link));
    for (std::size_t l = 0; l < paths.size(); ++l) {
        sample_direction(rng, paths[l].elevation, paths[l].azimuth);
        // path 0 is the dominant LoS component with unit gain
        paths[l].gain = (l == 0) ? std::complex<double>(1.0, 0.0)
                                 : rng.circular_normal(cfg.nlos_gain_variance);
    }
    return paths;
}

CommUser sample_link(RandomStream &rng, const ScenarioConfig &cfg,
                     double rate_req) {
    CommUser user;
    user.distance_m = rng.uniform(cfg.user_distance_min_m, cfg.user_distance_max_m);
    user.pathloss_exponent = cfg.pathloss_exponent;
    user.paths = sample_paths(rng, cfg);
    user.rate_req = rate_req;
    return user;
}

} // namespace

std::vector<std::string> ScenarioConfig::validate() const {
    std::vector<std::string> bad;
    const auto require = [&](bool ok, const char *field, const char *why) {
        if (!ok) {
            std::ostringstream os;
            os << field << ": " << why;
            bad.push_back(os.str());
        }
    };
    require(wavelength_m > 0.0, "wavelength_m", "must be > 0");
    require(noise_dbm < 100.0, "noise_dbm", "implausibly large");
    require(num_tx >= 1, "num_tx", "must be >= 1");
    require(num_users >= 0, "num_users", "must be >= 0");
    require(num_targets >= 0, "num_targets", "must be >= 0");
    require(num_plants >= 0, "num_plants", "must be >= 0");
    require(rate_bps_hz >= 0.0, "rate_bps_hz", "must be >= 0");
    require(lqr_cost_max > 0.0, "lqr_cost_max", "must be > 0");
    require(kappa > 0.0, "kappa", "must be > 0");
    require(user_distance_min_m > 0.0, "user_distance_min_m", "must be > 0");
    require(user_distance_max_m >= user_distance_min_m, "user_distance_max_m",
            "must be >= user_distance_min_m");
    require(pathloss_exponent >= 2.0, "pathloss_exponent", "must be >= 2");
    require(paths_per_link >= 1, "paths_per_link", "must be >= 1");
    require(nlos_gain_variance >= 0.0, "nlos_gain_variance", "must be >= 0");
    require(region_small_wl > 0.0, "region_small_wl", "must be > 0");
    require(region_large_wl >= region_small_wl, "region_large_wl",
            "must be >= region_small_wl");
    require(min_spacing_wl >= 0.0, "min_spacing_wl", "must be >= 0");
    return bad;
}

Scenario sample_scenario(const ScenarioConfig &config, std::uint64_t seed) {
    const auto violations = config.validate();
    if (!violations.empty()) {
        std::string msg = "invalid scenario config:";
        for (const auto &v : violations)
            msg += " [" + v + "]";
        throw InvalidConfig(msg);
    }

    Scenario sc;
    sc.wavelength = config.wavelength_m;
    sc.noise_mw = dbm_to_mw(config.noise_dbm);
    sc.ref_gain = db_to_linear(config.ref_gain_db);
    sc.seed = seed;
    sc.region_small = config.region_small_wl * config.wavelength_m;
    sc.region_large = config.region_large_wl * config.wavelength_m;
    sc.bounds.num_tx = config.num_tx;
    sc.bounds.region_side = sc.region_small;
    sc.bounds.min_spacing = config.min_spacing_wl * config.wavelength_m;

    sc.users.reserve(static_cast<std::size_t>(config.num_users));
    for (int k = 0; k < config.num_users; ++k) {
        RandomStream rng(mix_seed(seed, kUserStream, static_cast<std::uint64_t>(k)));
        sc.users.push_back(sample_link(rng, config, config.rate_bps_hz));
    }

    sc.targets.reserve(static_cast<std::size_t>(config.num_targets));
    for (int m = 0; m < config.num_targets; ++m) {
        RandomStream rng(
            mix_seed(seed, kTargetStream, static_cast<std::uint64_t>(m)));
        SensingTarget target;
        sample_direction(rng, target.elevation, target.azimuth);
        target.gain_floor_mw = dbm_to_mw(config.target_gain_dbm);
        sc.targets.push_back(target);
    }

    sc.plants.reserve(static_cast<std::size_t>(config.num_plants));
    for (int n = 0; n < config.num_plants; ++n) {
        RandomStream rng(
            mix_seed(seed, kPlantLinkStream, static_cast<std::uint64_t>(n)));
        ControlledPlant plant = make_double_integrator_plant();
        plant.max_control_cost = config.lqr_cost_max;
        plant.kappa = config.kappa;
        plant.link = sample_link(rng, config, 0.0);
        sc.plants.push_back(std::move(plant));
    }

    return sc;
}

} // namespace falawn
