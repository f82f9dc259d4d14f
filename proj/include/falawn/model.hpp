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
#include <complex>
#include <stdexcept>
#include <vector>

namespace falawn {

using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Element coordinates of a mechanically movable planar array. Coordinates
/// live in the square [0, region_side]^2; a geometry is feasible when every
/// pairwise element distance is at least min_spacing.
struct ArrayGeometry {
    std::vector<Eigen::Vector2d> positions; // meters
    double region_side = 0.0;               // meters
    double min_spacing = 0.0;               // meters

    int num_elements() const { return static_cast<int>(positions.size()); }

    bool in_region(double tol = 0.0) const;
    double min_pairwise_distance() const;
    bool spacing_ok(double tol = 0.0) const;
};

/// One propagation path of a multipath field-response channel.
struct PathCluster {
    double elevation = 0.0; // radians, [0, pi]
    double azimuth = 0.0;   // radians, [0, 2*pi)
    std::complex<double> gain{1.0, 0.0};
};

/// Downlink receiver served with a data stream.
struct CommUser {
    double distance_m = 100.0;
    double pathloss_exponent = 2.8;
    std::vector<PathCluster> paths;
    double rate_req = 1.0; // bits/s/Hz
};

/// Direction that must receive at least gain_floor_mw of beampattern power.
struct SensingTarget {
    double elevation = 0.0;
    double azimuth = 0.0;
    double gain_floor_mw = 0.0; // linear milliwatts
};

struct EmptyPaths : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Projection of a propagation direction onto the array plane:
/// (sin(el)*cos(az), sin(el)*sin(az)). Always inside the closed unit disk.
std::pair<double, double> direction_cosines(double elevation, double azimuth);

/// Per-element phase response of the array toward a far-field direction.
/// Every entry has unit modulus, so the squared norm equals the element
/// count.
ComplexVector steering_vector(const ArrayGeometry &geometry, double elevation,
                              double azimuth, double wavelength);

/// Position-dependent multipath channel:
///   h = sqrt(ref_gain * d^-alpha) * sum_l gain_l * steering(el_l, az_l).
ComplexVector channel(const CommUser &user, const ArrayGeometry &geometry,
                      double wavelength, double ref_gain);

} // namespace falawn
