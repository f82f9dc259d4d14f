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

#include "falawn/model.hpp"

#include <cmath>

namespace falawn {

bool ArrayGeometry::in_region(double tol) const {
    for (const auto &p : positions)
        if (p.x() < -tol || p.x() > region_side + tol || p.y() < -tol ||
            p.y() > region_side + tol)
            return false;
    return true;
}

double ArrayGeometry::min_pairwise_distance() const {
    const int n = num_elements();
    if (n < 2)
        return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            best = std::min(best, (positions[i] - positions[j]).norm());
    return best;
}

bool ArrayGeometry::spacing_ok(double tol) const {
    return min_pairwise_distance() >= min_spacing - tol;
}

std::pair<double, double> direction_cosines(double elevation, double azimuth) {
    const double s = std::sin(elevation);
    return {s * std::cos(azimuth), s * std::sin(azimuth)};
}

ComplexVector steering_vector(const ArrayGeometry &geometry, double elevation,
                              double azimuth, double wavelength) {
    if (wavelength <= 0.0)
        throw std::invalid_argument("steering_vector: wavelength must be > 0");
    const auto [u, v] = direction_cosines(elevation, azimuth);
    const double scale = 2.0 * M_PI / wavelength;
    ComplexVector a(geometry.num_elements());
    for (int i = 0; i < geometry.num_elements(); ++i) {
        const double phase =
            scale * (geometry.positions[i].x() * u + geometry.positions[i].y() * v);
        a[i] = std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return a;
}

ComplexVector channel(const CommUser &user, const ArrayGeometry &geometry,
                      double wavelength, double ref_gain) {
    if (user.paths.empty())
        throw EmptyPaths("channel: user has no propagation paths");
    const double amplitude =
        std::sqrt(ref_gain * std::pow(user.distance_m, -user.pathloss_exponent));
    ComplexVector h = ComplexVector::Zero(geometry.num_elements());
    for (const auto &path : user.paths)
        h += path.gain *
             steering_vector(geometry, path.elevation, path.azimuth, wavelength);
    return amplitude * h;
}

} // namespace falawn
