// Copyright 2026 The svq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "svq/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace svq {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Radial falloff of foveal cone density, sampled from the physiological
// curve (peak at the center, steep drop), piecewise-linear in r/L.
constexpr double kFoveaProfileR[] = {0.0, 0.25, 0.5, 0.75, 1.0};
constexpr double kFoveaProfileW[] = {1.0, 0.55, 0.25, 0.08, 0.0};

double fovea_profile(double t) {
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    for (int i = 1; i < 5; ++i) {
        if (t <= kFoveaProfileR[i]) {
            const double f = (t - kFoveaProfileR[i - 1]) / (kFoveaProfileR[i] - kFoveaProfileR[i - 1]);
            return kFoveaProfileW[i - 1] + f * (kFoveaProfileW[i] - kFoveaProfileW[i - 1]);
        }
    }
    return 0.0;
}

}  // namespace

void ViewingGeometry::validate() const {
    if (viewer_distance_mm <= 0 || display_width_mm <= 0 || display_height_mm <= 0 ||
        inter_ocular_mm <= 0)
        throw std::invalid_argument("ViewingGeometry: lengths must be positive");
    if (horizontal_resolution <= 0 || vertical_resolution <= 0)
        throw std::invalid_argument("ViewingGeometry: resolution must be positive");
    if (acuity_half_angle_deg <= 0.0 || acuity_half_angle_deg > 1.0)
        throw std::invalid_argument("ViewingGeometry: acuity half-angle out of (0, 1] degrees");
}

double ViewingGeometry::pixels_per_degree() const {
    // screen millimetres subtended by one degree at the viewing distance
    const double mm = 2.0 * viewer_distance_mm * std::tan(0.5 * kDegToRad);
    return mm * horizontal_resolution / display_width_mm;
}

double disparity_to_depth(double disparity_px, const ViewingGeometry& geo) {
    const double den =
        1.0 + disparity_px * geo.display_width_mm / (geo.inter_ocular_mm * geo.horizontal_resolution);
    if (den <= 0.0)
        throw std::invalid_argument("disparity_to_depth: disparity beyond divergence limit");
    return geo.viewer_distance_mm / den;
}

double depth_to_disparity(double depth_mm, const ViewingGeometry& geo) {
    if (depth_mm <= 0.0) throw std::invalid_argument("depth_to_disparity: depth must be positive");
    return (geo.viewer_distance_mm / depth_mm - 1.0) * geo.inter_ocular_mm *
           geo.horizontal_resolution / geo.display_width_mm;
}

int fovea_block_length(const ViewingGeometry& geo) {
    geo.validate();
    const double k = 2.0 * geo.viewer_distance_mm * geo.vertical_resolution *
                     std::tan(geo.acuity_half_angle_deg * kDegToRad) / geo.display_height_mm;
    return static_cast<int>(std::lround(k));
}

int fovea_kernel_radius(const ViewingGeometry& geo) {
    geo.validate();
    const double l = geo.viewer_distance_mm * std::tan(geo.acuity_half_angle_deg * kDegToRad) *
                     geo.vertical_resolution / geo.display_height_mm;
    return static_cast<int>(std::lround(l));
}

Plane fovea_kernel(const ViewingGeometry& geo) {
    const int radius = fovea_kernel_radius(geo);
    const int side = 2 * radius + 1;
    Plane kernel(side, side);
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) {
            const double r = std::hypot(x - radius, y - radius);
            kernel.at(x, y) = radius > 0 ? fovea_profile(r / radius) : 1.0;
        }
    return kernel;
}

double discomfort_weight(double disparity_arcmin) {
    if (disparity_arcmin <= 60.0) return 1.0;
    return std::max(0.0, 1.36 - 0.006 * disparity_arcmin);
}

}  // namespace svq
