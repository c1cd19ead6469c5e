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

#pragma once

#include "svq/plane.hpp"

namespace svq {

/// Physical viewing setup: display size/resolution, viewer distance,
/// inter-ocular distance, and the half-angle of highest visual acuity.
struct ViewingGeometry {
    double viewer_distance_mm = 1830.0;
    double display_width_mm = 1018.0;
    double display_height_mm = 573.0;
    int horizontal_resolution = 1920;
    int vertical_resolution = 1080;
    double inter_ocular_mm = 63.0;
    double acuity_half_angle_deg = 1.0;  // valid (0, 1.0]; 2*alpha in (0, 2] degrees

    void validate() const;

    /// Pixels of horizontal disparity per degree of visual angle.
    double pixels_per_degree() const;
};

/// Signed per-pixel horizontal disparities in pixels, left-to-right
/// convention: right x = left x + disparity.
struct DisparityMap {
    Plane values;
};

/// Physical depth behind/at/before the screen plane for a horizontal
/// disparity, Depth = Z / (1 + disparity * W / (L_eyes * R_W)). Throws
/// when the disparity is past the divergence limit (denominator <= 0).
double disparity_to_depth(double disparity_px, const ViewingGeometry& geo);

/// Inverse of disparity_to_depth.
double depth_to_disparity(double depth_mm, const ViewingGeometry& geo);

/// Side length in pixels of the square screen block covered by the fovea:
/// k = round(2 * Z * R_H * tan(alpha) / H).
int fovea_block_length(const ViewingGeometry& geo);

/// Radius in pixels of the circular fovea kernel:
/// L = round(Z * tan(alpha) * R_H / H).
int fovea_kernel_radius(const ViewingGeometry& geo);

/// Circular weight disk of the photoreceptor-density falloff: 1 at the
/// center, non-increasing along every radius, 0 at and outside the rim.
/// The plane is (2L+1) x (2L+1) with the center at (L, L).
Plane fovea_kernel(const ViewingGeometry& geo);

/// Comfort-zone discomfort factor for a disparity magnitude in minutes
/// of arc: 1 up to 60 arcmin, then max(0, 1.36 - 0.006 * d).
double discomfort_weight(double disparity_arcmin);

}  // namespace svq
