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

#include <vector>

#include "svq/plane.hpp"

namespace svq {

/// Per-pixel SSIM over the valid filter region. The map is smaller than
/// the inputs by (window - 1) in each dimension; offset_x/offset_y give
/// the map's position inside the source planes.
struct SsimMap {
    Plane map;
    int offset_x = 0;
    int offset_y = 0;
    double mean = 0.0;
};

/// Local SSIM with an 11x11 Gaussian window (sigma 1.5), K1=0.01,
/// K2=0.03, dynamic range from the reference bit depth. The window
/// shrinks to min(11, min(w, h)) for small inputs, sigma scaled with it.
SsimMap ssim_map(const Plane& ref, const Plane& dist);

/// Mean SSIM with optional per-pixel weights (full input size; the
/// interior matching the valid region is used). Null weights = plain mean.
double ssim_mean(const Plane& ref, const Plane& dist, const Plane* weights = nullptr);

/// Windowed SSIM mean on raw w x h buffers (window min(11, min(w,h))).
double ssim_value(const double* ref, const double* dist, int w, int h, double peak);

/// 10*log10(peak^2 / MSE), clamped at `cap`; zero MSE returns the cap.
double psnr(const Plane& ref, const Plane& dist, double cap = 100.0);
double psnr_weighted(const Plane& ref, const Plane& dist, const Plane* weights, double cap = 100.0);

inline constexpr int kMsssimScales = 5;
inline constexpr double kMsssimWeights[kMsssimScales] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

/// Multi-scale SSIM: contrast/structure means over `scales` dyadic
/// levels (2x2-mean downsampling), luminance at the coarsest, canonical
/// exponents. Optional weights: one plane per scale, each at that
/// scale's input size.
double ms_ssim(const Plane& ref, const Plane& dist, int scales = kMsssimScales);
double ms_ssim_weighted(const Plane& ref, const Plane& dist, const std::vector<Plane>* scale_weights,
                        int scales = kMsssimScales);

inline constexpr int kVifScales = 4;
inline constexpr double kVifNoiseVariance = 2.0;

/// Pixel-domain VIF, scalar GSM approximation over 4 dyadic scales
/// (Gaussian windows 17/9/5/3, filter-then-decimate), noise variance 2.
/// Identical inputs give 1; a reference with no information gives 1 by
/// convention. Optional weights: one plane per scale at that scale's
/// image size; they multiply both numerator and denominator terms.
double vif(const Plane& ref, const Plane& dist);
double vif_weighted(const Plane& ref, const Plane& dist, const std::vector<Plane>* scale_weights);

/// Scale-m input sizes for the VIF pyramid (index 0 = full size), as
/// produced by the internal filter-then-decimate chain.
std::vector<std::pair<int, int>> vif_scale_dims(int w, int h);

/// Filter-then-decimate a plane exactly as the VIF chain does between
/// scale `level` and `level+1` (level is 1-based scale index).
Plane vif_downsample(const Plane& in, int next_level);

/// Normalized Gaussian kernel of given size (sum 1).
std::vector<double> gaussian_kernel(int size, double sigma);

}  // namespace svq
