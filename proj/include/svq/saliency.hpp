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

#include <span>
#include <vector>

#include "svq/fidelity.hpp"
#include "svq/hv3d.hpp"
#include "svq/plane.hpp"

namespace svq {

/// One saliency plane per decomposition scale of a multi-scale metric.
struct SaliencyPyramid {
    std::vector<Plane> levels;
};

/// Throws unless all values are >= 0 with at least one > 0.
void validate_saliency(const Plane& s);

/// Weights s / mean(s), so the weight plane has mean exactly 1.
Plane normalize_saliency(const Plane& s);

/// Saliency-weighted spatial average: sum(v * s) / sum(s).
double weighted_mean(const Plane& values, const Plane& s);

/// Pyramid for MS-SSIM-style metrics: repeated 2x2-mean decimation.
SaliencyPyramid build_msssim_pyramid(const Plane& s, int scales = kMsssimScales);

/// Pyramid for VIF: the same Gaussian filter-then-decimate chain the
/// image pyramid uses.
SaliencyPyramid build_vif_pyramid(const Plane& s);

// Sequence-level saliency-weighted full-reference metrics. Each takes
// one saliency map per frame (applied to both views) and reduces to the
// unweighted base metric when the span is empty; per-frame view scores
// are averaged and then temporally averaged.
double psnr_s(std::span<const StereoPair> ref, std::span<const StereoPair> dist,
              std::span<const Plane> saliency, double cap = 100.0);
double ssim_s(std::span<const StereoPair> ref, std::span<const StereoPair> dist,
              std::span<const Plane> saliency);
double msssim_s(std::span<const StereoPair> ref, std::span<const StereoPair> dist,
                std::span<const Plane> saliency);
double vif_s(std::span<const StereoPair> ref, std::span<const StereoPair> dist,
             std::span<const Plane> saliency);

/// Saliency-weighted HV3D: block SSIMs weighted by block-mean saliency,
/// VIF of the depth pair weighted per subband, and the variance term
/// weighted by per-block average saliency. Minkowski-pooled.
double hv3d_s(std::span<const StereoPair> ref, std::span<const StereoPair> dist,
              std::span<const Plane> ref_depth, std::span<const Plane> dist_depth,
              std::span<const DisparityMap> disparity, std::span<const Plane> saliency,
              const Hv3dParams& params);

// Single-frame weighted metric cores (per view), exposed for tests and
// the sequence drivers above. Null saliency = unweighted.
double psnr_s_frame(const Plane& ref, const Plane& dist, const Plane* s, double cap = 100.0);
double ssim_s_frame(const Plane& ref, const Plane& dist, const Plane* s);
double msssim_s_frame(const Plane& ref, const Plane& dist, const SaliencyPyramid* pyr);
double vif_s_frame(const Plane& ref, const Plane& dist, const SaliencyPyramid* pyr);

// No-reference single-frame metrics; they never consult a reference.
// Null saliency = unweighted.

/// Blur estimate: re-blur the frame with a 3x3 box, compare weighted
/// sums of neighbor-difference maps before and after, return
/// 1 - max(vertical ratio, horizontal ratio), in [0, 1], higher =
/// sharper. A constant frame returns 0.
double nrpbm_blur_s(const Plane& frame, const Plane* s);

/// Mean edge width in pixels, measured per edge pixel between the local
/// extrema along the dominant gradient axis, saliency-weighted. Throws
/// when no Sobel magnitude exceeds the detection threshold.
double farias_blur_s(const Plane& frame, const Plane* s);

/// Blockiness: weighted absolute differences at 8x8 block boundaries
/// over all neighbor differences (vertical + horizontal terms),
/// normalized by H*W. Zero total differences return 0.
double farias_block_s(const Plane& frame, const Plane* s);

}  // namespace svq
