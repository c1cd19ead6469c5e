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

#include <array>
#include <span>
#include <vector>

#include "svq/block_match.hpp"
#include "svq/csf.hpp"
#include "svq/geometry.hpp"
#include "svq/plane.hpp"

namespace svq {

struct Hv3dParams {
    int block_size = 16;    // m
    int search_size = 64;   // M
    double beta1 = 0.4;
    double beta2 = 0.1;
    double beta3 = 0.29;
    double pooling_p = 9.0;
    double pooling_tau = 100.0;
    int variance_block = 64;  // k, outer block for local depth variance
    ViewingGeometry geometry;
    MatchMode mode = MatchMode::Full;

    void validate() const;
};

struct FrameScore {
    int frame_index = 0;
    double q_cyclopean = 0.0;   // (mean block SSIM)^beta1
    double q_depth = 0.0;       // vif^beta2 * variance_term^beta3
    double hv3d = 0.0;          // q_cyclopean * q_depth
    // raw components, pre-exponent (used for calibration and diagnostics)
    double mean_block_ssim = 0.0;
    double depth_vif = 0.0;
    double variance_term = 0.0;
};

/// One frame of a stereo sequence.
struct StereoPair {
    Plane left;
    Plane right;
};

/// 3D-DCT fusion of a matching block pair: 2D-DCT of each block, an
/// orthonormal 2-point DCT along depth, keep the low-frequency slice
/// (DCT2(L) + DCT2(R)) / sqrt(2), then apply the CSF mask element-wise.
std::vector<double> fuse_cyclopean_block(const Block& left, const Block& right, const CsfMask& mask);

/// Mean SSIM between reconstructed cyclopean blocks of the reference and
/// distorted pairs over the given matches, raised to beta1. Matches must
/// come from the reference pair; the same coordinates are reused on the
/// distorted pair. Optional saliency plane weights each block's SSIM by
/// the block-mean saliency over the base-view block region.
double q_cyclopean(const Plane& ref_base, const Plane& ref_other, const Plane& dist_base,
                   const Plane& dist_other, std::span<const BlockMatch> matches, const CsfMask& mask,
                   double beta1, const Plane* saliency = nullptr);

/// The raw block-SSIM mean behind q_cyclopean, before the exponent.
double mean_cyclopean_ssim(const Plane& ref_base, const Plane& ref_other, const Plane& dist_base,
                           const Plane& dist_other, std::span<const BlockMatch> matches,
                           const CsfMask& mask, const Plane* saliency = nullptr);

/// Per-frame normalization of a depth plane by its maximum value
/// (an all-zero plane stays all-zero).
Plane normalize_depth(const Plane& depth);

/// Sample variance of the k x k outer region centered on the m x m inner
/// block at (inner_x, inner_y), clamped (not wrapped) at frame borders.
/// The divisor is (sample count - 1), i.e. k*k - 1 for interior blocks.
double local_depth_variance(const Plane& norm_depth, int inner_x, int inner_y, int m, int k);

struct DepthQuality {
    double vif_factor = 0.0;     // VIF(D, D')
    double variance_term = 0.0;  // sum(sigma^2) / (N * max sigma^2), or 1 for flat depth
    double value = 0.0;          // vif^beta2 * variance_term^beta3
};

/// Depth quality per Q_Depth: VIF between the depth planes and the
/// normalized local-variance sum over the inner block grid. Flat
/// reference depth (max variance < 1e-12) fixes the variance term at 1.
DepthQuality q_depth(const Plane& ref_depth, const Plane& dist_depth, int m, int k, double beta2,
                     double beta3, const Plane* saliency = nullptr);

/// Full HV3D for one frame. `dmap` holds left-to-right disparities for
/// the base view; when the base view is the right one the caller passes
/// the sign-flipped map (see hv3d_sequence).
FrameScore hv3d_frame(const Plane& ref_base, const Plane& ref_other, const Plane& dist_base,
                      const Plane& dist_other, const Plane& ref_depth, const Plane& dist_depth,
                      const DisparityMap& dmap, const Hv3dParams& params, int frame_index = 0,
                      const Plane* saliency = nullptr);

/// hv3d_frame with the even/odd base-view alternation applied: left is
/// the base on even frame indices, right (with the disparity sign
/// flipped) on odd ones.
FrameScore hv3d_frame_alternating(const StereoPair& ref, const StereoPair& dist,
                                  const Plane& ref_depth, const Plane& dist_depth,
                                  const DisparityMap& dmap, const Hv3dParams& params,
                                  int frame_index, const Plane* saliency = nullptr);

/// Exponentially weighted Minkowski pooling over per-frame scores
/// (frames indexed 1..N so the final frame carries weight 1).
double minkowski_pool(std::span<const double> scores, double p, double tau);

struct Hv3dSequenceResult {
    double pooled = 0.0;
    std::vector<FrameScore> frames;
};

/// Score an aligned stereo sequence. The base view (the one partitioned
/// into blocks) alternates: left on even frame indices, right on odd
/// ones, with the disparity sign flipped accordingly. Optional saliency
/// planes (one per frame) switch every component to its weighted form.
Hv3dSequenceResult hv3d_sequence(std::span<const StereoPair> ref, std::span<const StereoPair> dist,
                                 std::span<const Plane> ref_depth, std::span<const Plane> dist_depth,
                                 std::span<const DisparityMap> disparity, const Hv3dParams& params,
                                 std::span<const Plane> saliency = {});

/// Per-clip raw HV3D components used by exponent calibration.
struct ComponentTriple {
    double mean_ssim = 0.0;
    double vif = 0.0;
    double variance_term = 0.0;
};

struct BetaGrid {
    double min1 = 0.05, max1 = 1.0;
    double min2 = 0.05, max2 = 1.0;
    double min3 = 0.05, max3 = 1.0;
    double step = 0.05;
};

/// Grid search maximizing the Pearson correlation between composed HV3D
/// scores and MOS; ties resolve to the smallest (beta1, beta2, beta3).
std::array<double, 3> calibrate_exponents(std::span<const ComponentTriple> components,
                                          std::span<const double> mos, const BetaGrid& grid);

}  // namespace svq
