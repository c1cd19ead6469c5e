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

#include <cstdint>
#include <span>
#include <vector>

#include "svq/plane.hpp"

namespace svq {

struct GazeRecord {
    double timestamp_ms = 0.0;
    int subject_id = 0;
    int frame_index = 0;
    int x = 0;
    int y = 0;
};

/// Eye-tracking records, already screened against frame bounds; the
/// loader counts and drops out-of-bounds points.
struct GazeLog {
    std::vector<GazeRecord> records;
    int dropped_out_of_bounds = 0;
};

struct PixelPoint {
    int x = 0;
    int y = 0;
};

struct FixationDensityMap {
    Plane density;
    bool peak_normalized = false;
};

/// Splat the fovea kernel additively at each gaze point, average the
/// per-subject maps, and peak-normalize to 1 (frames without gaze stay
/// all-zero). Returns one map per frame index in [0, frames).
std::vector<FixationDensityMap> fdm_from_gaze(const GazeLog& log, const Plane& kernel, int width,
                                              int height, int frames);

/// Fixation points of one frame, in record order.
std::vector<PixelPoint> fixation_points(const GazeLog& log, int frame_index);

/// ROC area for a saliency map against fixated pixels; the negative set
/// is a seeded uniform draw of non-fixated pixels of equal size, the
/// curve is swept over 256 uniform thresholds and integrated with the
/// trapezoid rule.
double auc(const Plane& saliency, std::span<const PixelPoint> fixations, uint64_t seed);

/// AUC with negatives drawn from the fixations of other scenes
/// (`negative_pool`), averaged over `repeats` seeded draws.
double shuffled_auc(const Plane& saliency, std::span<const PixelPoint> fixations,
                    std::span<const PixelPoint> negative_pool, uint64_t seed, int repeats = 10);

/// Mean of the zero-mean unit-variance standardized map at the fixated
/// pixels; a constant map scores 0.
double nss(const Plane& saliency, std::span<const PixelPoint> fixations);

/// Pearson correlation of the two maps as flattened random variables.
double pcc_maps(const Plane& saliency, const Plane& fdm);

/// Histogram intersection of the sum-normalized maps, in [0, 1].
double sim(const Plane& saliency, const Plane& fdm);

/// KL(fdm || saliency) of the sum-normalized maps, floored at 1e-12
/// before normalization; >= 0, 0 for identical maps.
double kld(const Plane& saliency, const Plane& fdm);

/// Exact transportation cost between the two maps after area-mean
/// downsampling to grid_w x grid_h and sum normalization; Euclidean
/// ground distance in downsampled-pixel units.
double emd(const Plane& saliency, const Plane& fdm, int grid_w = 32, int grid_h = 18);

/// Area-mean downsample onto a fixed grid (exposed for the EMD oracle).
Plane downsample_to_grid(const Plane& in, int grid_w, int grid_h);

/// w * S + (1 - w) * center Gaussian (peak 1, given std in pixels).
Plane center_bias_mix(const Plane& s, double w, double std_px);

/// Seeded uniform random map in [0, 1).
Plane chance_map(int width, int height, uint64_t seed);

/// Centered Gaussian map, value 1 at the frame center.
Plane center_map(int width, int height, double std_px);

/// First Hu invariant I1 = eta20 + eta02 of a (weighted) binary mask.
double moment_of_inertia(const Plane& mask);

struct EvalScores {
    double auc = 0.0;
    double sauc = 0.0;
    double nss = 0.0;
    double pcc = 0.0;
    double sim = 0.0;
    double kld = 0.0;
    double emd = 0.0;
};

}  // namespace svq
