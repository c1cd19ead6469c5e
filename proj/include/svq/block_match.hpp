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

#include "svq/geometry.hpp"
#include "svq/plane.hpp"

namespace svq {

enum class MatchMode { Full, Fast };

/// Result of matching one base-view block into the other view.
struct BlockMatch {
    int base_x = 0, base_y = 0;       // block origin in the base view
    int matched_x = 0, matched_y = 0; // best origin in the other view
    double disparity_used = 0.0;      // block disparity that seeded the search
    double cost = 0.0;                // MSE at the matched position
};

/// Median of the block's disparity values; an even count takes the mean
/// of the two central values rounded toward zero.
double block_disparity(const DisparityMap& dmap, const Block& block);

/// Find the m x m block of `other` best matching `block` of `base`.
/// The approximate position is the block origin shifted horizontally by
/// `disparity` (clamped inside the frame). Full mode scans an
/// `search` x `search` window centered there (clamped at borders) for
/// the MSE minimum, ties resolved to the smallest (y, x); fast mode
/// returns the approximate position without searching.
BlockMatch best_match(const Plane& base, const Plane& other, const Block& block, double disparity,
                      int search, MatchMode mode);

/// MSE between an extracted block and the m x m region of `plane` at (x, y).
double block_mse(const Block& block, const Plane& plane, int x, int y);

}  // namespace svq
