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

#include "svq/block_match.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace svq {

double block_disparity(const DisparityMap& dmap, const Block& block) {
    const Plane& p = dmap.values;
    if (block.x < 0 || block.y < 0 || block.x + block.size > p.width ||
        block.y + block.size > p.height)
        throw std::invalid_argument("block_disparity: block outside disparity map");

    std::vector<double> vals;
    vals.reserve(static_cast<size_t>(block.size) * block.size);
    for (int y = 0; y < block.size; ++y) {
        const double* row = p.row(block.y + y) + block.x;
        vals.insert(vals.end(), row, row + block.size);
    }
    std::sort(vals.begin(), vals.end());
    const size_t n = vals.size();
    if (n % 2 == 1) return vals[n / 2];
    const double mid = 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
    return std::trunc(mid);
}

double block_mse(const Block& block, const Plane& plane, int x, int y) {
    const int m = block.size;
    double acc = 0.0;
    for (int by = 0; by < m; ++by) {
        const double* a = block.samples.data() + static_cast<size_t>(by) * m;
        const double* b = plane.row(y + by) + x;
        for (int bx = 0; bx < m; ++bx) {
            const double d = a[bx] - b[bx];
            acc += d * d;
        }
    }
    return acc / (static_cast<double>(m) * m);
}

BlockMatch best_match([[maybe_unused]] const Plane& base, const Plane& other, const Block& block,
                      double disparity, int search, MatchMode mode) {
    const int m = block.size;
    if (search < m) throw std::invalid_argument("best_match: search range smaller than block");
    if (other.width < m || other.height < m)
        throw std::invalid_argument("best_match: other view smaller than block");

    // Approximate position: origin shifted horizontally by the block
    // disparity, clamped so the block stays inside the frame.
    const int ax = std::clamp(block.x + static_cast<int>(std::lround(disparity)), 0, other.width - m);
    const int ay = std::clamp(block.y, 0, other.height - m);

    BlockMatch match;
    match.base_x = block.x;
    match.base_y = block.y;
    match.disparity_used = disparity;

    if (mode == MatchMode::Fast) {
        match.matched_x = ax;
        match.matched_y = ay;
        match.cost = block_mse(block, other, ax, ay);
        return match;
    }

    // Window of pixels centered on the approximate block, clamped to the
    // frame; candidate origins keep the whole block inside the window.
    const int cx = ax + m / 2, cy = ay + m / 2;
    const int wx0 = std::max(0, cx - search / 2);
    const int wy0 = std::max(0, cy - search / 2);
    const int wx1 = std::min(other.width, cx - search / 2 + search);
    const int wy1 = std::min(other.height, cy - search / 2 + search);
    const int x0 = std::min(wx0, other.width - m);
    const int y0 = std::min(wy0, other.height - m);
    const int x1 = std::max(x0, wx1 - m);
    const int y1 = std::max(y0, wy1 - m);

    const double scale = static_cast<double>(m) * m;
    double best_sse = std::numeric_limits<double>::infinity();
    int bx = x0, by = y0;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            double sse = 0.0;
            for (int r = 0; r < m && sse < best_sse; ++r) {
                const double* a = block.samples.data() + static_cast<size_t>(r) * m;
                const double* b = other.row(y + r) + x;
                for (int c = 0; c < m; ++c) {
                    const double d = a[c] - b[c];
                    sse += d * d;
                }
            }
            if (sse < best_sse) {
                best_sse = sse;
                bx = x;
                by = y;
            }
        }
    }
    match.matched_x = bx;
    match.matched_y = by;
    match.cost = best_sse / scale;
    return match;
}

}  // namespace svq
