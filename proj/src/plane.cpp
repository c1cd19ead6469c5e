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

#include "svq/plane.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace svq {

Plane::Plane(int w, int h, double fill, int depth)
    : width(w), height(h), bit_depth(depth), samples(static_cast<size_t>(w) * h, fill) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("Plane: non-positive dimensions");
    if (depth < 1 || depth > 16) throw std::invalid_argument("Plane: bit depth out of range");
}

void Plane::validate() const {
    if (width <= 0 || height <= 0) throw std::invalid_argument("Plane: non-positive dimensions");
    if (samples.size() != static_cast<size_t>(width) * height)
        throw std::invalid_argument("Plane: sample count does not match dimensions");
    for (double v : samples)
        if (!std::isfinite(v)) throw std::invalid_argument("Plane: non-finite sample");
}

Plane luma_extract(std::span<const uint8_t> data, int width, int height, RasterLayout layout) {
    const size_t n = static_cast<size_t>(width) * height;
    Plane out(width, height);
    switch (layout) {
        case RasterLayout::InterleavedRgb8: {
            if (data.size() != n * 3) throw std::invalid_argument("luma_extract: RGB raster size mismatch");
            for (size_t i = 0; i < n; ++i) {
                const double r = data[3 * i], g = data[3 * i + 1], b = data[3 * i + 2];
                out.samples[i] = std::round(0.299 * r + 0.587 * g + 0.114 * b);
            }
            break;
        }
        case RasterLayout::PlanarY8: {
            if (data.size() != n) throw std::invalid_argument("luma_extract: Y8 raster size mismatch");
            for (size_t i = 0; i < n; ++i) out.samples[i] = data[i];
            break;
        }
        case RasterLayout::PlanarY16: {
            if (data.size() != n * 2) throw std::invalid_argument("luma_extract: Y16 raster size mismatch");
            out.bit_depth = 16;
            for (size_t i = 0; i < n; ++i)
                out.samples[i] = static_cast<double>(data[2 * i] | (data[2 * i + 1] << 8));
            break;
        }
        default:
            throw std::invalid_argument("luma_extract: unsupported layout");
    }
    return out;
}

Block extract_block(const Plane& plane, int x, int y, int m) {
    if (m < 2) throw std::invalid_argument("extract_block: block size must be >= 2");
    if (x < 0 || y < 0 || x + m > plane.width || y + m > plane.height)
        throw std::invalid_argument("extract_block: block outside plane");
    Block b;
    b.x = x;
    b.y = y;
    b.size = m;
    b.samples.resize(static_cast<size_t>(m) * m);
    for (int by = 0; by < m; ++by) {
        const double* src = plane.row(y + by) + x;
        double* dst = b.samples.data() + static_cast<size_t>(by) * m;
        for (int bx = 0; bx < m; ++bx) dst[bx] = src[bx];
    }
    return b;
}

BlockGrid partition_blocks(const Plane& plane, int m) {
    if (m < 2) throw std::invalid_argument("partition_blocks: block size must be >= 2");
    if (plane.width < m || plane.height < m)
        throw std::invalid_argument("partition_blocks: plane smaller than one block (" +
                                    std::to_string(plane.width) + "x" + std::to_string(plane.height) +
                                    " vs m=" + std::to_string(m) + ")");
    BlockGrid g;
    g.block_size = m;
    g.cols = plane.width / m;
    g.rows = plane.height / m;
    return g;
}

Plane downsample2x(const Plane& in) {
    const int ow = in.width / 2, oh = in.height / 2;
    if (ow < 1 || oh < 1) throw std::invalid_argument("downsample2x: plane too small");
    Plane out(ow, oh, 0.0, in.bit_depth);
    for (int y = 0; y < oh; ++y) {
        const double* r0 = in.row(2 * y);
        const double* r1 = in.row(2 * y + 1);
        double* dst = out.row(y);
        for (int x = 0; x < ow; ++x)
            dst[x] = 0.25 * (r0[2 * x] + r0[2 * x + 1] + r1[2 * x] + r1[2 * x + 1]);
    }
    return out;
}

}  // namespace svq
