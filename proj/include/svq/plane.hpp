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

namespace svq {

/// Single-channel 2D intensity raster, row-major doubles.
/// The nominal peak value is (2^bit_depth - 1).
struct Plane {
    int width = 0;
    int height = 0;
    int bit_depth = 8;
    std::vector<double> samples;

    Plane() = default;
    Plane(int w, int h, double fill = 0.0, int depth = 8);

    double& at(int x, int y) { return samples[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return samples[static_cast<size_t>(y) * width + x]; }
    const double* row(int y) const { return samples.data() + static_cast<size_t>(y) * width; }
    double* row(int y) { return samples.data() + static_cast<size_t>(y) * width; }

    size_t size() const { return samples.size(); }
    double peak() const { return static_cast<double>((1u << bit_depth) - 1u); }
    bool same_size(const Plane& o) const { return width == o.width && height == o.height; }

    /// Throws std::invalid_argument if dimensions/sample count disagree
    /// or any sample is non-finite.
    void validate() const;
};

/// m x m pixel block copied out of a source plane.
struct Block {
    int x = 0;
    int y = 0;
    int size = 0;
    std::vector<double> samples;

    double at(int bx, int by) const { return samples[static_cast<size_t>(by) * size + bx]; }
    double& at(int bx, int by) { return samples[static_cast<size_t>(by) * size + bx]; }
};

/// Non-overlapping m x m tiling anchored at (0,0); the right/bottom
/// remainder that does not fill a whole block is discarded.
struct BlockGrid {
    int block_size = 0;
    int cols = 0;
    int rows = 0;

    int count() const { return cols * rows; }
    int covered_width() const { return cols * block_size; }
    int covered_height() const { return rows * block_size; }
};

enum class RasterLayout {
    InterleavedRgb8,  // 3 bytes per pixel, R G B
    PlanarY8,         // one byte per pixel, already luma
    PlanarY16,        // two bytes per pixel, little-endian, already luma
};

/// BT.601 luma extraction (Y = 0.299 R + 0.587 G + 0.114 B, rounded) for
/// interleaved RGB; planar luma inputs pass through unchanged.
Plane luma_extract(std::span<const uint8_t> data, int width, int height, RasterLayout layout);

Block extract_block(const Plane& plane, int x, int y, int m);

BlockGrid partition_blocks(const Plane& plane, int m);

/// 2x2 mean then decimate; odd trailing row/column is dropped.
Plane downsample2x(const Plane& in);

}  // namespace svq
