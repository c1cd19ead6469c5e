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

#include <cmath>
#include <random>
#include <vector>

#include "svq/plane.hpp"

namespace svq::test {

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform random plane with samples in [lo, hi].
inline Plane random_plane(int w, int h, uint64_t seed, double lo = 0.0, double hi = 255.0) {
    Plane p(w, h);
    std::mt19937_64 rng(seed);
    for (double& v : p.samples) v = lo + (hi - lo) * uniform01(rng);
    return p;
}

/// Smooth textured plane (sum of sinusoids), values within [0, 255].
inline Plane textured_plane(int w, int h, uint64_t seed = 7) {
    Plane p(w, h);
    std::mt19937_64 rng(seed);
    const double fx = 0.02 + 0.08 * uniform01(rng);
    const double fy = 0.02 + 0.08 * uniform01(rng);
    const double phase = 6.28 * uniform01(rng);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            p.at(x, y) = 128.0 + 60.0 * std::sin(fx * x + phase) * std::cos(fy * y) +
                         40.0 * std::sin(0.11 * (x + 2.0 * y));
    return p;
}

/// Plane plus clamped white Gaussian noise.
inline Plane add_noise(const Plane& in, double sigma, uint64_t seed) {
    Plane out = in;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    for (double& v : out.samples) v = std::clamp(v + noise(rng), 0.0, 255.0);
    return out;
}

/// Horizontal shift with clamped borders (right view = left shifted by d).
inline Plane shift_horizontal(const Plane& in, int d) {
    Plane out(in.width, in.height, 0.0, in.bit_depth);
    for (int y = 0; y < in.height; ++y)
        for (int x = 0; x < in.width; ++x) {
            const int sx = std::clamp(x - d, 0, in.width - 1);
            out.at(x, y) = in.at(sx, y);
        }
    return out;
}

}  // namespace svq::test
