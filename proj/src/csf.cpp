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

#include "svq/csf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace svq {

namespace {

// Standard JPEG luminance quantization table (Annex K).
constexpr int kJpegLumaQ[64] = {
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99,
};

// Keys cubic convolution kernel, a = -0.5.
double cubic_weight(double t) {
    const double a = -0.5;
    t = std::abs(t);
    if (t < 1.0) return (a + 2.0) * t * t * t - (a + 3.0) * t * t + 1.0;
    if (t < 2.0) return a * t * t * t - 5.0 * a * t * t + 8.0 * a * t - 4.0 * a;
    return 0.0;
}

// Separable bicubic resample of an n x n grid to m x m, pixel-center
// coordinate mapping with edge clamping.
std::vector<double> resample_bicubic(const std::vector<double>& in, int n, int m) {
    auto sample_row = [&](const std::vector<double>& src, int stride, int count, double pos) {
        const int base = static_cast<int>(std::floor(pos));
        double acc = 0.0, wsum = 0.0;
        for (int k = base - 1; k <= base + 2; ++k) {
            const double w = cubic_weight(pos - k);
            const int idx = std::clamp(k, 0, count - 1);
            acc += w * src[static_cast<size_t>(idx) * stride];
            wsum += w;
        }
        return acc / wsum;
    };

    const double scale = static_cast<double>(n) / m;
    // horizontal pass: n rows, m columns
    std::vector<double> mid(static_cast<size_t>(n) * m);
    for (int y = 0; y < n; ++y) {
        std::vector<double> row(in.begin() + static_cast<size_t>(y) * n,
                                in.begin() + static_cast<size_t>(y + 1) * n);
        for (int x = 0; x < m; ++x) {
            const double sx = (x + 0.5) * scale - 0.5;
            mid[static_cast<size_t>(y) * m + x] = sample_row(row, 1, n, sx);
        }
    }
    // vertical pass: m rows, m columns
    std::vector<double> out(static_cast<size_t>(m) * m);
    for (int x = 0; x < m; ++x) {
        std::vector<double> col(n);
        for (int y = 0; y < n; ++y) col[y] = mid[static_cast<size_t>(y) * m + x];
        for (int y = 0; y < m; ++y) {
            const double sy = (y + 0.5) * scale - 0.5;
            out[static_cast<size_t>(y) * m + x] = sample_row(col, 1, n, sy);
        }
    }
    return out;
}

}  // namespace

CsfMask build_csf_mask(int m) {
    if (m < 4) throw std::invalid_argument("build_csf_mask: block size must be >= 4");

    std::vector<double> base(64);
    double sum = 0.0;
    for (int i = 0; i < 64; ++i) {
        base[i] = 1.0 / kJpegLumaQ[i];
        sum += base[i];
    }
    const double mean = sum / 64.0;
    for (double& v : base) v /= mean;

    CsfMask mask;
    mask.size = m;
    if (m == 8) {
        mask.weights = std::move(base);
        return mask;
    }

    mask.weights = resample_bicubic(base, 8, m);
    // cubic overshoot can dip below zero next to the table's sharp corner
    for (double& v : mask.weights) v = std::max(v, 1e-6);
    double s = 0.0;
    for (double v : mask.weights) s += v;
    const double norm = s / (static_cast<double>(m) * m);
    for (double& v : mask.weights) v /= norm;
    return mask;
}

}  // namespace svq
