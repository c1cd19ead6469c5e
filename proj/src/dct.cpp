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

#include "svq/dct.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace svq {

namespace {

// Orthonormal DCT-II basis: B[u][i] = a(u) cos(pi (2i+1) u / (2m)),
// a(0) = sqrt(1/m), a(u>0) = sqrt(2/m). Rows of B are orthonormal.
struct DctBasis {
    int m = 0;
    std::vector<double> fwd;  // m*m, fwd[u*m + i]
};

const DctBasis& basis_for(int m) {
    static std::map<int, DctBasis> cache;
    static std::mutex mu;
    std::lock_guard lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;

    DctBasis b;
    b.m = m;
    b.fwd.resize(static_cast<size_t>(m) * m);
    const double a0 = std::sqrt(1.0 / m);
    const double a = std::sqrt(2.0 / m);
    for (int u = 0; u < m; ++u)
        for (int i = 0; i < m; ++i)
            b.fwd[static_cast<size_t>(u) * m + i] =
                (u == 0 ? a0 : a) * std::cos(std::numbers::pi * (2 * i + 1) * u / (2.0 * m));
    return cache.emplace(m, std::move(b)).first->second;
}

// out = B * in * B^T (forward) or B^T * in * B (inverse), via two passes.
void transform(double* data, int m, bool forward) {
    const DctBasis& b = basis_for(m);
    std::vector<double> tmp(static_cast<size_t>(m) * m);
    // rows: tmp[y][u] = sum_i data[y][i] * B[u][i]  (forward)
    for (int y = 0; y < m; ++y) {
        const double* src = data + static_cast<size_t>(y) * m;
        for (int u = 0; u < m; ++u) {
            const double* row = b.fwd.data() + static_cast<size_t>(u) * m;
            double acc = 0.0;
            if (forward) {
                for (int i = 0; i < m; ++i) acc += src[i] * row[i];
            } else {
                for (int i = 0; i < m; ++i) acc += src[i] * b.fwd[static_cast<size_t>(i) * m + u];
            }
            tmp[static_cast<size_t>(y) * m + u] = acc;
        }
    }
    // columns
    for (int x = 0; x < m; ++x) {
        std::vector<double> col(m);
        for (int u = 0; u < m; ++u) {
            double acc = 0.0;
            if (forward) {
                const double* row = b.fwd.data() + static_cast<size_t>(u) * m;
                for (int i = 0; i < m; ++i) acc += tmp[static_cast<size_t>(i) * m + x] * row[i];
            } else {
                for (int i = 0; i < m; ++i)
                    acc += tmp[static_cast<size_t>(i) * m + x] * b.fwd[static_cast<size_t>(i) * m + u];
            }
            col[u] = acc;
        }
        for (int u = 0; u < m; ++u) data[static_cast<size_t>(u) * m + x] = col[u];
    }
}

}  // namespace

void dct2_inplace(double* data, int m) {
    if (m < 2) throw std::invalid_argument("dct2: block size must be >= 2");
    transform(data, m, true);
}

void idct2_inplace(double* data, int m) {
    if (m < 2) throw std::invalid_argument("idct2: block size must be >= 2");
    transform(data, m, false);
}

std::vector<double> dct2(const Block& block) {
    std::vector<double> out = block.samples;
    dct2_inplace(out.data(), block.size);
    return out;
}

Block idct2(const std::vector<double>& coeffs, int m, int x, int y) {
    if (coeffs.size() != static_cast<size_t>(m) * m)
        throw std::invalid_argument("idct2: coefficient count does not match block size");
    Block b;
    b.x = x;
    b.y = y;
    b.size = m;
    b.samples = coeffs;
    idct2_inplace(b.samples.data(), m);
    return b;
}

}  // namespace svq
