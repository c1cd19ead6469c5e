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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "svq/csf.hpp"
#include "svq/dct.hpp"
#include "svq/fidelity.hpp"
#include "svq/plane.hpp"

using namespace svq;
using namespace svq::test;

namespace {

// Direct O(m^4) orthonormal DCT-II, independent of the library path.
std::vector<double> oracle_dct2(const std::vector<double>& x, int m) {
    std::vector<double> out(x.size());
    for (int u = 0; u < m; ++u)
        for (int v = 0; v < m; ++v) {
            double acc = 0.0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    acc += x[static_cast<size_t>(i) * m + j] *
                           std::cos(std::numbers::pi * (2 * i + 1) * u / (2.0 * m)) *
                           std::cos(std::numbers::pi * (2 * j + 1) * v / (2.0 * m));
            const double au = u == 0 ? std::sqrt(1.0 / m) : std::sqrt(2.0 / m);
            const double av = v == 0 ? std::sqrt(1.0 / m) : std::sqrt(2.0 / m);
            out[static_cast<size_t>(u) * m + v] = au * av * acc;
        }
    return out;
}

// Scalar re-implementation of windowed SSIM: direct per-window loops.
double oracle_ssim_mean(const Plane& ref, const Plane& dist) {
    const int win = std::min(11, std::min(ref.width, ref.height));
    const double sigma = 1.5 * win / 11.0;
    std::vector<double> k(static_cast<size_t>(win) * win);
    double ksum = 0.0;
    const double c = (win - 1) / 2.0;
    for (int y = 0; y < win; ++y)
        for (int x = 0; x < win; ++x) {
            k[static_cast<size_t>(y) * win + x] =
                std::exp(-((x - c) * (x - c) + (y - c) * (y - c)) / (2.0 * sigma * sigma));
            ksum += k[static_cast<size_t>(y) * win + x];
        }
    for (double& v : k) v /= ksum;

    const double peak = ref.peak();
    const double c1 = (0.01 * peak) * (0.01 * peak);
    const double c2 = (0.03 * peak) * (0.03 * peak);

    double acc = 0.0;
    int n = 0;
    for (int oy = 0; oy + win <= ref.height; ++oy)
        for (int ox = 0; ox + win <= ref.width; ++ox) {
            double m1 = 0, m2 = 0, e11 = 0, e22 = 0, e12 = 0;
            for (int y = 0; y < win; ++y)
                for (int x = 0; x < win; ++x) {
                    const double w = k[static_cast<size_t>(y) * win + x];
                    const double a = ref.at(ox + x, oy + y);
                    const double b = dist.at(ox + x, oy + y);
                    m1 += w * a;
                    m2 += w * b;
                    e11 += w * a * a;
                    e22 += w * b * b;
                    e12 += w * a * b;
                }
            const double s11 = e11 - m1 * m1, s22 = e22 - m2 * m2, s12 = e12 - m1 * m2;
            acc += ((2 * m1 * m2 + c1) * (2 * s12 + c2)) /
                   ((m1 * m1 + m2 * m2 + c1) * (s11 + s22 + c2));
            ++n;
        }
    return acc / n;
}

double oracle_ssim_cs_mean(const Plane& ref, const Plane& dist) {
    const int win = std::min(11, std::min(ref.width, ref.height));
    const double sigma = 1.5 * win / 11.0;
    std::vector<double> k(static_cast<size_t>(win) * win);
    double ksum = 0.0;
    const double c = (win - 1) / 2.0;
    for (int y = 0; y < win; ++y)
        for (int x = 0; x < win; ++x) {
            k[static_cast<size_t>(y) * win + x] =
                std::exp(-((x - c) * (x - c) + (y - c) * (y - c)) / (2.0 * sigma * sigma));
            ksum += k[static_cast<size_t>(y) * win + x];
        }
    for (double& v : k) v /= ksum;
    const double peak = ref.peak();
    const double c2 = (0.03 * peak) * (0.03 * peak);

    double acc = 0.0;
    int n = 0;
    for (int oy = 0; oy + win <= ref.height; ++oy)
        for (int ox = 0; ox + win <= ref.width; ++ox) {
            double m1 = 0, m2 = 0, e11 = 0, e22 = 0, e12 = 0;
            for (int y = 0; y < win; ++y)
                for (int x = 0; x < win; ++x) {
                    const double w = k[static_cast<size_t>(y) * win + x];
                    const double a = ref.at(ox + x, oy + y);
                    const double b = dist.at(ox + x, oy + y);
                    m1 += w * a;
                    m2 += w * b;
                    e11 += w * a * a;
                    e22 += w * b * b;
                    e12 += w * a * b;
                }
            const double s11 = e11 - m1 * m1, s22 = e22 - m2 * m2, s12 = e12 - m1 * m2;
            acc += (2 * s12 + c2) / (s11 + s22 + c2);
            ++n;
        }
    return acc / n;
}

Plane oracle_halve(const Plane& in) {
    Plane out(in.width / 2, in.height / 2, 0.0, in.bit_depth);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            out.at(x, y) = (in.at(2 * x, 2 * y) + in.at(2 * x + 1, 2 * y) + in.at(2 * x, 2 * y + 1) +
                            in.at(2 * x + 1, 2 * y + 1)) /
                           4.0;
    return out;
}

// Independent per-scale product oracle for MS-SSIM.
double oracle_ms_ssim(Plane ref, Plane dist) {
    double score = 1.0;
    for (int j = 0; j < kMsssimScales; ++j) {
        if (j > 0) {
            ref = oracle_halve(ref);
            dist = oracle_halve(dist);
        }
        const double term = (j == kMsssimScales - 1) ? oracle_ssim_mean(ref, dist)
                                                     : oracle_ssim_cs_mean(ref, dist);
        score *= std::pow(std::max(0.0, term), kMsssimWeights[j]);
    }
    return score;
}

}  // namespace

TEST_CASE("luma extraction") {
    SUBCASE("white maps to peak") {
        const std::vector<uint8_t> rgb = {255, 255, 255};
        const Plane p = luma_extract(rgb, 1, 1, RasterLayout::InterleavedRgb8);
        CHECK(p.samples[0] == doctest::Approx(255.0));
    }
    SUBCASE("pure red, BT.601 rounded") {
        const std::vector<uint8_t> rgb = {255, 0, 0};
        const Plane p = luma_extract(rgb, 1, 1, RasterLayout::InterleavedRgb8);
        CHECK(p.samples[0] == doctest::Approx(std::round(0.299 * 255)));  // 76
        CHECK(p.samples[0] == 76.0);
    }
    SUBCASE("single-plane passthrough") {
        std::vector<uint8_t> y(16 * 8);
        for (size_t i = 0; i < y.size(); ++i) y[i] = static_cast<uint8_t>(i);
        const Plane p = luma_extract(y, 16, 8, RasterLayout::PlanarY8);
        for (size_t i = 0; i < y.size(); ++i) CHECK(p.samples[i] == static_cast<double>(y[i]));
    }
    SUBCASE("bad layout size") {
        const std::vector<uint8_t> rgb = {1, 2};
        CHECK_THROWS(luma_extract(rgb, 1, 1, RasterLayout::InterleavedRgb8));
    }
}

TEST_CASE("block partitioning") {
    CHECK(partition_blocks(Plane(32, 32), 16).cols == 2);
    CHECK(partition_blocks(Plane(32, 32), 16).rows == 2);

    const BlockGrid hd = partition_blocks(Plane(1920, 1080), 16);
    CHECK(hd.cols == 120);
    CHECK(hd.rows == 67);
    CHECK(hd.covered_width() == 1920);
    CHECK(hd.covered_height() == 1072);

    CHECK(partition_blocks(Plane(16, 16), 16).count() == 1);
    CHECK_THROWS(partition_blocks(Plane(8, 8), 16));
}

TEST_CASE("dct round trip and closed forms") {
    SUBCASE("round trip exact to 1e-9 for m in {4,8,16,32}") {
        for (int m : {4, 8, 16, 32}) {
            const Plane p = random_plane(m, m, 100 + m);
            Block b = extract_block(p, 0, 0, m);
            const std::vector<double> coeffs = dct2(b);
            const Block back = idct2(coeffs, m);
            for (size_t i = 0; i < b.samples.size(); ++i)
                CHECK(back.samples[i] == doctest::Approx(b.samples[i]).epsilon(0).scale(1).epsilon(1e-12));
        }
    }
    SUBCASE("constant block, m=8: DC = 8c, rest 0") {
        Block b;
        b.size = 8;
        b.samples.assign(64, 3.25);
        const std::vector<double> coeffs = dct2(b);
        CHECK(coeffs[0] == doctest::Approx(8.0 * 3.25).epsilon(1e-12));
        for (size_t i = 1; i < coeffs.size(); ++i) CHECK(std::abs(coeffs[i]) < 1e-9);
    }
    SUBCASE("energy preservation") {
        const Plane p = random_plane(16, 16, 5);
        Block b = extract_block(p, 0, 0, 16);
        const std::vector<double> coeffs = dct2(b);
        double ex = 0, ec = 0;
        for (double v : b.samples) ex += v * v;
        for (double v : coeffs) ec += v * v;
        CHECK(ex == doctest::Approx(ec).epsilon(1e-12));
    }
    SUBCASE("matches direct O(m^4) oracle") {
        for (int m : {4, 8}) {
            const Plane p = random_plane(m, m, 42 + m);
            Block b = extract_block(p, 0, 0, m);
            const std::vector<double> lib = dct2(b);
            const std::vector<double> ora = oracle_dct2(b.samples, m);
            for (size_t i = 0; i < lib.size(); ++i) CHECK(lib[i] == doctest::Approx(ora[i]).epsilon(1e-10));
        }
    }
}

TEST_CASE("csf mask") {
    SUBCASE("mean 1 for m in {8,16}") {
        for (int m : {8, 16}) {
            const CsfMask mask = build_csf_mask(m);
            double sum = 0.0;
            for (double v : mask.weights) sum += v;
            CHECK(sum / (m * m) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("m=8 maximum sits at (0,2), the table's minimum entry") {
        const CsfMask mask = build_csf_mask(8);
        size_t argmax = 0;
        for (size_t i = 1; i < mask.weights.size(); ++i)
            if (mask.weights[i] > mask.weights[argmax]) argmax = i;
        CHECK(argmax == 2);  // row 0, column 2
    }
    SUBCASE("all elements positive") {
        for (int m : {8, 12, 16, 32}) {
            const CsfMask mask = build_csf_mask(m);
            for (double v : mask.weights) CHECK(v > 0.0);
        }
    }
}

TEST_CASE("ssim") {
    SUBCASE("identical planes give map of ones, mean 1") {
        const Plane p = textured_plane(48, 40);
        const SsimMap m = ssim_map(p, p);
        CHECK(m.mean == doctest::Approx(1.0).epsilon(1e-12));
        for (double v : m.map.samples) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m.map.width == 48 - 10);
        CHECK(m.map.height == 40 - 10);
    }
    SUBCASE("crafted 16x16 pair matches the direct-formula oracle") {
        const Plane a = textured_plane(16, 16, 3);
        const Plane b = add_noise(a, 6.0, 4);
        CHECK(ssim_mean(a, b) == doctest::Approx(oracle_ssim_mean(a, b)).epsilon(1e-6));
    }
    SUBCASE("constant planes: closed-form luminance term") {
        const double c = 120.0, delta = 18.0;
        const Plane a(24, 24, c);
        const Plane b(24, 24, c + delta);
        const double c1 = (0.01 * 255) * (0.01 * 255);
        const double expected = (2 * c * (c + delta) + c1) / (c * c + (c + delta) * (c + delta) + c1);
        CHECK(ssim_mean(a, b) == doctest::Approx(expected).epsilon(1e-12));
    }
    SUBCASE("map values stay in [-1, 1]") {
        const Plane a = random_plane(32, 32, 9);
        const Plane b = random_plane(32, 32, 10);
        const SsimMap m = ssim_map(a, b);
        for (double v : m.map.samples) {
            CHECK(v <= 1.0 + 1e-12);
            CHECK(v >= -1.0 - 1e-12);
        }
    }
    SUBCASE("dimension mismatch") { CHECK_THROWS(ssim_mean(Plane(8, 8), Plane(9, 8))); }
}

TEST_CASE("psnr") {
    SUBCASE("identical returns the 100 dB cap") {
        const Plane p = textured_plane(32, 32);
        CHECK(psnr(p, p) == doctest::Approx(100.0));
    }
    SUBCASE("uniform |diff| = 16 on 8-bit") {
        const Plane a(16, 16, 100.0);
        const Plane b(16, 16, 116.0);
        const double expected = 10.0 * std::log10(255.0 * 255.0 / 256.0);
        CHECK(psnr(a, b) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(expected == doctest::Approx(24.0483966).epsilon(1e-6));
    }
    SUBCASE("matches the naive double-loop MSE oracle on 100 random pairs") {
        for (int t = 0; t < 100; ++t) {
            const Plane a = random_plane(17, 13, 1000 + t);
            const Plane b = random_plane(17, 13, 2000 + t);
            double mse = 0.0;
            for (int y = 0; y < a.height; ++y)
                for (int x = 0; x < a.width; ++x) {
                    const double d = a.at(x, y) - b.at(x, y);
                    mse += d * d;
                }
            mse /= a.width * a.height;
            const double expected = 10.0 * std::log10(255.0 * 255.0 / mse);
            CHECK(psnr(a, b) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
    SUBCASE("bit depth mismatch is an error") {
        Plane a(8, 8, 0.0, 8), b(8, 8, 0.0, 10);
        CHECK_THROWS(psnr(a, b));
    }
}

TEST_CASE("ms-ssim") {
    SUBCASE("identical gives 1 within 1e-9") {
        const Plane p = textured_plane(96, 64);
        CHECK(ms_ssim(p, p) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("bounded by 1") {
        for (int t = 0; t < 5; ++t) {
            const Plane a = random_plane(64, 64, 50 + t);
            const Plane b = random_plane(64, 64, 60 + t);
            CHECK(ms_ssim(a, b) <= 1.0 + 1e-9);
        }
    }
    SUBCASE("64x64 crafted pair matches the per-scale product oracle") {
        const Plane a = textured_plane(64, 64, 11);
        const Plane b = add_noise(a, 10.0, 12);
        CHECK(ms_ssim(a, b) == doctest::Approx(oracle_ms_ssim(a, b)).epsilon(1e-6));
    }
    SUBCASE("odd dimensions evaluate without crashing, scores move continuously") {
        const Plane a = textured_plane(67, 53, 13);
        const Plane b = add_noise(a, 8.0, 14);
        const double full = ms_ssim(a, b);
        CHECK(std::isfinite(full));
        CHECK(full > 0.0);
        CHECK(ms_ssim(a, b, 4) > 0.0);
        CHECK_THROWS(ms_ssim(Plane(16, 16), Plane(16, 16)));  // too small for 5 scales
    }
}

TEST_CASE("vif") {
    SUBCASE("identical gives 1 within 1e-3") {
        const Plane p = textured_plane(128, 96);
        CHECK(vif(p, p) == doctest::Approx(1.0).epsilon(1e-3));
    }
    SUBCASE("constant distorted plane carries almost no information") {
        const Plane ref = textured_plane(128, 96, 21);
        const Plane flat(128, 96, 128.0);
        CHECK(vif(ref, flat) < 0.05);
    }
    SUBCASE("additive noise sweep decreases the score strictly") {
        const Plane ref = textured_plane(128, 96, 22);
        double prev = 2.0;
        for (double sigma : {2.0, 8.0, 32.0}) {
            const double v = vif(ref, add_noise(ref, sigma, 23));
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("fidelity primitives are pure functions") {
    const Plane a = textured_plane(64, 64, 31);
    const Plane b = add_noise(a, 5.0, 32);
    CHECK(psnr(a, b) == psnr(a, b));
    CHECK(ssim_mean(a, b) == ssim_mean(a, b));
    CHECK(ms_ssim(a, b) == ms_ssim(a, b));
    CHECK(vif(a, b) == vif(a, b));
}
