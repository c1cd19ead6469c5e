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

#include "svq/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace svq {

namespace {

constexpr double kSsimK1 = 0.01;
constexpr double kSsimK2 = 0.03;

struct Buf {
    int w = 0, h = 0;
    std::vector<double> v;
    Buf() = default;
    Buf(int w_, int h_) : w(w_), h(h_), v(static_cast<size_t>(w_) * h_) {}
    double* row(int y) { return v.data() + static_cast<size_t>(y) * w; }
    const double* row(int y) const { return v.data() + static_cast<size_t>(y) * w; }
};

// Separable 'valid' convolution with a symmetric 1D kernel.
Buf conv_valid(const Buf& in, const std::vector<double>& k) {
    const int n = static_cast<int>(k.size());
    Buf mid(in.w - n + 1, in.h);
    for (int y = 0; y < in.h; ++y) {
        const double* src = in.row(y);
        double* dst = mid.row(y);
        for (int x = 0; x < mid.w; ++x) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += src[x + i] * k[i];
            dst[x] = acc;
        }
    }
    Buf out(mid.w, in.h - n + 1);
    for (int y = 0; y < out.h; ++y) {
        double* dst = out.row(y);
        for (int x = 0; x < out.w; ++x) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += mid.row(y + i)[x] * k[i];
            dst[x] = acc;
        }
    }
    return out;
}

Buf to_buf(const double* data, int w, int h) {
    Buf b(w, h);
    std::copy(data, data + static_cast<size_t>(w) * h, b.v.begin());
    return b;
}

Buf multiply(const Buf& a, const Buf& b) {
    Buf out(a.w, a.h);
    for (size_t i = 0; i < out.v.size(); ++i) out.v[i] = a.v[i] * b.v[i];
    return out;
}

// Per-pixel SSIM over the valid window region of two raw buffers.
Buf ssim_valid_map(const double* ref, const double* dist, int w, int h, double peak, int* offset) {
    const int win = std::min(11, std::min(w, h));
    if (win < 2) throw std::invalid_argument("ssim: plane too small");
    const std::vector<double> kernel = gaussian_kernel(win, 1.5 * win / 11.0);
    if (offset) *offset = (win - 1) / 2;

    const Buf a = to_buf(ref, w, h);
    const Buf b = to_buf(dist, w, h);
    const Buf mu1 = conv_valid(a, kernel);
    const Buf mu2 = conv_valid(b, kernel);
    const Buf exx = conv_valid(multiply(a, a), kernel);
    const Buf eyy = conv_valid(multiply(b, b), kernel);
    const Buf exy = conv_valid(multiply(a, b), kernel);

    const double c1 = (kSsimK1 * peak) * (kSsimK1 * peak);
    const double c2 = (kSsimK2 * peak) * (kSsimK2 * peak);

    Buf out(mu1.w, mu1.h);
    for (size_t i = 0; i < out.v.size(); ++i) {
        const double m1 = mu1.v[i], m2 = mu2.v[i];
        const double s11 = exx.v[i] - m1 * m1;
        const double s22 = eyy.v[i] - m2 * m2;
        const double s12 = exy.v[i] - m1 * m2;
        out.v[i] = ((2.0 * m1 * m2 + c1) * (2.0 * s12 + c2)) /
                   ((m1 * m1 + m2 * m2 + c1) * (s11 + s22 + c2));
    }
    return out;
}

// Mean of `values`, weighted by the matching interior of a full-size
// weight plane when given.
double region_mean(const Buf& values, const Plane* weights, int off_x, int off_y) {
    if (!weights) {
        double acc = 0.0;
        for (double v : values.v) acc += v;
        return acc / static_cast<double>(values.v.size());
    }
    double num = 0.0, den = 0.0;
    for (int y = 0; y < values.h; ++y) {
        const double* v = values.row(y);
        const double* s = weights->row(y + off_y) + off_x;
        for (int x = 0; x < values.w; ++x) {
            num += v[x] * s[x];
            den += s[x];
        }
    }
    if (den <= 0.0) throw std::invalid_argument("weighted mean: weights sum to zero over region");
    return num / den;
}

void require_same_size(const Plane& a, const Plane& b, const char* who) {
    if (!a.same_size(b)) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

}  // namespace

std::vector<double> gaussian_kernel(int size, double sigma) {
    std::vector<double> k(size);
    const double c = (size - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        k[i] = std::exp(-(i - c) * (i - c) / (2.0 * sigma * sigma));
        sum += k[i];
    }
    for (double& v : k) v /= sum;
    return k;
}

SsimMap ssim_map(const Plane& ref, const Plane& dist) {
    require_same_size(ref, dist, "ssim_map");
    int off = 0;
    const Buf m = ssim_valid_map(ref.samples.data(), dist.samples.data(), ref.width, ref.height,
                                 ref.peak(), &off);
    SsimMap out;
    out.map = Plane(m.w, m.h, 0.0, ref.bit_depth);
    out.map.samples = m.v;
    out.offset_x = off;
    out.offset_y = off;
    out.mean = region_mean(m, nullptr, 0, 0);
    return out;
}

double ssim_mean(const Plane& ref, const Plane& dist, const Plane* weights) {
    require_same_size(ref, dist, "ssim_mean");
    if (weights) require_same_size(ref, *weights, "ssim_mean weights");
    int off = 0;
    const Buf m = ssim_valid_map(ref.samples.data(), dist.samples.data(), ref.width, ref.height,
                                 ref.peak(), &off);
    return region_mean(m, weights, off, off);
}

double ssim_value(const double* ref, const double* dist, int w, int h, double peak) {
    const Buf m = ssim_valid_map(ref, dist, w, h, peak, nullptr);
    return region_mean(m, nullptr, 0, 0);
}

double psnr_weighted(const Plane& ref, const Plane& dist, const Plane* weights, double cap) {
    require_same_size(ref, dist, "psnr");
    if (ref.bit_depth != dist.bit_depth) throw std::invalid_argument("psnr: bit depth mismatch");
    if (weights) require_same_size(ref, *weights, "psnr weights");
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < ref.samples.size(); ++i) {
        const double d = ref.samples[i] - dist.samples[i];
        const double w = weights ? weights->samples[i] : 1.0;
        num += d * d * w;
        den += w;
    }
    if (den <= 0.0) throw std::invalid_argument("psnr: weights sum to zero");
    const double mse = num / den;
    if (mse <= 0.0) return cap;
    return std::min(cap, 10.0 * std::log10(ref.peak() * ref.peak() / mse));
}

double psnr(const Plane& ref, const Plane& dist, double cap) {
    return psnr_weighted(ref, dist, nullptr, cap);
}

double ms_ssim_weighted(const Plane& ref, const Plane& dist, const std::vector<Plane>* scale_weights,
                        int scales) {
    require_same_size(ref, dist, "ms_ssim");
    if (scales < 1 || scales > kMsssimScales) throw std::invalid_argument("ms_ssim: bad scale count");
    if (std::min(ref.width, ref.height) < (1 << scales))
        throw std::invalid_argument("ms_ssim: plane too small for scale count");
    if (scale_weights && static_cast<int>(scale_weights->size()) != scales)
        throw std::invalid_argument("ms_ssim: weight pyramid level count mismatch");

    Plane r = ref, d = dist;
    double score = 1.0;
    for (int j = 0; j < scales; ++j) {
        if (j > 0) {
            r = downsample2x(r);
            d = downsample2x(d);
        }
        const Plane* w = scale_weights ? &(*scale_weights)[j] : nullptr;
        if (w && !w->same_size(r)) throw std::invalid_argument("ms_ssim: weight level size mismatch");

        const int win = std::min(11, std::min(r.width, r.height));
        const std::vector<double> kernel = gaussian_kernel(win, 1.5 * win / 11.0);
        const int off = (win - 1) / 2;
        const double c1 = (kSsimK1 * r.peak()) * (kSsimK1 * r.peak());
        const double c2 = (kSsimK2 * r.peak()) * (kSsimK2 * r.peak());

        const Buf a = to_buf(r.samples.data(), r.width, r.height);
        const Buf b = to_buf(d.samples.data(), d.width, d.height);
        const Buf mu1 = conv_valid(a, kernel);
        const Buf mu2 = conv_valid(b, kernel);
        const Buf exx = conv_valid(multiply(a, a), kernel);
        const Buf eyy = conv_valid(multiply(b, b), kernel);
        const Buf exy = conv_valid(multiply(a, b), kernel);

        Buf term(mu1.w, mu1.h);
        const bool coarsest = (j == scales - 1);
        for (size_t i = 0; i < term.v.size(); ++i) {
            const double m1 = mu1.v[i], m2 = mu2.v[i];
            const double s11 = exx.v[i] - m1 * m1;
            const double s22 = eyy.v[i] - m2 * m2;
            const double s12 = exy.v[i] - m1 * m2;
            const double cs = (2.0 * s12 + c2) / (s11 + s22 + c2);
            if (coarsest)
                term.v[i] = cs * (2.0 * m1 * m2 + c1) / (m1 * m1 + m2 * m2 + c1);
            else
                term.v[i] = cs;
        }
        const double mean = std::max(0.0, region_mean(term, w, off, off));
        score *= std::pow(mean, kMsssimWeights[j]);
    }
    return score;
}

double ms_ssim(const Plane& ref, const Plane& dist, int scales) {
    return ms_ssim_weighted(ref, dist, nullptr, scales);
}

std::vector<std::pair<int, int>> vif_scale_dims(int w, int h) {
    std::vector<std::pair<int, int>> dims;
    for (int scale = 1; scale <= kVifScales; ++scale) {
        if (scale > 1) {
            const int n = (1 << (kVifScales - scale + 1)) + 1;
            w = (w - n + 1 + 1) / 2;
            h = (h - n + 1 + 1) / 2;
        }
        dims.emplace_back(w, h);
    }
    return dims;
}

Plane vif_downsample(const Plane& in, int next_level) {
    const int n = (1 << (kVifScales - next_level + 1)) + 1;
    const std::vector<double> kernel = gaussian_kernel(n, n / 5.0);
    const Buf f = conv_valid(to_buf(in.samples.data(), in.width, in.height), kernel);
    Plane out((f.w + 1) / 2, (f.h + 1) / 2, 0.0, in.bit_depth);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x) out.at(x, y) = f.row(2 * y)[2 * x];
    return out;
}

double vif_weighted(const Plane& ref, const Plane& dist, const std::vector<Plane>* scale_weights) {
    require_same_size(ref, dist, "vif");
    if (scale_weights && static_cast<int>(scale_weights->size()) != kVifScales)
        throw std::invalid_argument("vif: weight pyramid level count mismatch");

    Plane r = ref, d = dist;
    double num = 0.0, den = 0.0;
    for (int scale = 1; scale <= kVifScales; ++scale) {
        const int n = (1 << (kVifScales - scale + 1)) + 1;
        if (scale > 1) {
            r = vif_downsample(r, scale);
            d = vif_downsample(d, scale);
        }
        if (r.width < n || r.height < n)
            throw std::invalid_argument("vif: plane too small for scale pyramid");
        const Plane* w = scale_weights ? &(*scale_weights)[scale - 1] : nullptr;
        if (w && !w->same_size(r)) throw std::invalid_argument("vif: weight level size mismatch");

        const std::vector<double> kernel = gaussian_kernel(n, n / 5.0);
        const Buf a = to_buf(r.samples.data(), r.width, r.height);
        const Buf b = to_buf(d.samples.data(), d.width, d.height);
        const Buf mu1 = conv_valid(a, kernel);
        const Buf mu2 = conv_valid(b, kernel);
        const Buf exx = conv_valid(multiply(a, a), kernel);
        const Buf eyy = conv_valid(multiply(b, b), kernel);
        const Buf exy = conv_valid(multiply(a, b), kernel);
        const int off = (n - 1) / 2;

        for (int y = 0; y < mu1.h; ++y) {
            const double* sw = w ? w->row(y + off) + off : nullptr;
            for (int x = 0; x < mu1.w; ++x) {
                const size_t i = static_cast<size_t>(y) * mu1.w + x;
                const double m1 = mu1.v[i], m2 = mu2.v[i];
                double s11 = exx.v[i] - m1 * m1;
                double s22 = eyy.v[i] - m2 * m2;
                double s12 = exy.v[i] - m1 * m2;
                if (s11 < 0.0) s11 = 0.0;
                if (s22 < 0.0) s22 = 0.0;

                double g = s12 / (s11 + 1e-10);
                double sv = s22 - g * s12;
                if (s11 < 1e-10) {
                    g = 0.0;
                    sv = s22;
                    s11 = 0.0;
                }
                if (s22 < 1e-10) {
                    g = 0.0;
                    sv = 0.0;
                }
                if (g < 0.0) {
                    sv = s22;
                    g = 0.0;
                }
                if (sv < 1e-10) sv = 1e-10;

                const double wt = sw ? sw[x] : 1.0;
                num += std::log10(1.0 + g * g * s11 / (sv + kVifNoiseVariance)) * wt;
                den += std::log10(1.0 + s11 / kVifNoiseVariance) * wt;
            }
        }
    }
    if (den <= 1e-12) return 1.0;  // no reference information; fidelity is vacuous
    return num / den;
}

double vif(const Plane& ref, const Plane& dist) {
    return vif_weighted(ref, dist, nullptr);
}

}  // namespace svq
