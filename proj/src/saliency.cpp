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

#include "svq/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "svq/fidelity.hpp"

namespace svq {

namespace {

void require_same_size(const Plane& a, const Plane& b, const char* who) {
    if (!a.same_size(b)) throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

// Temporal mean of a per-frame metric evaluated on both views.
template <typename F>
double sequence_mean(std::span<const StereoPair> ref, std::span<const StereoPair> dist,
                     std::span<const Plane> saliency, F&& frame_metric) {
    const size_t n = ref.size();
    if (n == 0) throw std::invalid_argument("sequence metric: empty sequence");
    if (dist.size() != n) throw std::invalid_argument("sequence metric: length mismatch");
    if (!saliency.empty() && saliency.size() != n)
        throw std::invalid_argument("sequence metric: saliency length mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Plane* s = saliency.empty() ? nullptr : &saliency[i];
        const double left = frame_metric(ref[i].left, dist[i].left, s);
        const double right = frame_metric(ref[i].right, dist[i].right, s);
        acc += 0.5 * (left + right);
    }
    return acc / static_cast<double>(n);
}

}  // namespace

void validate_saliency(const Plane& s) {
    bool any = false;
    for (double v : s.samples) {
        if (v < 0.0 || !std::isfinite(v))
            throw std::invalid_argument("saliency map: negative or non-finite value");
        if (v > 0.0) any = true;
    }
    if (!any) throw std::invalid_argument("saliency map: all values zero");
}

Plane normalize_saliency(const Plane& s) {
    validate_saliency(s);
    double sum = 0.0;
    for (double v : s.samples) sum += v;
    const double mean = sum / static_cast<double>(s.samples.size());
    Plane out = s;
    for (double& v : out.samples) v /= mean;
    return out;
}

double weighted_mean(const Plane& values, const Plane& s) {
    require_same_size(values, s, "weighted_mean");
    validate_saliency(s);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < values.samples.size(); ++i) {
        num += values.samples[i] * s.samples[i];
        den += s.samples[i];
    }
    return num / den;
}

SaliencyPyramid build_msssim_pyramid(const Plane& s, int scales) {
    SaliencyPyramid pyr;
    pyr.levels.reserve(scales);
    pyr.levels.push_back(s);
    for (int j = 1; j < scales; ++j) pyr.levels.push_back(downsample2x(pyr.levels.back()));
    return pyr;
}

SaliencyPyramid build_vif_pyramid(const Plane& s) {
    SaliencyPyramid pyr;
    pyr.levels.reserve(kVifScales);
    pyr.levels.push_back(s);
    for (int scale = 2; scale <= kVifScales; ++scale)
        pyr.levels.push_back(vif_downsample(pyr.levels.back(), scale));
    return pyr;
}

double psnr_s_frame(const Plane& ref, const Plane& dist, const Plane* s, double cap) {
    if (s) validate_saliency(*s);
    return psnr_weighted(ref, dist, s, cap);
}

double ssim_s_frame(const Plane& ref, const Plane& dist, const Plane* s) {
    if (s) validate_saliency(*s);
    return ssim_mean(ref, dist, s);
}

double msssim_s_frame(const Plane& ref, const Plane& dist, const SaliencyPyramid* pyr) {
    return ms_ssim_weighted(ref, dist, pyr ? &pyr->levels : nullptr);
}

double vif_s_frame(const Plane& ref, const Plane& dist, const SaliencyPyramid* pyr) {
    return vif_weighted(ref, dist, pyr ? &pyr->levels : nullptr);
}

double psnr_s(std::span<const StereoPair> ref, std::span<const StereoPair> dist,
              std::span<const Plane> saliency, double cap) {
    return sequence_mean(ref, dist, saliency, [cap](const Plane& r, const Plane& d, const Plane* s) {
        return psnr_s_frame(r, d, s, cap);
    });
}

double ssim_s(std::span<const StereoPair> ref, std::span<const StereoPair> dist,
              std::span<const Plane> saliency) {
    return sequence_mean(ref, dist, saliency, [](const Plane& r, const Plane& d, const Plane* s) {
        return ssim_s_frame(r, d, s);
    });
}

double msssim_s(std::span<const StereoPair> ref, std::span<const StereoPair> dist,
                std::span<const Plane> saliency) {
    return sequence_mean(ref, dist, saliency, [](const Plane& r, const Plane& d, const Plane* s) {
        if (!s) return msssim_s_frame(r, d, nullptr);
        validate_saliency(*s);
        const SaliencyPyramid pyr = build_msssim_pyramid(*s);
        return msssim_s_frame(r, d, &pyr);
    });
}

double vif_s(std::span<const StereoPair> ref, std::span<const StereoPair> dist,
             std::span<const Plane> saliency) {
    return sequence_mean(ref, dist, saliency, [](const Plane& r, const Plane& d, const Plane* s) {
        if (!s) return vif_s_frame(r, d, nullptr);
        validate_saliency(*s);
        const SaliencyPyramid pyr = build_vif_pyramid(*s);
        return vif_s_frame(r, d, &pyr);
    });
}

double hv3d_s(std::span<const StereoPair> ref, std::span<const StereoPair> dist,
              std::span<const Plane> ref_depth, std::span<const Plane> dist_depth,
              std::span<const DisparityMap> disparity, std::span<const Plane> saliency,
              const Hv3dParams& params) {
    for (const Plane& s : saliency) validate_saliency(s);
    return hv3d_sequence(ref, dist, ref_depth, dist_depth, disparity, params, saliency).pooled;
}

double nrpbm_blur_s(const Plane& frame, const Plane* s) {
    if (frame.width < 16 || frame.height < 16)
        throw std::invalid_argument("nrpbm_blur_s: frame smaller than 16x16");
    if (s) {
        require_same_size(frame, *s, "nrpbm_blur_s");
        validate_saliency(*s);
    }
    const int w = frame.width, h = frame.height;

    // 3x3 box blur, borders clamped
    Plane blurred(w, h, 0.0, frame.bit_depth);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    acc += frame.at(std::clamp(x + dx, 0, w - 1), std::clamp(y + dy, 0, h - 1));
            blurred.at(x, y) = acc / 9.0;
        }

    double df_v = 0.0, dv_v = 0.0, df_h = 0.0, dv_h = 0.0;
    for (int y = 1; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double wt = s ? s->at(x, y) : 1.0;
            df_v += std::abs(frame.at(x, y) - frame.at(x, y - 1)) * wt;
            dv_v += std::abs(blurred.at(x, y) - blurred.at(x, y - 1)) * wt;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 1; x < w; ++x) {
            const double wt = s ? s->at(x, y) : 1.0;
            df_h += std::abs(frame.at(x, y) - frame.at(x - 1, y)) * wt;
            dv_h += std::abs(blurred.at(x, y) - blurred.at(x - 1, y)) * wt;
        }
    if (df_v <= 0.0 || df_h <= 0.0) return 0.0;  // constant frame
    const double ratio = std::max(dv_v / df_v, dv_h / df_h);
    return std::clamp(1.0 - ratio, 0.0, 1.0);
}

double farias_blur_s(const Plane& frame, const Plane* s) {
    const int w = frame.width, h = frame.height;
    if (w < 3 || h < 3) throw std::invalid_argument("farias_blur_s: frame too small");
    if (s) {
        require_same_size(frame, *s, "farias_blur_s");
        validate_saliency(*s);
    }

    Plane gx(w, h), gy(w, h);
    double max_mag = 0.0;
    for (int y = 1; y < h - 1; ++y)
        for (int x = 1; x < w - 1; ++x) {
            const double sx = frame.at(x + 1, y - 1) + 2.0 * frame.at(x + 1, y) + frame.at(x + 1, y + 1) -
                              frame.at(x - 1, y - 1) - 2.0 * frame.at(x - 1, y) - frame.at(x - 1, y + 1);
            const double sy = frame.at(x - 1, y + 1) + 2.0 * frame.at(x, y + 1) + frame.at(x + 1, y + 1) -
                              frame.at(x - 1, y - 1) - 2.0 * frame.at(x, y - 1) - frame.at(x + 1, y - 1);
            gx.at(x, y) = sx;
            gy.at(x, y) = sy;
            max_mag = std::max(max_mag, std::hypot(sx, sy));
        }
    if (max_mag <= 0.0) throw std::invalid_argument("farias_blur_s: no edges found");
    const double threshold = 0.1 * max_mag;

    // Walk from an edge pixel to the local extrema along the dominant
    // gradient axis; the edge width is the distance between them.
    auto edge_width = [&](int x, int y, bool horizontal, double grad) {
        const int dx = horizontal ? 1 : 0;
        const int dy = horizontal ? 0 : 1;
        const double dir = grad >= 0.0 ? 1.0 : -1.0;
        int lx = x, ly = y;
        while (lx - dx >= 0 && ly - dy >= 0 &&
               dir * (frame.at(lx - dx, ly - dy) - frame.at(lx, ly)) < 0.0) {
            lx -= dx;
            ly -= dy;
        }
        int rx = x, ry = y;
        while (rx + dx < w && ry + dy < h &&
               dir * (frame.at(rx + dx, ry + dy) - frame.at(rx, ry)) > 0.0) {
            rx += dx;
            ry += dy;
        }
        return static_cast<double>(std::abs(rx - lx) + std::abs(ry - ly));
    };

    double num = 0.0, den = 0.0;
    bool any = false;
    for (int y = 1; y < h - 1; ++y)
        for (int x = 1; x < w - 1; ++x) {
            const double mag = std::hypot(gx.at(x, y), gy.at(x, y));
            if (mag <= threshold) continue;
            const bool horizontal = std::abs(gx.at(x, y)) >= std::abs(gy.at(x, y));
            const double width = edge_width(x, y, horizontal, horizontal ? gx.at(x, y) : gy.at(x, y));
            const double wt = s ? s->at(x, y) : 1.0;
            num += width * wt;
            den += wt;
            any = true;
        }
    if (!any || den <= 0.0) throw std::invalid_argument("farias_blur_s: no edges found");
    return num / den;
}

double farias_block_s(const Plane& frame, const Plane* s) {
    const int w = frame.width, h = frame.height;
    if (w < 16 || h < 16) throw std::invalid_argument("farias_block_s: frame smaller than 16x16");
    if (s) {
        require_same_size(frame, *s, "farias_block_s");
        validate_saliency(*s);
    }

    double v_boundary = 0.0, v_total = 0.0, h_boundary = 0.0, h_total = 0.0;
    for (int y = 1; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double d = std::abs(frame.at(x, y) - frame.at(x, y - 1)) * (s ? s->at(x, y) : 1.0);
            v_total += d;
            if (y % 8 == 0) v_boundary += d;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 1; x < w; ++x) {
            const double d = std::abs(frame.at(x, y) - frame.at(x - 1, y)) * (s ? s->at(x, y) : 1.0);
            h_total += d;
            if (x % 8 == 0) h_boundary += d;
        }
    if (v_total <= 0.0 && h_total <= 0.0) return 0.0;
    const double rv = v_total > 0.0 ? v_boundary / v_total : 0.0;
    const double rh = h_total > 0.0 ? h_boundary / h_total : 0.0;
    return (rv + rh) / (static_cast<double>(h) * w);
}

}  // namespace svq
