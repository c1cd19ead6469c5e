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

#include "svq/hv3d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "svq/dct.hpp"
#include "svq/fidelity.hpp"

namespace svq {

namespace {

constexpr double kFlatDepthEps = 1e-12;

double block_mean(const Plane& p, int x, int y, int m) {
    double acc = 0.0;
    for (int by = 0; by < m; ++by) {
        const double* row = p.row(y + by) + x;
        for (int bx = 0; bx < m; ++bx) acc += row[bx];
    }
    return acc / (static_cast<double>(m) * m);
}

std::vector<Plane> vif_pyramid_from(const Plane& s) {
    std::vector<Plane> levels;
    levels.reserve(kVifScales);
    levels.push_back(s);
    for (int scale = 2; scale <= kVifScales; ++scale)
        levels.push_back(vif_downsample(levels.back(), scale));
    return levels;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa <= 0.0 || sbb <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sab / std::sqrt(saa * sbb);
}

}  // namespace

void Hv3dParams::validate() const {
    if (block_size < 4) throw std::invalid_argument("Hv3dParams: block size must be >= 4");
    if (search_size < block_size)
        throw std::invalid_argument("Hv3dParams: search size must be >= block size");
    if (beta1 < 0 || beta2 < 0 || beta3 < 0)
        throw std::invalid_argument("Hv3dParams: exponents must be non-negative");
    if (pooling_p < 1.0) throw std::invalid_argument("Hv3dParams: pooling exponent must be >= 1");
    if (pooling_tau <= 0.0) throw std::invalid_argument("Hv3dParams: pooling tau must be positive");
    if (variance_block < block_size)
        throw std::invalid_argument("Hv3dParams: variance block must be >= block size");
    geometry.validate();
}

std::vector<double> fuse_cyclopean_block(const Block& left, const Block& right, const CsfMask& mask) {
    if (left.size != right.size) throw std::invalid_argument("fuse_cyclopean_block: block size mismatch");
    if (mask.size != left.size) throw std::invalid_argument("fuse_cyclopean_block: mask size mismatch");
    const int m = left.size;
    std::vector<double> cl = left.samples;
    std::vector<double> cr = right.samples;
    dct2_inplace(cl.data(), m);
    dct2_inplace(cr.data(), m);
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    std::vector<double> fused(cl.size());
    for (size_t i = 0; i < fused.size(); ++i)
        fused[i] = (cl[i] + cr[i]) * inv_sqrt2 * mask.weights[i];
    return fused;
}

double mean_cyclopean_ssim(const Plane& ref_base, const Plane& ref_other, const Plane& dist_base,
                           const Plane& dist_other, std::span<const BlockMatch> matches,
                           const CsfMask& mask, const Plane* saliency) {
    if (matches.empty()) throw std::invalid_argument("q_cyclopean: no block matches");
    const int m = mask.size;
    const double peak = ref_base.peak();

    double num = 0.0, den = 0.0;
    for (const BlockMatch& match : matches) {
        const Block rb = extract_block(ref_base, match.base_x, match.base_y, m);
        const Block ro = extract_block(ref_other, match.matched_x, match.matched_y, m);
        const Block db = extract_block(dist_base, match.base_x, match.base_y, m);
        const Block dob = extract_block(dist_other, match.matched_x, match.matched_y, m);

        std::vector<double> xc_ref = fuse_cyclopean_block(rb, ro, mask);
        std::vector<double> xc_dist = fuse_cyclopean_block(db, dob, mask);
        idct2_inplace(xc_ref.data(), m);
        idct2_inplace(xc_dist.data(), m);

        const double s = ssim_value(xc_ref.data(), xc_dist.data(), m, m, peak);
        const double w = saliency ? block_mean(*saliency, match.base_x, match.base_y, m) : 1.0;
        num += s * w;
        den += w;
    }
    if (den <= 0.0) throw std::invalid_argument("q_cyclopean: saliency weights sum to zero");
    return num / den;
}

double q_cyclopean(const Plane& ref_base, const Plane& ref_other, const Plane& dist_base,
                   const Plane& dist_other, std::span<const BlockMatch> matches, const CsfMask& mask,
                   double beta1, const Plane* saliency) {
    return std::pow(
        mean_cyclopean_ssim(ref_base, ref_other, dist_base, dist_other, matches, mask, saliency),
        beta1);
}

Plane normalize_depth(const Plane& depth) {
    double mx = 0.0;
    for (double v : depth.samples) mx = std::max(mx, v);
    Plane out = depth;
    if (mx > 0.0)
        for (double& v : out.samples) v /= mx;
    return out;
}

double local_depth_variance(const Plane& norm_depth, int inner_x, int inner_y, int m, int k) {
    const int cx = inner_x + m / 2;
    const int cy = inner_y + m / 2;
    const int x0 = std::max(0, cx - k / 2);
    const int y0 = std::max(0, cy - k / 2);
    const int x1 = std::min(norm_depth.width, cx - k / 2 + k);
    const int y1 = std::min(norm_depth.height, cy - k / 2 + k);

    const long long count = static_cast<long long>(x1 - x0) * (y1 - y0);
    if (count < 2) return 0.0;
    double mean = 0.0;
    for (int y = y0; y < y1; ++y) {
        const double* row = norm_depth.row(y);
        for (int x = x0; x < x1; ++x) mean += row[x];
    }
    mean /= static_cast<double>(count);
    double acc = 0.0;
    for (int y = y0; y < y1; ++y) {
        const double* row = norm_depth.row(y);
        for (int x = x0; x < x1; ++x) {
            const double d = row[x] - mean;
            acc += d * d;
        }
    }
    return acc / static_cast<double>(count - 1);
}

DepthQuality q_depth(const Plane& ref_depth, const Plane& dist_depth, int m, int k, double beta2,
                     double beta3, const Plane* saliency) {
    if (!ref_depth.same_size(dist_depth)) throw std::invalid_argument("q_depth: dimension mismatch");

    DepthQuality q;
    if (saliency) {
        const std::vector<Plane> pyramid = vif_pyramid_from(*saliency);
        q.vif_factor = vif_weighted(ref_depth, dist_depth, &pyramid);
    } else {
        q.vif_factor = vif(ref_depth, dist_depth);
    }

    const Plane norm = normalize_depth(ref_depth);
    const BlockGrid grid = partition_blocks(ref_depth, m);
    double mx = 0.0;
    std::vector<double> variances(static_cast<size_t>(grid.count()));
    std::vector<double> weights(variances.size(), 1.0);
    size_t i = 0;
    for (int by = 0; by < grid.rows; ++by)
        for (int bx = 0; bx < grid.cols; ++bx, ++i) {
            variances[i] = local_depth_variance(norm, bx * m, by * m, m, k);
            if (saliency) weights[i] = block_mean(*saliency, bx * m, by * m, m);
            mx = std::max(mx, variances[i]);
        }

    if (mx < kFlatDepthEps) {
        q.variance_term = 1.0;  // flat depth: the ratio is 0/0, define as 1
    } else {
        double num = 0.0, den = 0.0;
        for (size_t j = 0; j < variances.size(); ++j) {
            num += variances[j] * weights[j];
            den += weights[j];
        }
        q.variance_term = num / (den * mx);
    }
    q.value = std::pow(q.vif_factor, beta2) * std::pow(q.variance_term, beta3);
    return q;
}

FrameScore hv3d_frame(const Plane& ref_base, const Plane& ref_other, const Plane& dist_base,
                      const Plane& dist_other, const Plane& ref_depth, const Plane& dist_depth,
                      const DisparityMap& dmap, const Hv3dParams& params, int frame_index,
                      const Plane* saliency) {
    params.validate();
    if (!ref_base.same_size(ref_other) || !ref_base.same_size(dist_base) ||
        !ref_base.same_size(dist_other) || !ref_base.same_size(ref_depth) ||
        !ref_base.same_size(dist_depth) || !ref_base.same_size(dmap.values))
        throw std::invalid_argument("hv3d_frame: dimension mismatch");
    if (saliency && !ref_base.same_size(*saliency))
        throw std::invalid_argument("hv3d_frame: saliency dimension mismatch");

    const int m = params.block_size;
    const BlockGrid grid = partition_blocks(ref_base, m);
    const CsfMask mask = build_csf_mask(m);

    std::vector<BlockMatch> matches;
    matches.reserve(static_cast<size_t>(grid.count()));
    for (int by = 0; by < grid.rows; ++by)
        for (int bx = 0; bx < grid.cols; ++bx) {
            const Block block = extract_block(ref_base, bx * m, by * m, m);
            const double d = block_disparity(dmap, block);
            matches.push_back(best_match(ref_base, ref_other, block, d, params.search_size, params.mode));
        }

    FrameScore score;
    score.frame_index = frame_index;
    score.mean_block_ssim =
        mean_cyclopean_ssim(ref_base, ref_other, dist_base, dist_other, matches, mask, saliency);
    score.q_cyclopean = std::pow(score.mean_block_ssim, params.beta1);
    const DepthQuality dq = q_depth(ref_depth, dist_depth, m, params.variance_block, params.beta2,
                                    params.beta3, saliency);
    score.q_depth = dq.value;
    score.depth_vif = dq.vif_factor;
    score.variance_term = dq.variance_term;
    score.hv3d = score.q_cyclopean * score.q_depth;
    return score;
}

double minkowski_pool(std::span<const double> scores, double p, double tau) {
    if (scores.empty()) throw std::invalid_argument("minkowski_pool: empty score list");
    const double n = static_cast<double>(scores.size());
    double acc = 0.0;
    for (size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] < 0.0) throw std::invalid_argument("minkowski_pool: negative score");
        const double idx = static_cast<double>(i + 1);
        acc += std::pow(scores[i], p) * std::exp((idx - n) / tau);
    }
    return std::pow(acc / n, 1.0 / p);
}

FrameScore hv3d_frame_alternating(const StereoPair& ref, const StereoPair& dist,
                                  const Plane& ref_depth, const Plane& dist_depth,
                                  const DisparityMap& dmap, const Hv3dParams& params,
                                  int frame_index, const Plane* saliency) {
    if (frame_index % 2 == 0)
        return hv3d_frame(ref.left, ref.right, dist.left, dist.right, ref_depth, dist_depth, dmap,
                          params, frame_index, saliency);
    DisparityMap flipped;
    flipped.values = dmap.values;
    for (double& v : flipped.values.samples) v = -v;
    return hv3d_frame(ref.right, ref.left, dist.right, dist.left, ref_depth, dist_depth, flipped,
                      params, frame_index, saliency);
}

Hv3dSequenceResult hv3d_sequence(std::span<const StereoPair> ref, std::span<const StereoPair> dist,
                                 std::span<const Plane> ref_depth, std::span<const Plane> dist_depth,
                                 std::span<const DisparityMap> disparity, const Hv3dParams& params,
                                 std::span<const Plane> saliency) {
    const size_t n = ref.size();
    if (n == 0) throw std::invalid_argument("hv3d_sequence: empty sequence");
    if (dist.size() != n || ref_depth.size() != n || dist_depth.size() != n || disparity.size() != n)
        throw std::invalid_argument("hv3d_sequence: sequence length mismatch");
    if (!saliency.empty() && saliency.size() != n)
        throw std::invalid_argument("hv3d_sequence: saliency length mismatch");

    Hv3dSequenceResult result;
    result.frames.reserve(n);
    std::vector<double> values(n);
    for (size_t i = 0; i < n; ++i) {
        const Plane* sal = saliency.empty() ? nullptr : &saliency[i];
        const FrameScore fs = hv3d_frame_alternating(ref[i], dist[i], ref_depth[i], dist_depth[i],
                                                     disparity[i], params, static_cast<int>(i), sal);
        values[i] = fs.hv3d;
        result.frames.push_back(fs);
    }
    result.pooled = minkowski_pool(values, params.pooling_p, params.pooling_tau);
    return result;
}

std::array<double, 3> calibrate_exponents(std::span<const ComponentTriple> components,
                                          std::span<const double> mos, const BetaGrid& grid) {
    const size_t n = components.size();
    if (n < 3) throw std::invalid_argument("calibrate_exponents: need at least 3 clips");
    if (mos.size() != n) throw std::invalid_argument("calibrate_exponents: MOS length mismatch");
    {
        const double first = mos[0];
        bool constant = true;
        for (double v : mos)
            if (v != first) {
                constant = false;
                break;
            }
        if (constant) throw std::invalid_argument("calibrate_exponents: constant MOS");
    }
    if (grid.step <= 0.0) throw std::invalid_argument("calibrate_exponents: grid step must be positive");

    std::vector<double> scores(n);
    std::array<double, 3> best = {grid.min1, grid.min2, grid.min3};
    double best_pcc = -2.0;
    const double eps = grid.step * 1e-9;
    for (double b1 = grid.min1; b1 <= grid.max1 + eps; b1 += grid.step)
        for (double b2 = grid.min2; b2 <= grid.max2 + eps; b2 += grid.step)
            for (double b3 = grid.min3; b3 <= grid.max3 + eps; b3 += grid.step) {
                for (size_t i = 0; i < n; ++i)
                    scores[i] = std::pow(components[i].mean_ssim, b1) * std::pow(components[i].vif, b2) *
                                std::pow(components[i].variance_term, b3);
                const double pcc = pearson(scores, mos);
                if (std::isnan(pcc)) continue;
                if (pcc > best_pcc) {
                    best_pcc = pcc;
                    best = {b1, b2, b3};
                }
            }
    if (best_pcc < -1.5) throw std::invalid_argument("calibrate_exponents: no valid grid cell");
    return best;
}

}  // namespace svq
