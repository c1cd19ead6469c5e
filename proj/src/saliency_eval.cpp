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

#include "svq/saliency_eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace svq {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

uint64_t bounded(std::mt19937_64& rng, uint64_t n) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

// Trapezoid area under the ROC curve of two value samples, swept over
// 256 uniform thresholds of the saliency range.
double roc_auc(std::vector<double> pos, std::vector<double> neg) {
    std::sort(pos.begin(), pos.end());
    std::sort(neg.begin(), neg.end());
    const double lo = std::min(pos.front(), neg.front());
    const double hi = std::max(pos.back(), neg.back());

    auto rate_ge = [](const std::vector<double>& v, double t) {
        const auto it = std::lower_bound(v.begin(), v.end(), t);
        return static_cast<double>(v.end() - it) / static_cast<double>(v.size());
    };

    double area = 0.0;
    double px = 0.0, py = 0.0;  // start above the max: (FPR, TPR) = (0, 0)
    if (hi > lo) {
        for (int k = 255; k >= 0; --k) {
            const double t = lo + (hi - lo) * k / 255.0;
            const double fpr = rate_ge(neg, t);
            const double tpr = rate_ge(pos, t);
            area += (fpr - px) * (tpr + py) * 0.5;
            px = fpr;
            py = tpr;
        }
    }
    area += (1.0 - px) * (1.0 + py) * 0.5;  // close the curve at (1, 1)
    return area;
}

std::vector<double> values_at(const Plane& s, std::span<const PixelPoint> pts) {
    std::vector<double> v;
    v.reserve(pts.size());
    for (const PixelPoint& p : pts) {
        if (p.x < 0 || p.y < 0 || p.x >= s.width || p.y >= s.height)
            throw std::invalid_argument("fixation outside saliency map");
        v.push_back(s.at(p.x, p.y));
    }
    return v;
}

}  // namespace

std::vector<FixationDensityMap> fdm_from_gaze(const GazeLog& log, const Plane& kernel, int width,
                                              int height, int frames) {
    // Per-subject splat maps averaged and then peak-normalized collapse
    // to one additive splat over all records followed by normalization.
    std::vector<FixationDensityMap> maps(frames);
    for (auto& f : maps) f.density = Plane(width, height);

    const int kr = kernel.width / 2;
    for (const GazeRecord& r : log.records) {
        if (r.frame_index < 0 || r.frame_index >= frames) continue;
        Plane& d = maps[r.frame_index].density;
        const int y0 = std::max(0, r.y - kr), y1 = std::min(height - 1, r.y + kr);
        const int x0 = std::max(0, r.x - kr), x1 = std::min(width - 1, r.x + kr);
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x)
                d.at(x, y) += kernel.at(x - r.x + kr, y - r.y + kr);
    }
    for (auto& f : maps) {
        double mx = 0.0;
        for (double v : f.density.samples) mx = std::max(mx, v);
        if (mx > 0.0) {
            for (double& v : f.density.samples) v /= mx;
            f.peak_normalized = true;
        }
    }
    return maps;
}

std::vector<PixelPoint> fixation_points(const GazeLog& log, int frame_index) {
    std::vector<PixelPoint> pts;
    for (const GazeRecord& r : log.records)
        if (r.frame_index == frame_index) pts.push_back({r.x, r.y});
    return pts;
}

double auc(const Plane& saliency, std::span<const PixelPoint> fixations, uint64_t seed) {
    if (fixations.empty()) throw std::invalid_argument("auc: empty fixation set");
    const size_t total = saliency.samples.size();

    std::unordered_set<size_t> fixated;
    for (const PixelPoint& p : fixations)
        fixated.insert(static_cast<size_t>(p.y) * saliency.width + p.x);

    std::mt19937_64 rng(seed);
    const size_t want = fixations.size();
    std::vector<double> neg;
    neg.reserve(want);
    if (total > fixated.size() + want) {
        std::unordered_set<size_t> chosen;
        while (neg.size() < want) {
            const size_t idx = bounded(rng, total);
            if (fixated.count(idx) || chosen.count(idx)) continue;
            chosen.insert(idx);
            neg.push_back(saliency.samples[idx]);
        }
    } else {
        // tiny frame: sample non-fixated pixels with replacement
        std::vector<size_t> pool;
        for (size_t i = 0; i < total; ++i)
            if (!fixated.count(i)) pool.push_back(i);
        if (pool.empty()) throw std::invalid_argument("auc: no non-fixated pixels");
        for (size_t i = 0; i < want; ++i) neg.push_back(saliency.samples[pool[bounded(rng, pool.size())]]);
    }
    return roc_auc(values_at(saliency, fixations), std::move(neg));
}

double shuffled_auc(const Plane& saliency, std::span<const PixelPoint> fixations,
                    std::span<const PixelPoint> negative_pool, uint64_t seed, int repeats) {
    if (fixations.empty()) throw std::invalid_argument("shuffled_auc: empty fixation set");
    if (negative_pool.empty()) throw std::invalid_argument("shuffled_auc: empty negative pool");

    const std::vector<double> pos = values_at(saliency, fixations);
    const std::vector<double> pool = values_at(saliency, negative_pool);
    const size_t want = fixations.size();

    double acc = 0.0;
    for (int r = 0; r < repeats; ++r) {
        std::mt19937_64 rng(seed + static_cast<uint64_t>(r));
        std::vector<double> neg;
        neg.reserve(want);
        if (pool.size() >= want) {
            std::vector<size_t> idx(pool.size());
            for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            for (size_t i = 0; i < want; ++i) {  // partial Fisher-Yates
                const size_t j = i + bounded(rng, idx.size() - i);
                std::swap(idx[i], idx[j]);
                neg.push_back(pool[idx[i]]);
            }
        } else {
            for (size_t i = 0; i < want; ++i) neg.push_back(pool[bounded(rng, pool.size())]);
        }
        acc += roc_auc(pos, std::move(neg));
    }
    return acc / repeats;
}

double nss(const Plane& saliency, std::span<const PixelPoint> fixations) {
    if (fixations.empty()) throw std::invalid_argument("nss: empty fixation set");
    double mean = 0.0;
    for (double v : saliency.samples) mean += v;
    mean /= static_cast<double>(saliency.samples.size());
    double var = 0.0;
    for (double v : saliency.samples) var += (v - mean) * (v - mean);
    var /= static_cast<double>(saliency.samples.size());
    if (var <= 0.0) return 0.0;  // constant map
    const double sd = std::sqrt(var);

    double acc = 0.0;
    for (const double v : values_at(saliency, fixations)) acc += (v - mean) / sd;
    return acc / static_cast<double>(fixations.size());
}

double pcc_maps(const Plane& saliency, const Plane& fdm) {
    if (!saliency.same_size(fdm)) throw std::invalid_argument("pcc_maps: dimension mismatch");
    const size_t n = saliency.samples.size();
    double ma = 0.0, mb = 0.0;
    for (size_t i = 0; i < n; ++i) {
        ma += saliency.samples[i];
        mb += fdm.samples[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double da = saliency.samples[i] - ma;
        const double db = fdm.samples[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa <= 0.0 || sbb <= 0.0) throw std::invalid_argument("pcc_maps: constant map");
    return sab / std::sqrt(saa * sbb);
}

double sim(const Plane& saliency, const Plane& fdm) {
    if (!saliency.same_size(fdm)) throw std::invalid_argument("sim: dimension mismatch");
    double sa = 0.0, sb = 0.0;
    for (double v : saliency.samples) sa += v;
    for (double v : fdm.samples) sb += v;
    if (sa <= 0.0 || sb <= 0.0) throw std::invalid_argument("sim: all-zero map");
    double acc = 0.0;
    for (size_t i = 0; i < saliency.samples.size(); ++i)
        acc += std::min(saliency.samples[i] / sa, fdm.samples[i] / sb);
    return acc;
}

double kld(const Plane& saliency, const Plane& fdm) {
    if (!saliency.same_size(fdm)) throw std::invalid_argument("kld: dimension mismatch");
    constexpr double kFloor = 1e-12;
    double sa = 0.0, sb = 0.0;
    for (double v : saliency.samples) sa += v + kFloor;
    for (double v : fdm.samples) sb += v + kFloor;
    if (sa <= 0.0 || sb <= 0.0) throw std::invalid_argument("kld: all-zero map");
    double acc = 0.0;
    for (size_t i = 0; i < saliency.samples.size(); ++i) {
        const double q = (saliency.samples[i] + kFloor) / sa;
        const double p = (fdm.samples[i] + kFloor) / sb;
        acc += p * std::log(p / q);
    }
    return std::max(0.0, acc);
}

Plane downsample_to_grid(const Plane& in, int grid_w, int grid_h) {
    if (grid_w < 1 || grid_h < 1 || grid_w > in.width || grid_h > in.height)
        throw std::invalid_argument("downsample_to_grid: bad grid");
    Plane sums(grid_w, grid_h);
    Plane counts(grid_w, grid_h);
    for (int y = 0; y < in.height; ++y) {
        const int gy = static_cast<int>(static_cast<int64_t>(y) * grid_h / in.height);
        for (int x = 0; x < in.width; ++x) {
            const int gx = static_cast<int>(static_cast<int64_t>(x) * grid_w / in.width);
            sums.at(gx, gy) += in.at(x, y);
            counts.at(gx, gy) += 1.0;
        }
    }
    for (size_t i = 0; i < sums.samples.size(); ++i) sums.samples[i] /= counts.samples[i];
    return sums;
}

namespace {

// Exact transportation cost via successive shortest paths with node
// potentials on the complete supplier/consumer bipartite graph.
double transport_cost(const std::vector<double>& supply, const std::vector<PixelPoint>& spos,
                      const std::vector<double>& demand, const std::vector<PixelPoint>& dpos) {
    const int ns = static_cast<int>(supply.size());
    const int nt = static_cast<int>(demand.size());
    if (ns == 0 || nt == 0) return 0.0;

    std::vector<double> cost(static_cast<size_t>(ns) * nt);
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < nt; ++j)
            cost[static_cast<size_t>(i) * nt + j] =
                std::hypot(spos[i].x - dpos[j].x, spos[i].y - dpos[j].y);

    std::vector<double> flow(static_cast<size_t>(ns) * nt, 0.0);
    std::vector<double> rs = supply, rd = demand;
    std::vector<double> pi(ns + nt, 0.0);  // potentials, suppliers then consumers

    constexpr double kEps = 1e-13;
    const int n = ns + nt;
    std::vector<double> dist(n);
    std::vector<int> parent(n);
    std::vector<char> done(n);

    double remaining = 0.0;
    for (double v : rs) remaining += v;

    while (remaining > kEps) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
        std::fill(parent.begin(), parent.end(), -1);
        std::fill(done.begin(), done.end(), 0);
        for (int i = 0; i < ns; ++i)
            if (rs[i] > kEps) dist[i] = 0.0;

        int target = -1;
        while (true) {
            int u = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int v = 0; v < n; ++v)
                if (!done[v] && dist[v] < best) {
                    best = dist[v];
                    u = v;
                }
            if (u < 0) break;
            done[u] = 1;
            if (u >= ns && rd[u - ns] > kEps) {
                target = u;
                break;
            }
            if (u < ns) {
                const double* crow = cost.data() + static_cast<size_t>(u) * nt;
                for (int j = 0; j < nt; ++j) {
                    const double nd = dist[u] + crow[j] + pi[u] - pi[ns + j];
                    if (nd < dist[ns + j] - 1e-15) {
                        dist[ns + j] = nd;
                        parent[ns + j] = u;
                    }
                }
            } else {
                const int j = u - ns;
                for (int i = 0; i < ns; ++i) {
                    if (flow[static_cast<size_t>(i) * nt + j] <= kEps) continue;
                    const double nd = dist[u] - cost[static_cast<size_t>(i) * nt + j] - pi[i] + pi[ns + j];
                    if (nd < dist[i] - 1e-15) {
                        dist[i] = nd;
                        parent[i] = u;
                    }
                }
            }
        }
        if (target < 0) break;  // numerically exhausted

        const double dt = dist[target];
        for (int v = 0; v < n; ++v) pi[v] += std::min(dist[v], dt);

        // bottleneck along the path
        double push = rd[target - ns];
        for (int v = target; parent[v] >= 0; v = parent[v]) {
            const int p = parent[v];
            if (v < ns)  // backward arc consumer p -> supplier v carries flow (v, p)
                push = std::min(push, flow[static_cast<size_t>(v) * nt + (p - ns)]);
        }
        {
            int v = target;
            while (parent[v] >= 0) v = parent[v];
            push = std::min(push, rs[v]);
        }

        for (int v = target; parent[v] >= 0; v = parent[v]) {
            const int p = parent[v];
            if (v >= ns)
                flow[static_cast<size_t>(p) * nt + (v - ns)] += push;
            else
                flow[static_cast<size_t>(v) * nt + (p - ns)] -= push;
        }
        {
            int v = target;
            while (parent[v] >= 0) v = parent[v];
            rs[v] -= push;
        }
        rd[target - ns] -= push;
        remaining -= push;
    }

    double total = 0.0;
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < nt; ++j) total += flow[static_cast<size_t>(i) * nt + j] * cost[static_cast<size_t>(i) * nt + j];
    return total;
}

}  // namespace

double emd(const Plane& saliency, const Plane& fdm, int grid_w, int grid_h) {
    if (!saliency.same_size(fdm)) throw std::invalid_argument("emd: dimension mismatch");
    const Plane a = downsample_to_grid(saliency, grid_w, grid_h);
    const Plane b = downsample_to_grid(fdm, grid_w, grid_h);

    double sa = 0.0, sb = 0.0;
    for (double v : a.samples) sa += v;
    for (double v : b.samples) sb += v;
    if (sa <= 0.0 || sb <= 0.0) throw std::invalid_argument("emd: all-zero map");

    // co-located mass never moves under a metric ground distance
    std::vector<double> supply, demand;
    std::vector<PixelPoint> spos, dpos;
    for (int y = 0; y < grid_h; ++y)
        for (int x = 0; x < grid_w; ++x) {
            const double diff = a.at(x, y) / sa - b.at(x, y) / sb;
            if (diff > 1e-15) {
                supply.push_back(diff);
                spos.push_back({x, y});
            } else if (diff < -1e-15) {
                demand.push_back(-diff);
                dpos.push_back({x, y});
            }
        }
    return transport_cost(supply, spos, demand, dpos);
}

Plane center_bias_mix(const Plane& s, double w, double std_px) {
    if (w < 0.0 || w > 1.0) throw std::invalid_argument("center_bias_mix: weight out of [0, 1]");
    if (std_px <= 0.0) throw std::invalid_argument("center_bias_mix: std must be positive");
    const Plane center = center_map(s.width, s.height, std_px);
    Plane out = s;
    for (size_t i = 0; i < out.samples.size(); ++i)
        out.samples[i] = w * s.samples[i] + (1.0 - w) * center.samples[i];
    return out;
}

Plane chance_map(int width, int height, uint64_t seed) {
    Plane out(width, height);
    std::mt19937_64 rng(seed);
    for (double& v : out.samples) v = uniform01(rng);
    return out;
}

Plane center_map(int width, int height, double std_px) {
    if (std_px <= 0.0) throw std::invalid_argument("center_map: std must be positive");
    Plane out(width, height);
    const double cx = (width - 1) / 2.0;
    const double cy = (height - 1) / 2.0;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            out.at(x, y) = std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (2.0 * std_px * std_px));
    return out;
}

double moment_of_inertia(const Plane& mask) {
    double m00 = 0.0, m10 = 0.0, m01 = 0.0;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            const double v = mask.at(x, y);
            m00 += v;
            m10 += x * v;
            m01 += y * v;
        }
    if (m00 <= 0.0) throw std::invalid_argument("moment_of_inertia: empty mask");
    const double cx = m10 / m00;
    const double cy = m01 / m00;
    double mu20 = 0.0, mu02 = 0.0;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            const double v = mask.at(x, y);
            mu20 += (x - cx) * (x - cx) * v;
            mu02 += (y - cy) * (y - cy) * v;
        }
    return (mu20 + mu02) / (m00 * m00);
}

}  // namespace svq
