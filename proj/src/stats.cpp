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

#include "svq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace svq {

namespace {

void check_pair(std::span<const double> a, std::span<const double> b, size_t min_len,
                const char* who) {
    if (a.size() != b.size()) throw std::invalid_argument(std::string(who) + ": length mismatch");
    if (a.size() < min_len) throw std::invalid_argument(std::string(who) + ": too few points");
}

bool is_constant(std::span<const double> v) {
    for (double x : v)
        if (x != v[0]) return false;
    return true;
}

std::vector<double> ranks_with_ties(std::span<const double> v) {
    const size_t n = v.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) { return v[i] < v[j]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// residual vector and SSE for the current parameters
struct Model {
    FitModel kind;
    // value and Jacobian row at x for parameters p = (a, b, c)
    static double value(FitModel kind, const double p[3], double x) {
        if (kind == FitModel::Logistic) return p[0] / (1.0 + std::exp(-p[1] * (x - p[2])));
        return p[0] * std::pow(x, p[1]) + p[2];
    }
    static void jacobian(FitModel kind, const double p[3], double x, double j[3]) {
        if (kind == FitModel::Logistic) {
            const double s = 1.0 / (1.0 + std::exp(-p[1] * (x - p[2])));
            j[0] = s;
            j[1] = p[0] * s * (1.0 - s) * (x - p[2]);
            j[2] = -p[0] * p[1] * s * (1.0 - s);
        } else {
            const double xb = std::pow(x, p[1]);
            j[0] = xb;
            j[1] = p[0] * xb * std::log(x);
            j[2] = 1.0;
        }
    }
};

double sse_for(FitModel kind, const double p[3], std::span<const double> x,
               std::span<const double> y) {
    double acc = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - Model::value(kind, p, x[i]);
        acc += r * r;
    }
    return acc;
}

// Solve (A + lambda diag(A)) d = g for a 3x3 system, Gaussian elimination.
bool solve3(double a[3][3], double g[3], double lambda, double d[3]) {
    double m[3][4];
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) m[r][c] = a[r][c];
        m[r][r] += lambda * std::max(a[r][r], 1e-12);
        m[r][3] = g[r];
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) < 1e-300) return false;
        std::swap(m[piv], m[col]);
        for (int r = col + 1; r < 3; ++r) {
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
        }
    }
    for (int r = 2; r >= 0; --r) {
        double acc = m[r][3];
        for (int c = r + 1; c < 3; ++c) acc -= m[r][c] * d[c];
        d[r] = acc / m[r][r];
    }
    return true;
}

// Damped (Levenberg) Gauss-Newton from one start; returns SSE.
double refine(FitModel kind, double p[3], std::span<const double> x, std::span<const double> y) {
    double lambda = 1e-3;
    double sse = sse_for(kind, p, x, y);
    for (int iter = 0; iter < 300; ++iter) {
        double jtj[3][3] = {};
        double jtr[3] = {};
        for (size_t i = 0; i < x.size(); ++i) {
            double j[3];
            Model::jacobian(kind, p, x[i], j);
            const double r = y[i] - Model::value(kind, p, x[i]);
            for (int u = 0; u < 3; ++u) {
                jtr[u] += j[u] * r;
                for (int v = 0; v < 3; ++v) jtj[u][v] += j[u] * j[v];
            }
        }
        double d[3];
        if (!solve3(jtj, jtr, lambda, d)) break;
        const double trial[3] = {p[0] + d[0], p[1] + d[1], p[2] + d[2]};
        const double trial_sse = sse_for(kind, trial, x, y);
        if (std::isfinite(trial_sse) && trial_sse < sse) {
            const double gain = sse - trial_sse;
            p[0] = trial[0];
            p[1] = trial[1];
            p[2] = trial[2];
            sse = trial_sse;
            lambda = std::max(lambda * 0.3, 1e-12);
            if (gain < 1e-15 * (1.0 + sse)) break;
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
    }
    return sse;
}

FitResult multi_start_fit(FitModel kind, std::span<const double> x, std::span<const double> y,
                          uint64_t seed) {
    check_pair(x, y, 4, "curve fit");
    if (is_constant(x)) throw std::invalid_argument("curve fit: constant predictor");
    if (kind == FitModel::Power)
        for (double v : x)
            if (v <= 0.0) throw std::invalid_argument("power_fit: x must be positive");

    const double ymin = *std::min_element(y.begin(), y.end());
    const double ymax = *std::max_element(y.begin(), y.end());
    const double xmin = *std::min_element(x.begin(), x.end());
    const double xmax = *std::max_element(x.begin(), x.end());
    const double xmid = 0.5 * (xmin + xmax);
    const double yspan = ymax - ymin;
    const bool rising = y.back() >= y.front();

    std::mt19937_64 rng(seed);
    constexpr int kStarts = 8;
    double best_p[3] = {0, 0, 0};
    double best_sse = std::numeric_limits<double>::infinity();
    bool any = false;

    for (int s = 0; s < kStarts; ++s) {
        double p[3];
        const double jitter = s == 0 ? 0.0 : 1.0;
        auto wiggle = [&](double v, double scale) { return v + jitter * scale * (uniform01(rng) - 0.5); };
        if (kind == FitModel::Logistic) {
            p[0] = wiggle(ymax != 0.0 ? ymax : 1.0, std::abs(ymax) + 1.0);
            const double slope = (rising ? 4.0 : -4.0) / std::max(xmax - xmin, 1e-9);
            p[1] = wiggle(slope, std::abs(slope) * 2.0);
            p[2] = wiggle(xmid, (xmax - xmin));
        } else {
            p[2] = wiggle(y.back(), std::max(yspan, 1.0));
            p[1] = wiggle(s % 2 == 0 ? -0.5 : 0.5, 1.0);
            const double x0b = std::pow(std::max(xmin, 1e-9), p[1]);
            p[0] = wiggle(x0b != 0.0 ? (y.front() - p[2]) / x0b : 1.0, std::max(yspan, 1.0));
        }
        const double sse = refine(kind, p, x, y);
        if (std::isfinite(sse) && sse < best_sse) {
            best_sse = sse;
            best_p[0] = p[0];
            best_p[1] = p[1];
            best_p[2] = p[2];
            any = true;
        }
    }
    if (!any) throw std::runtime_error("curve fit: no start converged");

    FitResult r;
    r.model = kind;
    r.a = best_p[0];
    r.b = best_p[1];
    r.c = best_p[2];
    r.residual = std::sqrt(best_sse / static_cast<double>(x.size()));
    return r;
}

}  // namespace

double FitResult::evaluate(double x) const {
    const double p[3] = {a, b, c};
    return Model::value(model, p, x);
}

double pearson(std::span<const double> a, std::span<const double> b) {
    check_pair(a, b, 2, "pearson");
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
    if (saa <= 0.0 || sbb <= 0.0) throw std::invalid_argument("pearson: constant vector");
    return sab / std::sqrt(saa * sbb);
}

double spearman(std::span<const double> a, std::span<const double> b) {
    check_pair(a, b, 2, "spearman");
    if (is_constant(a) || is_constant(b)) throw std::invalid_argument("spearman: constant vector");
    return pearson(ranks_with_ties(a), ranks_with_ties(b));
}

FitResult logistic_fit(std::span<const double> x, std::span<const double> y, uint64_t seed) {
    return multi_start_fit(FitModel::Logistic, x, y, seed);
}

FitResult power_fit(std::span<const double> x, std::span<const double> y, uint64_t seed) {
    return multi_start_fit(FitModel::Power, x, y, seed);
}

StatsReport perf_stats(std::span<const double> pred, std::span<const double> mos,
                       const FitResult& fit, const std::vector<std::vector<double>>* subject_scores) {
    check_pair(pred, mos, 3, "perf_stats");

    StatsReport r;
    r.fit = fit;
    std::vector<double> mapped(pred.size());
    for (size_t i = 0; i < pred.size(); ++i) mapped[i] = fit.evaluate(pred[i]);

    r.pcc_raw = pearson(pred, mos);
    r.pcc_fitted = is_constant(mapped) ? 0.0 : pearson(mapped, mos);
    r.scc = spearman(pred, mos);

    double sse = 0.0;
    for (size_t i = 0; i < pred.size(); ++i) {
        const double e = mapped[i] - mos[i];
        sse += e * e;
    }
    r.rmse = std::sqrt(sse / static_cast<double>(pred.size()));

    size_t outliers = 0;
    for (size_t i = 0; i < pred.size(); ++i) {
        double threshold;
        if (subject_scores && i < subject_scores->size() && (*subject_scores)[i].size() >= 2) {
            const std::vector<double>& votes = (*subject_scores)[i];
            double mean = 0.0;
            for (double v : votes) mean += v;
            mean /= static_cast<double>(votes.size());
            double var = 0.0;
            for (double v : votes) var += (v - mean) * (v - mean);
            var /= static_cast<double>(votes.size() - 1);
            const double ci95 = 1.96 * std::sqrt(var / static_cast<double>(votes.size()));
            threshold = 2.0 * ci95;
        } else {
            threshold = 2.0 * r.rmse;
        }
        if (std::abs(mapped[i] - mos[i]) > threshold) ++outliers;
    }
    r.outlier_ratio = static_cast<double>(outliers) / static_cast<double>(pred.size());
    return r;
}

std::vector<int> outlier_screen(const std::vector<std::vector<double>>& votes) {
    const size_t subjects = votes.size();
    if (subjects < 3) throw std::invalid_argument("outlier_screen: need at least 3 subjects");
    const size_t clips = votes[0].size();
    if (clips == 0) throw std::invalid_argument("outlier_screen: no clips");
    for (const auto& v : votes)
        if (v.size() != clips) throw std::invalid_argument("outlier_screen: ragged vote matrix");

    std::vector<int> high(subjects, 0), low(subjects, 0);
    for (size_t c = 0; c < clips; ++c) {
        double mean = 0.0;
        for (size_t s = 0; s < subjects; ++s) mean += votes[s][c];
        mean /= static_cast<double>(subjects);
        double m2 = 0.0, m4 = 0.0, svar = 0.0;
        for (size_t s = 0; s < subjects; ++s) {
            const double d = votes[s][c] - mean;
            m2 += d * d;
            m4 += d * d * d * d;
            svar += d * d;
        }
        m2 /= static_cast<double>(subjects);
        m4 /= static_cast<double>(subjects);
        svar /= static_cast<double>(subjects - 1);
        const double sd = std::sqrt(svar);
        const double kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
        const double span = (kurtosis >= 2.0 && kurtosis <= 4.0) ? 2.0 * sd : std::sqrt(20.0) * sd;
        // strict comparisons so a zero-variance clip flags nobody
        for (size_t s = 0; s < subjects; ++s) {
            if (votes[s][c] > mean + span) ++high[s];
            if (votes[s][c] < mean - span) ++low[s];
        }
    }

    std::vector<int> kept;
    for (size_t s = 0; s < subjects; ++s) {
        const double rate = static_cast<double>(high[s] + low[s]) / static_cast<double>(clips);
        if (rate <= 0.05) kept.push_back(static_cast<int>(s));
    }
    return kept;
}

}  // namespace svq
