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

/// Pearson correlation; throws on length mismatch or a constant vector.
double pearson(std::span<const double> a, std::span<const double> b);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> a, std::span<const double> b);

enum class FitModel {
    Logistic,  // y = a / (1 + exp(-b (x - c)))
    Power,     // y = a x^b + c
};

struct FitResult {
    FitModel model = FitModel::Logistic;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double residual = 0.0;  // RMSE of the fit

    double evaluate(double x) const;
};

/// Least-squares logistic fit via multi-start (8 seeded starts) damped
/// Gauss-Newton. Throws on constant x or when no start converges.
FitResult logistic_fit(std::span<const double> x, std::span<const double> y, uint64_t seed = 1);

/// Least-squares fit of y = a x^b + c (x must be positive). The curve's
/// limit for x -> inf (when b < 0) is c.
FitResult power_fit(std::span<const double> x, std::span<const double> y, uint64_t seed = 1);

struct StatsReport {
    double pcc_fitted = 0.0;  // Pearson of fitted-mapped scores vs MOS (headline)
    double pcc_raw = 0.0;     // Pearson of raw scores vs MOS
    double scc = 0.0;
    double rmse = 0.0;
    double outlier_ratio = 0.0;
    FitResult fit;
};

/// Correlation statistics of predictions against MOS through a fitted
/// mapping. The outlier threshold is twice the per-clip 95% confidence
/// half-width when per-subject votes are given, else twice the RMSE.
StatsReport perf_stats(std::span<const double> pred, std::span<const double> mos,
                       const FitResult& fit,
                       const std::vector<std::vector<double>>* subject_scores = nullptr);

/// Subject screening following ITU-R BT.500-13 Annex 2: per clip, votes
/// beyond mean +/- 2 sigma (kurtosis in [2,4]) or +/- sqrt(20) sigma
/// (otherwise) are flagged; a subject whose flags exceed 5% of clips is
/// rejected. Flag thresholds are computed once from all subjects
/// (single pass). Input is votes[subject][clip]; returns the kept
/// subject indices.
std::vector<int> outlier_screen(const std::vector<std::vector<double>>& votes);

}  // namespace svq
