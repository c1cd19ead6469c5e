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

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svq/hv3d.hpp"
#include "svq/manifest.hpp"
#include "svq/saliency_eval.hpp"
#include "svq/stats.hpp"

namespace svq {

enum class MetricId {
    Psnr,
    Ssim,
    MsSsim,
    Vif,
    Hv3d,
    PsnrS,
    SsimS,
    MsSsimS,
    VifS,
    Hv3dS,
    NrpbmBlurS,
    FariasBlurS,
    FariasBlockS,
    SaliencyEval,
};

std::optional<MetricId> metric_from_string(std::string_view name);
std::string_view to_string(MetricId id);
std::vector<std::string_view> metric_names();

struct MetricParams {
    Hv3dParams hv3d;
    double psnr_cap = 100.0;
    uint64_t seed = 0;
    int emd_grid_w = 32;
    int emd_grid_h = 18;
    int threads = 0;  // 0 = hardware concurrency
};

struct MetricRun {
    std::string metric;
    std::string clip;
    int frame_begin = 0;
    std::vector<double> frame_scores;
    double pooled = 0.0;  // Minkowski for HV3D variants, temporal mean otherwise
    double wall_seconds = 0.0;
    std::vector<FrameScore> hv3d_frames;  // per-frame diagnostics for hv3d metrics
    std::optional<EvalScores> eval;       // saliency-eval output
    int eval_frames_used = 0;             // frames with fixations
};

/// Evaluate one metric on one clip, streaming frames in parallel.
/// `frame_end` < 0 means the whole clip; frame indices are clip-absolute
/// (view alternation and seeds stay stable under sub-ranges). The sAUC
/// negative pool comes from the other clips' gaze logs, falling back to
/// other frames of the same clip.
MetricRun run_metric(const DatasetManifest& manifest, size_t clip_index, MetricId metric,
                     const MetricParams& params, int frame_begin = 0, int frame_end = -1);

/// Deterministic order-preserving parallel loop over [begin, end).
void parallel_for(int begin, int end, int threads, const std::function<void(int)>& fn);

// Report serialization. All numbers are decimal text with 9 significant
// digits.
std::string to_json(const MetricRun& run);
std::string to_csv(const MetricRun& run);
std::string to_json(const StatsReport& report);
StatsReport stats_report_from_json(const std::string& text);
std::string to_json(const EvalScores& scores);

}  // namespace svq
