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

#include "svq/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "svq/fidelity.hpp"
#include "svq/io.hpp"
#include "svq/saliency.hpp"

namespace svq {

namespace {

struct MetricNameRow {
    MetricId id;
    std::string_view name;
};

constexpr MetricNameRow kMetricNames[] = {
    {MetricId::Psnr, "psnr"},
    {MetricId::Ssim, "ssim"},
    {MetricId::MsSsim, "msssim"},
    {MetricId::Vif, "vif"},
    {MetricId::Hv3d, "hv3d"},
    {MetricId::PsnrS, "psnr_s"},
    {MetricId::SsimS, "ssim_s"},
    {MetricId::MsSsimS, "msssim_s"},
    {MetricId::VifS, "vif_s"},
    {MetricId::Hv3dS, "hv3d_s"},
    {MetricId::NrpbmBlurS, "nrpbm_blur_s"},
    {MetricId::FariasBlurS, "farias_blur_s"},
    {MetricId::FariasBlockS, "farias_block_s"},
    {MetricId::SaliencyEval, "saliency-eval"},
};

bool needs_saliency(MetricId id) {
    switch (id) {
        case MetricId::PsnrS:
        case MetricId::SsimS:
        case MetricId::MsSsimS:
        case MetricId::VifS:
        case MetricId::Hv3dS:
        case MetricId::NrpbmBlurS:
        case MetricId::FariasBlurS:
        case MetricId::FariasBlockS:
        case MetricId::SaliencyEval:
            return true;
        default:
            return false;
    }
}

bool is_hv3d(MetricId id) { return id == MetricId::Hv3d || id == MetricId::Hv3dS; }

bool is_no_reference(MetricId id) {
    return id == MetricId::NrpbmBlurS || id == MetricId::FariasBlurS || id == MetricId::FariasBlockS;
}

}  // namespace

std::optional<MetricId> metric_from_string(std::string_view name) {
    for (const auto& row : kMetricNames)
        if (row.name == name) return row.id;
    return std::nullopt;
}

std::string_view to_string(MetricId id) {
    for (const auto& row : kMetricNames)
        if (row.id == id) return row.name;
    return "?";
}

std::vector<std::string_view> metric_names() {
    std::vector<std::string_view> names;
    for (const auto& row : kMetricNames) names.push_back(row.name);
    return names;
}

void parallel_for(int begin, int end, int threads, const std::function<void(int)>& fn) {
    if (end <= begin) return;
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, end - begin));
    if (threads == 1) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }
    std::atomic<int> next(begin);
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= end) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

MetricRun run_metric(const DatasetManifest& manifest, size_t clip_index, MetricId metric,
                     const MetricParams& params, int frame_begin, int frame_end) {
    if (clip_index >= manifest.clips.size()) throw std::invalid_argument("run_metric: bad clip index");
    const ClipManifest& clip = manifest.clips[clip_index];
    if (frame_end < 0) frame_end = clip.frames;
    if (frame_begin < 0 || frame_begin >= frame_end || frame_end > clip.frames)
        throw std::invalid_argument("run_metric: bad frame range");

    const std::string name(to_string(metric));
    if (needs_saliency(metric) && metric != MetricId::SaliencyEval && !clip.saliency)
        throw std::invalid_argument(name + ": saliency source required for clip '" + clip.name + "'");
    if (is_hv3d(metric)) {
        if (!clip.disparity)
            throw std::invalid_argument(name + ": disparity source required for clip '" + clip.name + "'");
        if (!clip.depth_ref || !clip.depth_dist)
            throw std::invalid_argument(name + ": depth sources required for clip '" + clip.name + "'");
    }
    if (metric == MetricId::SaliencyEval) {
        if (!clip.saliency)
            throw std::invalid_argument(name + ": saliency source required for clip '" + clip.name + "'");
        if (!clip.gaze)
            throw std::invalid_argument(name + ": gaze log required for clip '" + clip.name + "'");
    }

    const FrameSource ref_left(clip.ref_left, clip.width, clip.height);
    const FrameSource ref_right(clip.ref_right, clip.width, clip.height);
    const FrameSource dist_left(clip.dist_left, clip.width, clip.height);
    const FrameSource dist_right(clip.dist_right, clip.width, clip.height);
    const FrameSource saliency_src(clip.saliency.value_or(SourceSpec{}), clip.width, clip.height);
    const FrameSource disparity_src(clip.disparity.value_or(SourceSpec{}), clip.width, clip.height);
    const FrameSource depth_ref_src(clip.depth_ref.value_or(SourceSpec{}), clip.width, clip.height);
    const FrameSource depth_dist_src(clip.depth_dist.value_or(SourceSpec{}), clip.width, clip.height);

    MetricRun run;
    run.metric = name;
    run.clip = clip.name;
    run.frame_begin = frame_begin;
    const int frames = frame_end - frame_begin;
    run.frame_scores.assign(static_cast<size_t>(frames), 0.0);

    const auto t0 = std::chrono::steady_clock::now();

    if (metric == MetricId::SaliencyEval) {
        const GazeLog log = read_gaze_csv(*clip.gaze, clip.width, clip.height);
        const Plane kernel = fovea_kernel(manifest.geometry);
        const std::vector<FixationDensityMap> fdms =
            fdm_from_gaze(log, kernel, clip.width, clip.height, clip.frames);

        // negatives for sAUC: fixations of the other clips, falling back
        // to the rest of this clip
        std::vector<PixelPoint> pool;
        for (size_t c = 0; c < manifest.clips.size(); ++c) {
            if (c == clip_index || !manifest.clips[c].gaze) continue;
            const GazeLog other =
                read_gaze_csv(*manifest.clips[c].gaze, manifest.clips[c].width, manifest.clips[c].height);
            for (const GazeRecord& r : other.records) {
                if (r.x < clip.width && r.y < clip.height) pool.push_back({r.x, r.y});
            }
        }
        const bool cross_scene = !pool.empty();

        std::vector<EvalScores> per_frame(static_cast<size_t>(frames));
        std::vector<char> used(static_cast<size_t>(frames), 0);
        parallel_for(frame_begin, frame_end, params.threads, [&](int f) {
            const std::vector<PixelPoint> fix = fixation_points(log, f);
            if (fix.empty()) return;
            const Plane s = saliency_src.load(f);
            validate_saliency(s);

            std::vector<PixelPoint> frame_pool;
            const std::vector<PixelPoint>* neg = &pool;
            if (!cross_scene) {
                for (const GazeRecord& r : log.records)
                    if (r.frame_index != f) frame_pool.push_back({r.x, r.y});
                neg = &frame_pool;
            }
            if (neg->empty())
                throw std::invalid_argument("saliency-eval: empty sAUC negative pool for clip '" +
                                            clip.name + "'");

            EvalScores e;
            const uint64_t seed = params.seed + static_cast<uint64_t>(f) * 0x9e3779b97f4a7c15ull;
            e.auc = auc(s, fix, seed);
            e.sauc = shuffled_auc(s, fix, *neg, seed);
            e.nss = nss(s, fix);
            const Plane& fdm = fdms[static_cast<size_t>(f)].density;
            e.pcc = pcc_maps(s, fdm);
            e.sim = sim(s, fdm);
            e.kld = kld(s, fdm);
            e.emd = emd(s, fdm, params.emd_grid_w, params.emd_grid_h);
            per_frame[static_cast<size_t>(f - frame_begin)] = e;
            used[static_cast<size_t>(f - frame_begin)] = 1;
        });

        EvalScores total;
        int n = 0;
        for (int i = 0; i < frames; ++i) {
            if (!used[static_cast<size_t>(i)]) continue;
            const EvalScores& e = per_frame[static_cast<size_t>(i)];
            total.auc += e.auc;
            total.sauc += e.sauc;
            total.nss += e.nss;
            total.pcc += e.pcc;
            total.sim += e.sim;
            total.kld += e.kld;
            total.emd += e.emd;
            run.frame_scores[static_cast<size_t>(i)] = e.auc;
            ++n;
        }
        if (n == 0)
            throw std::invalid_argument("saliency-eval: no frames with fixations in clip '" +
                                        clip.name + "'");
        total.auc /= n;
        total.sauc /= n;
        total.nss /= n;
        total.pcc /= n;
        total.sim /= n;
        total.kld /= n;
        total.emd /= n;
        run.eval = total;
        run.eval_frames_used = n;
        run.pooled = total.auc;
        run.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return run;
    }

    std::vector<FrameScore> hv3d_frames(is_hv3d(metric) ? static_cast<size_t>(frames) : 0);

    parallel_for(frame_begin, frame_end, params.threads, [&](int f) {
        const size_t slot = static_cast<size_t>(f - frame_begin);
        Plane sal;
        const Plane* sal_ptr = nullptr;
        if (needs_saliency(metric)) {
            sal = saliency_src.load(f);
            validate_saliency(sal);
            sal_ptr = &sal;
        }

        if (is_hv3d(metric)) {
            StereoPair ref{ref_left.load(f), ref_right.load(f)};
            StereoPair dst{dist_left.load(f), dist_right.load(f)};
            DisparityMap dmap{disparity_src.load(f)};
            const Plane dref = depth_ref_src.load(f);
            const Plane ddist = depth_dist_src.load(f);
            const FrameScore fs = hv3d_frame_alternating(
                ref, dst, dref, ddist, dmap, params.hv3d, f,
                metric == MetricId::Hv3dS ? sal_ptr : nullptr);
            hv3d_frames[slot] = fs;
            run.frame_scores[slot] = fs.hv3d;
            return;
        }

        if (is_no_reference(metric)) {
            const Plane dl = dist_left.load(f);
            const Plane dr = dist_right.load(f);
            double value = 0.0;
            switch (metric) {
                case MetricId::NrpbmBlurS:
                    value = 0.5 * (nrpbm_blur_s(dl, sal_ptr) + nrpbm_blur_s(dr, sal_ptr));
                    break;
                case MetricId::FariasBlurS:
                    value = 0.5 * (farias_blur_s(dl, sal_ptr) + farias_blur_s(dr, sal_ptr));
                    break;
                default:
                    value = 0.5 * (farias_block_s(dl, sal_ptr) + farias_block_s(dr, sal_ptr));
                    break;
            }
            run.frame_scores[slot] = value;
            return;
        }

        const Plane rl = ref_left.load(f);
        const Plane rr = ref_right.load(f);
        const Plane dl = dist_left.load(f);
        const Plane dr = dist_right.load(f);
        auto per_view = [&](const Plane& r, const Plane& d) {
            switch (metric) {
                case MetricId::Psnr:
                case MetricId::PsnrS:
                    return psnr_s_frame(r, d, sal_ptr, params.psnr_cap);
                case MetricId::Ssim:
                case MetricId::SsimS:
                    return ssim_s_frame(r, d, sal_ptr);
                case MetricId::MsSsim:
                case MetricId::MsSsimS: {
                    if (!sal_ptr) return msssim_s_frame(r, d, nullptr);
                    const SaliencyPyramid pyr = build_msssim_pyramid(*sal_ptr);
                    return msssim_s_frame(r, d, &pyr);
                }
                case MetricId::Vif:
                case MetricId::VifS: {
                    if (!sal_ptr) return vif_s_frame(r, d, nullptr);
                    const SaliencyPyramid pyr = build_vif_pyramid(*sal_ptr);
                    return vif_s_frame(r, d, &pyr);
                }
                default:
                    throw std::logic_error("run_metric: unhandled metric");
            }
        };
        run.frame_scores[slot] = 0.5 * (per_view(rl, dl) + per_view(rr, dr));
    });

    if (is_hv3d(metric)) {
        run.hv3d_frames = std::move(hv3d_frames);
        run.pooled = minkowski_pool(run.frame_scores, params.hv3d.pooling_p, params.hv3d.pooling_tau);
    } else {
        double acc = 0.0;
        for (double v : run.frame_scores) acc += v;
        run.pooled = acc / static_cast<double>(run.frame_scores.size());
    }
    run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return run;
}

std::string to_json(const MetricRun& run) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"metric\": \"" << run.metric << "\",\n";
    os << "  \"clip\": \"" << run.clip << "\",\n";
    os << "  \"frame_begin\": " << run.frame_begin << ",\n";
    os << "  \"pooled\": " << format_g9(run.pooled) << ",\n";
    os << "  \"wall_seconds\": " << format_g9(run.wall_seconds) << ",\n";
    if (run.eval) {
        os << "  \"eval_frames_used\": " << run.eval_frames_used << ",\n";
        os << "  \"eval\": " << to_json(*run.eval) << ",\n";
    }
    os << "  \"frame_scores\": [";
    for (size_t i = 0; i < run.frame_scores.size(); ++i) {
        if (i) os << ", ";
        os << format_g9(run.frame_scores[i]);
    }
    os << "]\n}\n";
    return os.str();
}

std::string to_csv(const MetricRun& run) {
    std::ostringstream os;
    if (!run.hv3d_frames.empty()) {
        os << "frame,q_cyclopean,q_depth,hv3d\n";
        for (const FrameScore& fs : run.hv3d_frames)
            os << fs.frame_index << "," << format_g9(fs.q_cyclopean) << "," << format_g9(fs.q_depth)
               << "," << format_g9(fs.hv3d) << "\n";
    } else {
        os << "frame,score\n";
        for (size_t i = 0; i < run.frame_scores.size(); ++i)
            os << (run.frame_begin + static_cast<int>(i)) << "," << format_g9(run.frame_scores[i])
               << "\n";
    }
    return os.str();
}

std::string to_json(const EvalScores& e) {
    std::ostringstream os;
    os << "{\"auc\": " << format_g9(e.auc) << ", \"sauc\": " << format_g9(e.sauc)
       << ", \"nss\": " << format_g9(e.nss) << ", \"pcc\": " << format_g9(e.pcc)
       << ", \"sim\": " << format_g9(e.sim) << ", \"kld\": " << format_g9(e.kld)
       << ", \"emd\": " << format_g9(e.emd) << "}";
    return os.str();
}

std::string to_json(const StatsReport& r) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"pcc_fitted\": " << format_g9(r.pcc_fitted) << ",\n";
    os << "  \"pcc_raw\": " << format_g9(r.pcc_raw) << ",\n";
    os << "  \"scc\": " << format_g9(r.scc) << ",\n";
    os << "  \"rmse\": " << format_g9(r.rmse) << ",\n";
    os << "  \"outlier_ratio\": " << format_g9(r.outlier_ratio) << ",\n";
    os << "  \"fit\": {\"model\": \"" << (r.fit.model == FitModel::Logistic ? "logistic" : "power")
       << "\", \"a\": " << format_g9(r.fit.a) << ", \"b\": " << format_g9(r.fit.b)
       << ", \"c\": " << format_g9(r.fit.c) << ", \"residual\": " << format_g9(r.fit.residual)
       << "}\n}\n";
    return os.str();
}

StatsReport stats_report_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    StatsReport r;
    r.pcc_fitted = j.at("pcc_fitted").get<double>();
    r.pcc_raw = j.at("pcc_raw").get<double>();
    r.scc = j.at("scc").get<double>();
    r.rmse = j.at("rmse").get<double>();
    r.outlier_ratio = j.at("outlier_ratio").get<double>();
    const nlohmann::json& jf = j.at("fit");
    r.fit.model = jf.at("model").get<std::string>() == "power" ? FitModel::Power : FitModel::Logistic;
    r.fit.a = jf.at("a").get<double>();
    r.fit.b = jf.at("b").get<double>();
    r.fit.c = jf.at("c").get<double>();
    r.fit.residual = jf.at("residual").get<double>();
    return r;
}

}  // namespace svq
