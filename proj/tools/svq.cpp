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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "svq/io.hpp"
#include "svq/runner.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct FrameRange {
    int begin = 0;
    int end = -1;  // exclusive; -1 = all
};

// "--frames a..b" with inclusive endpoints.
FrameRange parse_frames(const std::string& text) {
    FrameRange r;
    if (text.empty()) return r;
    const auto pos = text.find("..");
    if (pos == std::string::npos)
        throw CLI::ValidationError("--frames", "expected a..b");
    r.begin = std::stoi(text.substr(0, pos));
    r.end = std::stoi(text.substr(pos + 2)) + 1;
    if (r.begin < 0 || r.end <= r.begin)
        throw CLI::ValidationError("--frames", "bad range");
    return r;
}

svq::ViewingGeometry geometry_from_json(const json& j, svq::ViewingGeometry g) {
    g.viewer_distance_mm = j.value("viewer_distance_mm", g.viewer_distance_mm);
    g.display_width_mm = j.value("display_width_mm", g.display_width_mm);
    g.display_height_mm = j.value("display_height_mm", g.display_height_mm);
    g.horizontal_resolution = j.value("horizontal_resolution", g.horizontal_resolution);
    g.vertical_resolution = j.value("vertical_resolution", g.vertical_resolution);
    g.inter_ocular_mm = j.value("inter_ocular_mm", g.inter_ocular_mm);
    g.acuity_half_angle_deg = j.value("acuity_half_angle_deg", g.acuity_half_angle_deg);
    return g;
}

// Defaults <- manifest geometry <- params file <- --seed flag.
svq::MetricParams load_params(const std::string& params_path, const svq::ViewingGeometry& geo,
                              std::optional<uint64_t> seed) {
    svq::MetricParams p;
    p.hv3d.geometry = geo;
    if (!params_path.empty()) {
        std::ifstream in(params_path);
        if (!in) throw std::runtime_error(params_path + ": cannot open params file");
        json j;
        in >> j;
        p.hv3d.block_size = j.value("block_size", p.hv3d.block_size);
        p.hv3d.search_size = j.value("search_size", p.hv3d.search_size);
        p.hv3d.beta1 = j.value("beta1", p.hv3d.beta1);
        p.hv3d.beta2 = j.value("beta2", p.hv3d.beta2);
        p.hv3d.beta3 = j.value("beta3", p.hv3d.beta3);
        p.hv3d.pooling_p = j.value("pooling_p", p.hv3d.pooling_p);
        p.hv3d.pooling_tau = j.value("pooling_tau", p.hv3d.pooling_tau);
        p.hv3d.variance_block = j.value("variance_block", p.hv3d.variance_block);
        if (j.contains("mode")) {
            const std::string mode = j.at("mode").get<std::string>();
            if (mode == "fast")
                p.hv3d.mode = svq::MatchMode::Fast;
            else if (mode == "full")
                p.hv3d.mode = svq::MatchMode::Full;
            else
                throw std::runtime_error("params: mode must be 'full' or 'fast'");
        }
        p.psnr_cap = j.value("psnr_cap", p.psnr_cap);
        p.seed = j.value("seed", p.seed);
        p.emd_grid_w = j.value("emd_grid_w", p.emd_grid_w);
        p.emd_grid_h = j.value("emd_grid_h", p.emd_grid_h);
        p.threads = j.value("threads", p.threads);
        if (j.contains("geometry")) p.hv3d.geometry = geometry_from_json(j.at("geometry"), p.hv3d.geometry);
    }
    if (seed) p.seed = *seed;
    p.hv3d.validate();
    return p;
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error(out_path + ": cannot open for writing");
    out << text;
}

size_t clip_index_by_name(const svq::DatasetManifest& m, const std::string& name) {
    if (name.empty()) {
        if (m.clips.size() == 1) return 0;
        throw std::runtime_error("--clip required when the manifest has several clips");
    }
    for (size_t i = 0; i < m.clips.size(); ++i)
        if (m.clips[i].name == name) return i;
    throw std::runtime_error("clip '" + name + "' not found in manifest");
}

// (x, y) rows; a leading non-numeric header line is skipped.
std::vector<std::pair<double, double>> read_xy_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    std::vector<std::pair<double, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::istringstream ss(line);
        double x, y;
        char comma;
        if (ss >> x >> comma >> y) rows.emplace_back(x, y);
    }
    if (rows.empty()) throw std::runtime_error(path + ": no data rows");
    return rows;
}

int cmd_score(const std::string& manifest_path, const std::string& clip, const std::string& metric,
              const std::string& params_path, std::optional<uint64_t> seed, const std::string& frames,
              const std::string& out) {
    const svq::DatasetManifest manifest = svq::load_manifest(manifest_path);
    const auto id = svq::metric_from_string(metric);
    if (!id) throw std::runtime_error("unknown metric '" + metric + "'");
    const svq::MetricParams params = load_params(params_path, manifest.geometry, seed);
    const FrameRange range = parse_frames(frames);
    const svq::MetricRun run =
        svq::run_metric(manifest, clip_index_by_name(manifest, clip), *id, params, range.begin, range.end);
    write_output(out, svq::to_json(run));
    return 0;
}

int cmd_batch(const std::string& manifest_path, const std::vector<std::string>& metrics,
              const std::string& params_path, std::optional<uint64_t> seed, const std::string& frames,
              const std::string& out_dir) {
    const svq::DatasetManifest manifest = svq::load_manifest(manifest_path);
    const svq::MetricParams params = load_params(params_path, manifest.geometry, seed);
    const FrameRange range = parse_frames(frames);
    if (!out_dir.empty()) fs::create_directories(out_dir);

    std::ostringstream summary;
    summary << "[\n";
    bool first = true;
    for (size_t c = 0; c < manifest.clips.size(); ++c) {
        for (const std::string& metric : metrics) {
            const auto id = svq::metric_from_string(metric);
            if (!id) throw std::runtime_error("unknown metric '" + metric + "'");
            const svq::MetricRun run = svq::run_metric(manifest, c, *id, params, range.begin, range.end);
            if (!out_dir.empty()) {
                std::string safe_metric = metric;
                for (char& ch : safe_metric)
                    if (ch == '-') ch = '_';
                const std::string csv_path =
                    (fs::path(out_dir) / (run.clip + "_" + safe_metric + ".csv")).string();
                std::ofstream csv(csv_path);
                if (!csv) throw std::runtime_error(csv_path + ": cannot open for writing");
                csv << svq::to_csv(run);
            }
            if (!first) summary << ",\n";
            first = false;
            std::string run_json = svq::to_json(run);
            while (!run_json.empty() && run_json.back() == '\n') run_json.pop_back();
            summary << run_json;
            std::cerr << run.clip << " " << run.metric << " pooled=" << svq::format_g9(run.pooled)
                      << " (" << svq::format_g9(run.wall_seconds) << " s)\n";
        }
    }
    summary << "\n]\n";
    const std::string summary_path =
        out_dir.empty() ? "" : (fs::path(out_dir) / "summary.json").string();
    write_output(summary_path, summary.str());
    return 0;
}

int cmd_saliency_eval(const std::string& saliency, const std::string& format, int width, int height,
                      int frames, const std::string& gaze, const std::string& negatives,
                      const std::string& params_path, std::optional<uint64_t> seed,
                      const std::string& out) {
    svq::DatasetManifest manifest;
    svq::ClipManifest clip;
    clip.name = "cli";
    clip.width = width;
    clip.height = height;
    clip.frames = frames;
    svq::SourceSpec sal;
    sal.kind = format == "f32" ? svq::SourceSpec::Kind::F32Seq : svq::SourceSpec::Kind::PgmSeq;
    sal.path = saliency;
    clip.saliency = sal;
    clip.gaze = gaze;
    manifest.clips.push_back(clip);
    if (!negatives.empty()) {
        // a second pseudo-clip supplies the cross-scene negative pool
        svq::ClipManifest other = manifest.clips[0];
        other.name = "negatives";
        other.gaze = negatives;
        manifest.clips.push_back(other);
    }

    const svq::MetricParams params = load_params(params_path, manifest.geometry, seed);
    const svq::MetricRun run = svq::run_metric(manifest, 0, svq::MetricId::SaliencyEval, params);
    write_output(out, svq::to_json(run));
    return 0;
}

int cmd_fit(const std::string& data_path, const std::string& model, std::optional<uint64_t> seed,
            const std::string& out) {
    const auto rows = read_xy_csv(data_path);
    std::vector<double> x, y;
    for (const auto& [a, b] : rows) {
        x.push_back(a);
        y.push_back(b);
    }
    const uint64_t s = seed.value_or(1);
    const svq::FitResult fit =
        model == "power" ? svq::power_fit(x, y, s) : svq::logistic_fit(x, y, s);
    const svq::StatsReport report = svq::perf_stats(x, y, fit);
    write_output(out, svq::to_json(report));
    return 0;
}

int cmd_calibrate(const std::string& components_path, const std::string& grid_b1,
                  const std::string& grid_b2, const std::string& grid_b3, const std::string& out) {
    std::ifstream in(components_path);
    if (!in) throw std::runtime_error(components_path + ": cannot open");
    std::vector<svq::ComponentTriple> comps;
    std::vector<double> mos;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::istringstream ss(line);
        svq::ComponentTriple t;
        double m;
        char comma;
        if (ss >> t.mean_ssim >> comma >> t.vif >> comma >> t.variance_term >> comma >> m) {
            comps.push_back(t);
            mos.push_back(m);
        }
    }
    if (comps.empty()) throw std::runtime_error(components_path + ": no data rows");

    svq::BetaGrid grid;
    auto parse_axis = [](const std::string& text, double& lo, double& hi, double& step) {
        if (text.empty()) return;
        double a, b, c;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &a, &b, &c) != 3)
            throw std::runtime_error("grid axis must be min:max:step");
        lo = a;
        hi = b;
        step = c;
    };
    double step1 = grid.step, step2 = grid.step, step3 = grid.step;
    parse_axis(grid_b1, grid.min1, grid.max1, step1);
    parse_axis(grid_b2, grid.min2, grid.max2, step2);
    parse_axis(grid_b3, grid.min3, grid.max3, step3);
    if (step1 != step2 || step2 != step3)
        throw std::runtime_error("grid axes must share one step size");
    grid.step = step1;

    const auto beta = svq::calibrate_exponents(comps, mos, grid);
    std::ostringstream os;
    os << "{\"beta1\": " << svq::format_g9(beta[0]) << ", \"beta2\": " << svq::format_g9(beta[1])
       << ", \"beta3\": " << svq::format_g9(beta[2]) << "}\n";
    write_output(out, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"svq - stereoscopic 3D video quality toolkit"};
    app.require_subcommand(1);

    std::string manifest_path, clip, metric, params_path, frames, out;
    std::vector<std::string> metrics;
    std::optional<uint64_t> seed;

    auto* score = app.add_subcommand("score", "Score one metric on one clip, emit JSON");
    score->add_option("--manifest", manifest_path, "dataset manifest (JSON)")->required();
    score->add_option("--clip", clip, "clip name (defaults to the only clip)");
    score->add_option("--metric", metric, "metric id")->required();
    score->add_option("--params", params_path, "parameter file (JSON)");
    score->add_option("--seed", seed, "RNG seed");
    score->add_option("--frames", frames, "frame range a..b (inclusive)");
    score->add_option("--out", out, "output file (default stdout)");

    auto* batch = app.add_subcommand("batch", "Run metrics over every clip, emit CSV + JSON");
    batch->add_option("--manifest", manifest_path, "dataset manifest (JSON)")->required();
    batch->add_option("--metric", metrics, "metric id (repeatable)")->required();
    batch->add_option("--params", params_path, "parameter file (JSON)");
    batch->add_option("--seed", seed, "RNG seed");
    batch->add_option("--frames", frames, "frame range a..b (inclusive)");
    batch->add_option("--out", out, "output directory");

    std::string sal_pattern, sal_format = "pgm", gaze, negatives;
    int width = 0, height = 0, nframes = 0;
    auto* seval = app.add_subcommand("saliency-eval", "Evaluate saliency maps against gaze data");
    seval->add_option("--saliency", sal_pattern, "frame pattern, e.g. sal_%04d.pgm")->required();
    seval->add_option("--format", sal_format, "pgm or f32")->check(CLI::IsMember({"pgm", "f32"}));
    seval->add_option("--width", width, "frame width")->required();
    seval->add_option("--height", height, "frame height")->required();
    seval->add_option("--frames-count", nframes, "number of frames")->required();
    seval->add_option("--gaze", gaze, "gaze CSV (timestamp_ms,subject_id,frame_index,x,y)")->required();
    seval->add_option("--negatives", negatives, "gaze CSV of other scenes for sAUC");
    seval->add_option("--params", params_path, "parameter file (JSON)");
    seval->add_option("--seed", seed, "RNG seed");
    seval->add_option("--out", out, "output file (default stdout)");

    std::string fit_data, fit_model = "logistic";
    auto* fit = app.add_subcommand("fit", "Fit score-vs-MOS mapping, emit a stats report");
    fit->add_option("--data", fit_data, "CSV of score,mos rows")->required();
    fit->add_option("--model", fit_model, "logistic or power")
        ->check(CLI::IsMember({"logistic", "power"}));
    fit->add_option("--seed", seed, "RNG seed");
    fit->add_option("--out", out, "output file (default stdout)");

    std::string comp_path, grid_b1, grid_b2, grid_b3;
    auto* calibrate = app.add_subcommand("calibrate", "Grid-search HV3D exponents against MOS");
    calibrate->add_option("--components", comp_path, "CSV of mean_ssim,vif,variance_term,mos")
        ->required();
    calibrate->add_option("--grid-b1", grid_b1, "axis min:max:step (default 0.05:1:0.05)");
    calibrate->add_option("--grid-b2", grid_b2, "axis min:max:step");
    calibrate->add_option("--grid-b3", grid_b3, "axis min:max:step");
    calibrate->add_option("--out", out, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (score->parsed())
            return cmd_score(manifest_path, clip, metric, params_path, seed, frames, out);
        if (batch->parsed()) return cmd_batch(manifest_path, metrics, params_path, seed, frames, out);
        if (seval->parsed())
            return cmd_saliency_eval(sal_pattern, sal_format, width, height, nframes, gaze, negatives,
                                     params_path, seed, out);
        if (fit->parsed()) return cmd_fit(fit_data, fit_model, seed, out);
        if (calibrate->parsed()) return cmd_calibrate(comp_path, grid_b1, grid_b2, grid_b3, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
