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

#include "svq/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "svq/io.hpp"

namespace svq {

namespace fs = std::filesystem;
using nlohmann::json;

std::string frame_path(const std::string& pattern, int index) {
    if (pattern.find('%') == std::string::npos) return pattern;
    char buf[1024];
    std::snprintf(buf, sizeof(buf), pattern.c_str(), index);
    return buf;
}

FrameSource::FrameSource(SourceSpec spec, int width, int height)
    : spec_(std::move(spec)), width_(width), height_(height) {}

Plane FrameSource::load(int index) const {
    Plane p;
    try {
        switch (spec_.kind) {
            case SourceSpec::Kind::PgmSeq:
                p = read_pgm(frame_path(spec_.path, spec_.start + index));
                break;
            case SourceSpec::Kind::F32Seq:
                p = read_f32(frame_path(spec_.path, spec_.start + index), width_, height_);
                break;
            case SourceSpec::Kind::Yuv420: {
                Yuv420Reader reader(spec_.path, width_, height_);
                p = reader.read_luma(spec_.start + index);
                break;
            }
        }
    } catch (const std::exception& e) {
        throw std::runtime_error("frame " + std::to_string(index) + ": " + e.what());
    }
    if (p.width != width_ || p.height != height_)
        throw std::runtime_error("frame " + std::to_string(index) + ": size " +
                                 std::to_string(p.width) + "x" + std::to_string(p.height) +
                                 " does not match clip " + std::to_string(width_) + "x" +
                                 std::to_string(height_));
    if (spec_.offset != 0.0 || spec_.scale != 1.0) {
        if (spec_.scale == 0.0) throw std::runtime_error("source scale must be nonzero");
        for (double& v : p.samples) v = (v - spec_.offset) / spec_.scale;
    }
    return p;
}

namespace {

SourceSpec parse_source(const json& j, const fs::path& base) {
    SourceSpec s;
    const std::string type = j.at("type").get<std::string>();
    if (type == "pgm_seq")
        s.kind = SourceSpec::Kind::PgmSeq;
    else if (type == "f32_seq")
        s.kind = SourceSpec::Kind::F32Seq;
    else if (type == "yuv420")
        s.kind = SourceSpec::Kind::Yuv420;
    else
        throw std::runtime_error("manifest: unknown source type '" + type + "'");
    fs::path p = j.at("path").get<std::string>();
    if (p.is_relative()) p = base / p;
    s.path = p.string();
    s.start = j.value("start", 0);
    s.offset = j.value("offset", 0.0);
    s.scale = j.value("scale", 1.0);
    if (s.scale == 0.0) throw std::runtime_error("manifest: source scale must be nonzero");
    return s;
}

void validate_source(const SourceSpec& s, const ClipManifest& clip, const std::string& role) {
    const std::string who = "clip '" + clip.name + "' " + role;
    switch (s.kind) {
        case SourceSpec::Kind::PgmSeq:
        case SourceSpec::Kind::F32Seq:
            for (int f = 0; f < clip.frames; ++f) {
                const std::string p = frame_path(s.path, s.start + f);
                if (!fs::exists(p)) throw std::runtime_error(who + ": missing file " + p);
            }
            break;
        case SourceSpec::Kind::Yuv420: {
            if (!fs::exists(s.path)) throw std::runtime_error(who + ": missing file " + s.path);
            const auto bytes = fs::file_size(s.path);
            const size_t need =
                static_cast<size_t>(clip.width) * clip.height * 3 / 2 * (s.start + clip.frames);
            if (bytes < need)
                throw std::runtime_error(who + ": " + s.path + " holds " + std::to_string(bytes) +
                                         " bytes, needs " + std::to_string(need) + " for " +
                                         std::to_string(clip.frames) + " frames");
            break;
        }
    }
}

ViewingGeometry parse_geometry(const json& j) {
    ViewingGeometry g;
    g.viewer_distance_mm = j.value("viewer_distance_mm", g.viewer_distance_mm);
    g.display_width_mm = j.value("display_width_mm", g.display_width_mm);
    g.display_height_mm = j.value("display_height_mm", g.display_height_mm);
    g.horizontal_resolution = j.value("horizontal_resolution", g.horizontal_resolution);
    g.vertical_resolution = j.value("vertical_resolution", g.vertical_resolution);
    g.inter_ocular_mm = j.value("inter_ocular_mm", g.inter_ocular_mm);
    g.acuity_half_angle_deg = j.value("acuity_half_angle_deg", g.acuity_half_angle_deg);
    g.validate();
    return g;
}

}  // namespace

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open manifest");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    const fs::path base = fs::path(path).parent_path();

    DatasetManifest m;
    if (j.contains("geometry")) m.geometry = parse_geometry(j.at("geometry"));

    if (!j.contains("clips") || !j.at("clips").is_array() || j.at("clips").empty())
        throw std::runtime_error(path + ": manifest has no clips");
    for (const json& jc : j.at("clips")) {
        ClipManifest c;
        c.name = jc.at("name").get<std::string>();
        c.width = jc.at("width").get<int>();
        c.height = jc.at("height").get<int>();
        c.frames = jc.at("frames").get<int>();
        if (c.width <= 0 || c.height <= 0 || c.frames <= 0)
            throw std::runtime_error("clip '" + c.name + "': bad dimensions or frame count");

        c.ref_left = parse_source(jc.at("ref").at("left"), base);
        c.ref_right = parse_source(jc.at("ref").at("right"), base);
        c.dist_left = parse_source(jc.at("dist").at("left"), base);
        c.dist_right = parse_source(jc.at("dist").at("right"), base);
        if (jc.contains("disparity")) c.disparity = parse_source(jc.at("disparity"), base);
        if (jc.contains("saliency")) c.saliency = parse_source(jc.at("saliency"), base);
        if (jc.contains("depth")) {
            const json& jd = jc.at("depth");
            if (jd.contains("ref")) c.depth_ref = parse_source(jd.at("ref"), base);
            if (jd.contains("dist")) c.depth_dist = parse_source(jd.at("dist"), base);
        }
        if (jc.contains("gaze")) {
            fs::path p = jc.at("gaze").get<std::string>();
            if (p.is_relative()) p = base / p;
            c.gaze = p.string();
            if (!fs::exists(*c.gaze))
                throw std::runtime_error("clip '" + c.name + "': missing gaze file " + *c.gaze);
        }
        if (jc.contains("mos")) c.mos = jc.at("mos").get<double>();
        if (jc.contains("subject_scores"))
            c.subject_scores = jc.at("subject_scores").get<std::vector<double>>();

        validate_source(c.ref_left, c, "ref.left");
        validate_source(c.ref_right, c, "ref.right");
        validate_source(c.dist_left, c, "dist.left");
        validate_source(c.dist_right, c, "dist.right");
        if (c.disparity) validate_source(*c.disparity, c, "disparity");
        if (c.saliency) validate_source(*c.saliency, c, "saliency");
        if (c.depth_ref) validate_source(*c.depth_ref, c, "depth.ref");
        if (c.depth_dist) validate_source(*c.depth_dist, c, "depth.dist");

        m.clips.push_back(std::move(c));
    }
    return m;
}

}  // namespace svq
