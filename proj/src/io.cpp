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

#include "svq/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace svq {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

// Skips whitespace and `#` comments between PGM header tokens.
std::string next_pgm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

}  // namespace

Plane read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open");
    if (next_pgm_token(in) != "P5") fail(path, "not a binary PGM (P5)");
    const int width = std::stoi(next_pgm_token(in));
    const int height = std::stoi(next_pgm_token(in));
    const int maxval = std::stoi(next_pgm_token(in));
    if (width <= 0 || height <= 0) fail(path, "bad dimensions");
    if (maxval <= 0 || maxval >= 65536) fail(path, "bad maxval");

    const bool wide = maxval > 255;
    const size_t n = static_cast<size_t>(width) * height;
    std::vector<uint8_t> raw(n * (wide ? 2 : 1));
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<size_t>(in.gcount()) != raw.size()) fail(path, "truncated pixel data");

    int depth = 1;
    while ((1 << depth) - 1 < maxval) ++depth;
    Plane out(width, height, 0.0, depth);
    if (wide) {
        for (size_t i = 0; i < n; ++i)
            out.samples[i] = static_cast<double>((raw[2 * i] << 8) | raw[2 * i + 1]);
    } else {
        for (size_t i = 0; i < n; ++i) out.samples[i] = raw[i];
    }
    return out;
}

void write_pgm(const std::string& path, const Plane& plane, int maxval) {
    if (maxval <= 0 || maxval >= 65536) throw std::invalid_argument("write_pgm: bad maxval");
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open for writing");
    out << "P5\n" << plane.width << " " << plane.height << "\n" << maxval << "\n";
    const bool wide = maxval > 255;
    for (double v : plane.samples) {
        const long q = std::clamp(std::lround(v), 0l, static_cast<long>(maxval));
        if (wide) {
            out.put(static_cast<char>((q >> 8) & 0xff));
            out.put(static_cast<char>(q & 0xff));
        } else {
            out.put(static_cast<char>(q));
        }
    }
    if (!out) fail(path, "write failed");
}

Plane read_f32(const std::string& path, int width, int height) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open");
    const size_t n = static_cast<size_t>(width) * height;
    std::vector<float> raw(n);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n * sizeof(float)));
    if (static_cast<size_t>(in.gcount()) != n * sizeof(float)) fail(path, "truncated float raster");
    Plane out(width, height);
    for (size_t i = 0; i < n; ++i) out.samples[i] = raw[i];
    return out;
}

void write_f32(const std::string& path, const Plane& plane) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open for writing");
    std::vector<float> raw(plane.samples.size());
    for (size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<float>(plane.samples[i]);
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * sizeof(float)));
    if (!out) fail(path, "write failed");
}

Yuv420Reader::Yuv420Reader(std::string path, int width, int height)
    : path_(std::move(path)), width_(width), height_(height) {
    if (width <= 0 || height <= 0 || width % 2 != 0 || height % 2 != 0)
        throw std::invalid_argument("Yuv420Reader: dimensions must be positive and even");
    frame_bytes_ = static_cast<size_t>(width) * height * 3 / 2;
    std::ifstream in(path_, std::ios::binary | std::ios::ate);
    if (!in) fail(path_, "cannot open");
    const auto bytes = static_cast<size_t>(in.tellg());
    frame_count_ = static_cast<int>(bytes / frame_bytes_);
}

Plane Yuv420Reader::read_luma(int frame_index) const {
    std::ifstream in(path_, std::ios::binary);
    if (!in) fail(path_, "cannot open");
    const size_t n = static_cast<size_t>(width_) * height_;
    in.seekg(static_cast<std::streamoff>(frame_index * frame_bytes_));
    std::vector<uint8_t> raw(n);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in.gcount()) != n)
        fail(path_, "truncated at frame " + std::to_string(frame_index));
    return luma_extract(raw, width_, height_, RasterLayout::PlanarY8);
}

GazeLog read_gaze_csv(const std::string& path, int width, int height) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open");
    std::string line;
    if (!std::getline(in, line)) fail(path, "empty file");
    {
        std::string header = line;
        header.erase(std::remove_if(header.begin(), header.end(),
                                    [](char c) { return c == ' ' || c == '\r'; }),
                     header.end());
        if (header != "timestamp_ms,subject_id,frame_index,x,y")
            fail(path, "unexpected gaze CSV header: " + line);
    }

    GazeLog log;
    std::map<int, double> last_ts;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::istringstream ss(line);
        GazeRecord r;
        char comma;
        if (!(ss >> r.timestamp_ms >> comma >> r.subject_id >> comma >> r.frame_index >> comma >>
              r.x >> comma >> r.y))
            fail(path, "bad gaze record at line " + std::to_string(line_no));
        auto [it, fresh] = last_ts.try_emplace(r.subject_id, r.timestamp_ms);
        if (!fresh) {
            if (r.timestamp_ms < it->second)
                fail(path, "timestamps decrease for subject " + std::to_string(r.subject_id) +
                               " at line " + std::to_string(line_no));
            it->second = r.timestamp_ms;
        }
        if (r.x < 0 || r.y < 0 || r.x >= width || r.y >= height) {
            ++log.dropped_out_of_bounds;
            continue;
        }
        log.records.push_back(r);
    }
    return log;
}

std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace svq
