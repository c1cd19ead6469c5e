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

#include <optional>
#include <string>
#include <vector>

#include "svq/geometry.hpp"
#include "svq/plane.hpp"

namespace svq {

/// One frame-sequence input: a numbered PGM/float sequence (printf-style
/// %d pattern) or a single raw YUV420 file. `offset`/`scale` remap raw
/// sample values as (raw - offset) / scale (used by disparity sources).
struct SourceSpec {
    enum class Kind { PgmSeq, F32Seq, Yuv420 };
    Kind kind = Kind::PgmSeq;
    std::string path;
    int start = 0;
    double offset = 0.0;
    double scale = 1.0;
};

/// Loader for one source bound to its clip dimensions.
class FrameSource {
  public:
    FrameSource() = default;
    FrameSource(SourceSpec spec, int width, int height);

    /// Decode frame `index` (0-based, before `start` offset); errors
    /// name the frame. Offset/scale remapping is applied.
    Plane load(int index) const;

    const SourceSpec& spec() const { return spec_; }

  private:
    SourceSpec spec_;
    int width_ = 0;
    int height_ = 0;
};

struct ClipManifest {
    std::string name;
    int width = 0;
    int height = 0;
    int frames = 0;
    SourceSpec ref_left, ref_right, dist_left, dist_right;
    std::optional<SourceSpec> disparity;
    std::optional<SourceSpec> saliency;
    std::optional<SourceSpec> depth_ref;
    std::optional<SourceSpec> depth_dist;
    std::optional<std::string> gaze;  // CSV path
    std::optional<double> mos;
    std::vector<double> subject_scores;  // aligned by subject index across clips
};

struct DatasetManifest {
    ViewingGeometry geometry;
    std::vector<ClipManifest> clips;
};

/// Parse and validate a JSON manifest: all referenced files must exist
/// and hold at least the declared frame count. Relative paths are
/// resolved against the manifest's directory.
DatasetManifest load_manifest(const std::string& path);

/// Expand a printf-style frame pattern ("l_%04d.pgm", 7 -> "l_0007.pgm").
std::string frame_path(const std::string& pattern, int index);

}  // namespace svq
