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

#include <string>

#include "svq/plane.hpp"
#include "svq/saliency_eval.hpp"

namespace svq {

/// Binary (P5) PGM, 8- or 16-bit per the header maxval (16-bit data is
/// big-endian per Netpbm).
Plane read_pgm(const std::string& path);
void write_pgm(const std::string& path, const Plane& plane, int maxval = 255);

/// Raw 32-bit little-endian float raster of known dimensions.
Plane read_f32(const std::string& path, int width, int height);
void write_f32(const std::string& path, const Plane& plane);

/// Frame-indexed access to the luma plane of a raw YUV420 (I420) file.
class Yuv420Reader {
  public:
    Yuv420Reader(std::string path, int width, int height);

    /// Frames fully present in the file.
    int frame_count() const { return frame_count_; }

    /// Throws, naming the frame index, when the file is too short.
    Plane read_luma(int frame_index) const;

  private:
    std::string path_;
    int width_;
    int height_;
    int frame_count_;
    size_t frame_bytes_;
};

/// CSV with header `timestamp_ms,subject_id,frame_index,x,y`.
/// Out-of-bounds points are dropped and counted; decreasing timestamps
/// within a subject are an error.
GazeLog read_gaze_csv(const std::string& path, int width, int height);

/// Decimal text with 9 significant digits, the numeric format used in
/// every CSV/JSON this toolkit emits.
std::string format_g9(double v);

}  // namespace svq
