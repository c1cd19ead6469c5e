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

#include <vector>

namespace svq {

/// DCT-domain contrast-sensitivity weighting mask. Element ratios are
/// inversely proportional to the JPEG luminance quantization table, and
/// the mean of all elements is 1.
struct CsfMask {
    int size = 0;
    std::vector<double> weights;  // size*size, row-major

    double at(int x, int y) const { return weights[static_cast<size_t>(y) * size + x]; }
};

/// Base 8x8 mask from the standard JPEG luminance quantization table,
/// bicubic-resampled to m x m when m != 8, renormalized to mean 1.
CsfMask build_csf_mask(int m);

}  // namespace svq
