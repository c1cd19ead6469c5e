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

#include "svq/plane.hpp"

namespace svq {

/// Orthonormal 2D DCT-II of an m x m block; idct2 is its exact inverse.
/// Coefficients are returned row-major (u along rows, v along columns).
std::vector<double> dct2(const Block& block);

/// Inverse of dct2; origin/size metadata is copied from the template block.
Block idct2(const std::vector<double>& coeffs, int m, int x = 0, int y = 0);

/// In-place separable transforms on a raw m x m buffer.
void dct2_inplace(double* data, int m);
void idct2_inplace(double* data, int m);

}  // namespace svq
