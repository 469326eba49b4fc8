/*
 * Copyright 2026 The consol Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "consol/simd/kernels.hpp"

namespace consol::simd {
namespace {

void cummax_axis_scalar(double* data, std::size_t outer, std::size_t len, std::size_t inner) {
  const std::size_t slab = len * inner;
  for (std::size_t o = 0; o < outer; ++o) {
    double* base = data + o * slab;
    for (std::size_t l = 1; l < len; ++l) {
      double* cur = base + l * inner;
      const double* prev = cur - inner;
      for (std::size_t k = 0; k < inner; ++k) {
        if (prev[k] > cur[k]) cur[k] = prev[k];
      }
    }
  }
}

std::size_t count_descents_scalar(const double* data, std::size_t outer, std::size_t len,
                                  std::size_t inner) {
  const std::size_t slab = len * inner;
  std::size_t count = 0;
  for (std::size_t o = 0; o < outer; ++o) {
    const double* base = data + o * slab;
    for (std::size_t l = 1; l < len; ++l) {
      const double* cur = base + l * inner;
      const double* prev = cur - inner;
      for (std::size_t k = 0; k < inner; ++k) {
        if (cur[k] < prev[k]) ++count;
      }
    }
  }
  return count;
}

std::size_t count_outside_scalar(const double* data, std::size_t n, double lo, double hi) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = data[i];
    if (!(v >= lo && v < hi)) ++count;
  }
  return count;
}

void fill_pair_row_scalar(double* out, const PairRowArgs& a) {
  for (std::size_t k = 0; k < a.count; ++k) {
    const double size_term = a.baseline * ((a.culprit_position + a.victim_position[k]) * 0.25);
    const double cliff = (a.culprit_competing + a.victim_competing[k] > a.llc_size) ? a.penalty : 0.0;
    out[k] = size_term + cliff + a.noise[k];
  }
}

constexpr Kernels kScalar{Isa::Scalar, cummax_axis_scalar, count_descents_scalar,
                          count_outside_scalar, fill_pair_row_scalar};

}  // namespace

namespace detail {
const Kernels& scalar_kernels() noexcept { return kScalar; }
}  // namespace detail

}  // namespace consol::simd
