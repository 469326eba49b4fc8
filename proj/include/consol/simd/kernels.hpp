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

#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops used when building and checking degradation
// tables. Each kernel has a scalar reference and an AVX2 variant; the AVX2
// variant must produce bit-identical results. The variant is picked at run
// time from the CPU, and CONSOL_SIMD=scalar forces the reference path.
//
// Arrays are viewed as [outer][len][inner] blocks: `inner` contiguous
// elements per step along the axis of length `len`.
namespace consol::simd {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

// Inputs for one row of raw generator entries: the culprit point is fixed and
// the victim point varies over `count` contiguous slots.
struct PairRowArgs {
  const double* victim_position = nullptr;   // normalized grid position, [0, 2]
  const double* victim_competing = nullptr;  // competing bytes as double
  const double* noise = nullptr;
  std::size_t count = 0;
  double culprit_position = 0.0;
  double culprit_competing = 0.0;
  double baseline = 0.0;
  double penalty = 0.0;
  double llc_size = 0.0;
};

struct Kernels {
  Isa isa;
  // data[o][l][k] = max(data[o][l][k], data[o][l-1][k]) for l = 1..len-1.
  void (*cummax_axis)(double* data, std::size_t outer, std::size_t len, std::size_t inner);
  // Number of (o, l, k) with data[o][l][k] < data[o][l-1][k].
  std::size_t (*count_descents)(const double* data, std::size_t outer, std::size_t len,
                                std::size_t inner);
  // Number of values outside [lo, hi). NaN counts as outside.
  std::size_t (*count_outside)(const double* data, std::size_t n, double lo, double hi);
  // out[k] = baseline * ((culprit_position + victim_position[k]) * 0.25)
  //          + (culprit_competing + victim_competing[k] > llc_size ? penalty : 0)
  //          + noise[k]
  void (*fill_pair_row)(double* out, const PairRowArgs& args);
};

bool supported(Isa isa) noexcept;

// Throws std::invalid_argument when the CPU lacks the instruction set.
const Kernels& kernels_for(Isa isa);

// Best supported variant, honoring CONSOL_SIMD=scalar.
const Kernels& active();

namespace detail {
const Kernels& scalar_kernels() noexcept;
#if defined(__x86_64__) || defined(__i386__)
const Kernels& avx2_kernels() noexcept;
#endif
}  // namespace detail

}  // namespace consol::simd
