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

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

// Only these functions carry the avx2 target; the rest of the binary stays on
// the baseline ISA so it runs anywhere. No FMA: results must match the scalar
// reference bit for bit.
#define CONSOL_AVX2 __attribute__((target("avx2")))

namespace consol::simd {
namespace {

constexpr std::size_t kLanes = 4;

CONSOL_AVX2 void cummax_axis_avx2(double* data, std::size_t outer, std::size_t len,
                                  std::size_t inner) {
  const std::size_t slab = len * inner;
  const std::size_t body = inner - inner % kLanes;
  for (std::size_t o = 0; o < outer; ++o) {
    double* base = data + o * slab;
    if (inner == 1) {
      // Contiguous prefix max; nothing to vectorize across.
      double run = base[0];
      for (std::size_t l = 1; l < len; ++l) {
        if (run > base[l]) base[l] = run;
        run = base[l];
      }
      continue;
    }
    for (std::size_t l = 1; l < len; ++l) {
      double* cur = base + l * inner;
      const double* prev = cur - inner;
      std::size_t k = 0;
      for (; k < body; k += kLanes) {
        const __m256d p = _mm256_loadu_pd(prev + k);
        const __m256d c = _mm256_loadu_pd(cur + k);
        // max_pd(p, c) == (p > c ? p : c), which is the scalar rule.
        _mm256_storeu_pd(cur + k, _mm256_max_pd(p, c));
      }
      for (; k < inner; ++k) {
        if (prev[k] > cur[k]) cur[k] = prev[k];
      }
    }
  }
}

CONSOL_AVX2 std::size_t count_descents_avx2(const double* data, std::size_t outer,
                                            std::size_t len, std::size_t inner) {
  const std::size_t slab = len * inner;
  std::size_t count = 0;
  if (inner == 1) {
    // Compare each row against itself shifted by one.
    for (std::size_t o = 0; o < outer; ++o) {
      const double* row = data + o * slab;
      std::size_t l = 1;
      for (; l + kLanes <= len; l += kLanes) {
        const __m256d c = _mm256_loadu_pd(row + l);
        const __m256d p = _mm256_loadu_pd(row + l - 1);
        const int mask = _mm256_movemask_pd(_mm256_cmp_pd(c, p, _CMP_LT_OQ));
        count += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
      }
      for (; l < len; ++l) {
        if (row[l] < row[l - 1]) ++count;
      }
    }
    return count;
  }
  const std::size_t body = inner - inner % kLanes;
  for (std::size_t o = 0; o < outer; ++o) {
    const double* base = data + o * slab;
    for (std::size_t l = 1; l < len; ++l) {
      const double* cur = base + l * inner;
      const double* prev = cur - inner;
      std::size_t k = 0;
      for (; k < body; k += kLanes) {
        const __m256d c = _mm256_loadu_pd(cur + k);
        const __m256d p = _mm256_loadu_pd(prev + k);
        const int mask = _mm256_movemask_pd(_mm256_cmp_pd(c, p, _CMP_LT_OQ));
        count += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
      }
      for (; k < inner; ++k) {
        if (cur[k] < prev[k]) ++count;
      }
    }
  }
  return count;
}

CONSOL_AVX2 std::size_t count_outside_avx2(const double* data, std::size_t n, double lo,
                                           double hi) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  std::size_t inside = 0;
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d v = _mm256_loadu_pd(data + i);
    const __m256d ok = _mm256_and_pd(_mm256_cmp_pd(v, vlo, _CMP_GE_OQ),
                                     _mm256_cmp_pd(v, vhi, _CMP_LT_OQ));
    inside += static_cast<std::size_t>(
        __builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(ok))));
  }
  std::size_t outside = i - inside;
  for (; i < n; ++i) {
    const double v = data[i];
    if (!(v >= lo && v < hi)) ++outside;
  }
  return outside;
}

CONSOL_AVX2 void fill_pair_row_avx2(double* out, const PairRowArgs& a) {
  const __m256d culprit_pos = _mm256_set1_pd(a.culprit_position);
  const __m256d culprit_comp = _mm256_set1_pd(a.culprit_competing);
  const __m256d baseline = _mm256_set1_pd(a.baseline);
  const __m256d penalty = _mm256_set1_pd(a.penalty);
  const __m256d llc = _mm256_set1_pd(a.llc_size);
  const __m256d quarter = _mm256_set1_pd(0.25);
  std::size_t k = 0;
  for (; k + kLanes <= a.count; k += kLanes) {
    const __m256d pos = _mm256_add_pd(culprit_pos, _mm256_loadu_pd(a.victim_position + k));
    const __m256d size_term = _mm256_mul_pd(baseline, _mm256_mul_pd(pos, quarter));
    const __m256d comp = _mm256_add_pd(culprit_comp, _mm256_loadu_pd(a.victim_competing + k));
    const __m256d cliff = _mm256_and_pd(_mm256_cmp_pd(comp, llc, _CMP_GT_OQ), penalty);
    const __m256d sum = _mm256_add_pd(_mm256_add_pd(size_term, cliff), _mm256_loadu_pd(a.noise + k));
    _mm256_storeu_pd(out + k, sum);
  }
  for (; k < a.count; ++k) {
    const double size_term = a.baseline * ((a.culprit_position + a.victim_position[k]) * 0.25);
    const double cliff = (a.culprit_competing + a.victim_competing[k] > a.llc_size) ? a.penalty : 0.0;
    out[k] = size_term + cliff + a.noise[k];
  }
}

constexpr Kernels kAvx2{Isa::Avx2, cummax_axis_avx2, count_descents_avx2, count_outside_avx2,
                        fill_pair_row_avx2};

}  // namespace

namespace detail {
const Kernels& avx2_kernels() noexcept { return kAvx2; }
}  // namespace detail

}  // namespace consol::simd

#endif
