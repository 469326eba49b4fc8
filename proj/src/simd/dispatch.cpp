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

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "consol/simd/kernels.hpp"

namespace consol::simd {

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
  }
  return false;
}

const Kernels& kernels_for(Isa isa) {
  if (!supported(isa)) {
    throw std::invalid_argument("instruction set not supported on this CPU: " +
                                std::string(to_string(isa)));
  }
#if defined(__x86_64__) || defined(__i386__)
  if (isa == Isa::Avx2) return detail::avx2_kernels();
#endif
  return detail::scalar_kernels();
}

namespace {

const Kernels& pick() {
  if (const char* forced = std::getenv("CONSOL_SIMD")) {
    if (std::string_view(forced) == "scalar") return detail::scalar_kernels();
  }
  if (supported(Isa::Avx2)) return kernels_for(Isa::Avx2);
  return detail::scalar_kernels();
}

}  // namespace

const Kernels& active() {
  static const Kernels& chosen = pick();
  return chosen;
}

}  // namespace consol::simd
