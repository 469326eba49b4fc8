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

#include "consol/throughput.hpp"

#include <cmath>

#include "consol/error.hpp"
#include "consol/server.hpp"
#include "consol/workload.hpp"

namespace consol {

void validate_params(const ThroughputParams& p) {
  if (!(p.level1_base > p.level2_base && p.level2_base > p.level3_base && p.level3_base > 0.0)) {
    throw Error(Errc::InvalidParams, "throughput levels must satisfy level1 > level2 > level3 > 0");
  }
  if (!(p.rs_exponent > 0.0 && p.rs_exponent <= 1.0)) {
    throw Error(Errc::InvalidParams, "rs_exponent must lie in (0, 1]");
  }
  if (p.rs_reference == 0) throw Error(Errc::InvalidParams, "rs_reference must be positive");
}

const char* to_string(ThroughputLevel level) noexcept {
  switch (level) {
    case ThroughputLevel::CacheFit: return "CacheFit";
    case ThroughputLevel::BufferFit: return "BufferFit";
    case ThroughputLevel::DiskBound: return "DiskBound";
  }
  return "Unknown";
}

ThroughputLevel throughput_level(const WorkloadSpec& spec, const ServerProfile& profile) {
  if (spec.file_size <= profile.llc_size) return ThroughputLevel::CacheFit;
  if (spec.operation == Operation::Read || spec.file_size <= profile.buffer_capacity()) {
    return ThroughputLevel::BufferFit;
  }
  return ThroughputLevel::DiskBound;
}

double single_throughput(const WorkloadSpec& spec, const ServerProfile& profile) {
  const ThroughputParams& p = profile.throughput;
  double base = p.level1_base;
  switch (throughput_level(spec, profile)) {
    case ThroughputLevel::CacheFit: base = p.level1_base; break;
    case ThroughputLevel::BufferFit: base = p.level2_base; break;
    case ThroughputLevel::DiskBound: base = p.level3_base; break;
  }
  const double ratio = static_cast<double>(spec.request_size) / static_cast<double>(p.rs_reference);
  // Bases are strictly ordered and share the rs factor, so the result is
  // monotone in rs and anti-monotone in fs without further clamping.
  return base * std::pow(ratio, p.rs_exponent);
}

}  // namespace consol
