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

#include "consol/units.hpp"

namespace consol {

struct WorkloadSpec;
struct ServerProfile;

// Three-plateau single-workload throughput model. The level bases are MB/s at
// the reference request size; throughput scales as (rs / rs_reference)^rs_exponent.
// Shipped defaults are synthetic placeholders meant to be re-fitted from real
// measurements, not measured values.
struct ThroughputParams {
  double level1_base = 1200.0;  // file fits in LLC
  double level2_base = 320.0;   // file fits in file cache + disk cache
  double level3_base = 75.0;    // writes that spill to the disk itself
  double rs_exponent = 0.35;
  Bytes rs_reference = 64 * kKiB;

  friend bool operator==(const ThroughputParams&, const ThroughputParams&) = default;
};

// Throws Error(InvalidParams) unless level1 > level2 > level3 > 0,
// rs_exponent in (0, 1] and rs_reference > 0.
void validate_params(const ThroughputParams& params);

enum class ThroughputLevel { CacheFit, BufferFit, DiskBound };

const char* to_string(ThroughputLevel level) noexcept;

// Reads have two observed levels, so they never report DiskBound.
ThroughputLevel throughput_level(const WorkloadSpec& spec, const ServerProfile& profile);

// MB/s for a workload running alone on the server.
double single_throughput(const WorkloadSpec& spec, const ServerProfile& profile);

}  // namespace consol
