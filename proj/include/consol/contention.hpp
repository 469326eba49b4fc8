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

#include <cstdint>
#include <span>

#include "consol/server.hpp"
#include "consol/units.hpp"
#include "consol/workload.hpp"

// Capacity-based last-level-cache contention model.
//
// Every co-running workload competes for the LLC with its request size; only
// workloads whose file fits in the LLC (the competing set) also compete with
// their file size. The throughput degradation point (TDP) is reached once the
// competing data fills the LLC.
namespace consol {

// Bytes one workload adds to the competing data on a server with this LLC.
constexpr Bytes competing_contribution(const WorkloadSpec& w, Bytes llc_size) {
  return w.request_size + (w.file_size <= llc_size ? w.file_size : 0);
}

Bytes competing_data(std::span<const WorkloadSpec> workloads, const ServerProfile& profile);

// Legacy form that counts every file size regardless of the LLC. Kept only to
// check that both forms agree whenever every file fits in the LLC.
Bytes competing_data_all_files(std::span<const WorkloadSpec> workloads);

enum class TdpRule { CompetingSet, AllFiles };

struct TdpPrediction {
  bool reached = false;
  std::int64_t margin_bytes = 0;  // llc_size - competing data
};

TdpPrediction predict_tdp(std::span<const WorkloadSpec> workloads, const ServerProfile& profile,
                          TdpRule rule = TdpRule::CompetingSet);

// competing data <= alpha * llc_size. Equality is admitted.
bool criterion_two(std::span<const WorkloadSpec> workloads, const ServerProfile& profile);

// competing data / (alpha * llc_size). May exceed 1 for hypothetical states.
double cache_in_use(std::span<const WorkloadSpec> workloads, const ServerProfile& profile);

// alpha estimated from an observed TDP: observed / llc_size.
double calibrate_alpha(double observed_tdp_bytes, const ServerProfile& profile);

}  // namespace consol
