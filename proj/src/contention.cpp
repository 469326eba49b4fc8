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

#include "consol/contention.hpp"

#include <cmath>

#include "consol/error.hpp"

namespace consol {

Bytes competing_data(std::span<const WorkloadSpec> workloads, const ServerProfile& profile) {
  Bytes total = 0;
  for (const WorkloadSpec& w : workloads) total += competing_contribution(w, profile.llc_size);
  return total;
}

Bytes competing_data_all_files(std::span<const WorkloadSpec> workloads) {
  Bytes total = 0;
  for (const WorkloadSpec& w : workloads) total += w.request_size + w.file_size;
  return total;
}

TdpPrediction predict_tdp(std::span<const WorkloadSpec> workloads, const ServerProfile& profile,
                          TdpRule rule) {
  const Bytes competing =
      rule == TdpRule::CompetingSet ? competing_data(workloads, profile) : competing_data_all_files(workloads);
  TdpPrediction out;
  out.reached = competing >= profile.llc_size;
  out.margin_bytes = static_cast<std::int64_t>(profile.llc_size) - static_cast<std::int64_t>(competing);
  return out;
}

bool criterion_two(std::span<const WorkloadSpec> workloads, const ServerProfile& profile) {
  return static_cast<double>(competing_data(workloads, profile)) <= profile.cache_budget();
}

double cache_in_use(std::span<const WorkloadSpec> workloads, const ServerProfile& profile) {
  return static_cast<double>(competing_data(workloads, profile)) / profile.cache_budget();
}

double calibrate_alpha(double observed_tdp_bytes, const ServerProfile& profile) {
  if (!(observed_tdp_bytes > 0.0) || !std::isfinite(observed_tdp_bytes)) {
    throw Error(Errc::NonPositiveObservation, "observed TDP must be positive");
  }
  if (profile.llc_size == 0) throw Error(Errc::InvalidProfile, "llc_size must be positive");
  return observed_tdp_bytes / static_cast<double>(profile.llc_size);
}

}  // namespace consol
