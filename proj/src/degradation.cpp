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

#include "consol/degradation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "consol/error.hpp"

namespace consol {

double pairwise_degradation(const DegradationTable& table, const WorkloadSpec& culprit,
                            const WorkloadSpec& victim, Snapping snapping) {
  return table.at(grid_point(culprit, snapping), grid_point(victim, snapping));
}

WorkloadDegradation total_degradation(const DegradationTable& table, const WorkloadSpec& victim,
                                      std::span<const WorkloadSpec> co_resident, Snapping snapping) {
  WorkloadDegradation out;
  out.id = victim.id;
  const grid::GridPoint victim_point = grid_point(victim, snapping);
  out.contributions.reserve(co_resident.size());
  for (const WorkloadSpec& other : co_resident) {
    if (other.id == victim.id) {
      throw Error(Errc::SelfDegradation, "workload '" + victim.id.value + "' listed as its own co-resident");
    }
    const double d = table.at(grid_point(other, snapping), victim_point);
    out.contributions.push_back({other.id, d});
    out.raw_sum += d;
  }
  out.clamped = out.raw_sum >= 1.0;
  out.total = std::min(out.raw_sum, kDegradationCap);
  return out;
}

DegradationReport degradation_report(const DegradationTable& table, std::span<const WorkloadSpec> group,
                                     Snapping snapping) {
  std::set<WorkloadId> seen;
  for (const WorkloadSpec& w : group) {
    if (!seen.insert(w.id).second) {
      throw Error(Errc::DuplicateWorkload, "workload '" + w.id.value + "' appears twice in the group");
    }
  }
  DegradationReport report;
  report.workloads.reserve(group.size());
  std::vector<WorkloadSpec> others;
  others.reserve(group.size());
  for (std::size_t j = 0; j < group.size(); ++j) {
    others.clear();
    for (std::size_t i = 0; i < group.size(); ++i) {
      if (i != j) others.push_back(group[i]);
    }
    WorkloadDegradation wd = total_degradation(table, group[j], others, snapping);
    report.max_degradation = std::max(report.max_degradation, wd.total);
    report.any_clamped = report.any_clamped || wd.clamped;
    report.workloads.push_back(std::move(wd));
  }
  return report;
}

CriterionOneResult criterion_one(const DegradationTable& table, std::span<const WorkloadSpec> group,
                                 Snapping snapping) {
  CriterionOneResult out;
  out.report = degradation_report(table, group, snapping);
  out.pass = !out.report.any_clamped &&
             std::all_of(out.report.workloads.begin(), out.report.workloads.end(),
                         [](const WorkloadDegradation& w) { return w.total < kSaturation; });
  return out;
}

double degradation_from_overhead(double overhead, double base_runtime) {
  if (!(base_runtime > 0.0)) throw Error(Errc::NonPositiveRuntime, "base runtime must be positive");
  if (!(overhead >= 0.0)) throw Error(Errc::InvalidParams, "overhead must be non-negative");
  return overhead / (base_runtime + overhead);
}

double overhead_from_degradation(double degradation, double base_runtime) {
  if (!(degradation >= 0.0 && degradation < 1.0)) {
    throw Error(Errc::DegradationOutOfRange, "degradation must lie in [0, 1)");
  }
  if (!(base_runtime > 0.0)) throw Error(Errc::NonPositiveRuntime, "base runtime must be positive");
  return base_runtime * degradation / (1.0 - degradation);
}

namespace {

// Sign of s * (1 - d) - ar, evaluated in double-double so that a degradation
// one ulp below the boundary is not rounded onto it. s = s_hi + s_lo.
bool finishes_before(double ar, double d, double s_hi, double s_lo) {
  const double u_hi = 1.0 - d;
  const double u_lo = (1.0 - u_hi) - d;  // exact remainder of 1 - d
  const double p = s_hi * u_hi;
  const double p_err = std::fma(s_hi, u_hi, -p);
  const double tail = p_err + (s_hi * u_lo + s_lo * u_hi);
  return (p - ar) + tail > 0.0;
}

}  // namespace

MakespanComparison makespan_compare(std::span<const RuntimeDegradation> group) {
  MakespanComparison out;
  double s_lo = 0.0;
  for (const RuntimeDegradation& g : group) {
    const double finish = g.base_runtime + overhead_from_degradation(g.degradation, g.base_runtime);
    out.consolidated = std::max(out.consolidated, finish);
    const double sum = out.sequential + g.base_runtime;
    const double bv = sum - out.sequential;
    s_lo += (out.sequential - (sum - bv)) + (g.base_runtime - bv);
    out.sequential = sum;
  }
  // consolidated < sequential, decided on AR_i / (1 - D_i) < sum(AR) rather
  // than on the rounded finish times.
  out.consolidate_better = !group.empty();
  for (const RuntimeDegradation& g : group) {
    out.consolidate_better =
        out.consolidate_better && finishes_before(g.base_runtime, g.degradation, out.sequential, s_lo);
  }
  return out;
}

}  // namespace consol
