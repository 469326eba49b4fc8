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

#include <span>
#include <vector>

#include "consol/degradation_table.hpp"
#include "consol/workload.hpp"

namespace consol {

// A workload is saturated once its degradation reaches 50%: its running time
// has at least doubled.
inline constexpr double kSaturation = 0.5;

// Upper bound for a summed degradation. Raw sums can reach 1, which no finite
// overhead produces, so they are capped here and flagged.
inline constexpr double kDegradationCap = 0.999;

// Table lookup of D(culprit, victim). D(i, j) and D(j, i) are independent.
double pairwise_degradation(const DegradationTable& table, const WorkloadSpec& culprit,
                            const WorkloadSpec& victim, Snapping snapping = Snapping::Disabled);

struct Contribution {
  WorkloadId from;
  double value = 0.0;
};

struct WorkloadDegradation {
  WorkloadId id;
  double total = 0.0;    // capped at kDegradationCap
  double raw_sum = 0.0;  // uncapped sum of contributions
  bool clamped = false;
  std::vector<Contribution> contributions;
};

// Additive model: the degradation of `victim` is the sum of D(i, victim) over
// its co-residents. Throws Error(SelfDegradation) if victim is among them.
WorkloadDegradation total_degradation(const DegradationTable& table, const WorkloadSpec& victim,
                                      std::span<const WorkloadSpec> co_resident,
                                      Snapping snapping = Snapping::Disabled);

struct DegradationReport {
  std::vector<WorkloadDegradation> workloads;
  double max_degradation = 0.0;
  bool any_clamped = false;
};

// Per-workload totals for every member of a co-located group.
DegradationReport degradation_report(const DegradationTable& table, std::span<const WorkloadSpec> group,
                                     Snapping snapping = Snapping::Disabled);

struct CriterionOneResult {
  bool pass = false;
  DegradationReport report;
};

// Passes iff every member (the newcomer included) stays strictly below 50%.
// A capped sum always fails.
CriterionOneResult criterion_one(const DegradationTable& table, std::span<const WorkloadSpec> group,
                                 Snapping snapping = Snapping::Disabled);

// D = O / (AR + O).
double degradation_from_overhead(double overhead, double base_runtime);

// O = AR * D / (1 - D), the inverse of the above.
double overhead_from_degradation(double degradation, double base_runtime);

struct RuntimeDegradation {
  double base_runtime = 1.0;
  double degradation = 0.0;
};

struct MakespanComparison {
  double consolidated = 0.0;  // max(AR_i + O_i)
  double sequential = 0.0;    // sum(AR_i)
  bool consolidate_better = false;
};

MakespanComparison makespan_compare(std::span<const RuntimeDegradation> group);

}  // namespace consol
