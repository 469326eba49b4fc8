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
#include <optional>
#include <span>
#include <vector>

#include "consol/placement.hpp"

namespace consol {

enum class SelectionRule {
  // Minimize the sum of every server's average load after placement.
  GlobalSum,
  // Pick the server whose own post-placement average is lowest. This is the
  // literal reading of the pseudocode's "Avg_i < minimum" line; it disagrees
  // with the worked two-server example and is kept only for comparison.
  OwnAverage,
};

struct AllocatorOptions {
  SelectionRule rule = SelectionRule::GlobalSum;
};

struct CandidateLoads {
  ServerLoads before;
  ServerLoads after;  // with the arriving workload added
};

// Decision core of the greedy step: returns the chosen server index, or
// nothing when every candidate breaks a bin bound. Ties go to the lowest index.
std::optional<std::size_t> select_server(std::span<const CandidateLoads> candidates, SelectionRule rule);

// Sum of all servers' avg_load if the workload went to `chosen`.
double global_sum_if_placed(std::span<const CandidateLoads> candidates, std::size_t chosen);

enum class Outcome { Placed, Queued };

const char* to_string(Outcome outcome) noexcept;

struct AllocationDecision {
  WorkloadId workload;
  Outcome outcome = Outcome::Queued;
  std::optional<std::size_t> server;
  std::vector<ServerLoads> snapshot;  // every server, after the decision
};

// Places one arriving workload or appends it to the queue.
// Throws Error(DuplicateWorkload) if the id is already resident or queued.
AllocationDecision greedy_allocate(const WorkloadSpec& workload, std::span<const ServerProfile> servers,
                                   PlacementState& state, const AllocatorOptions& options = {});

// Removes a finished workload, then retries the queue in FIFO order, pass
// after pass, until a pass places nothing. Returns the placements made.
// Throws Error(UnknownWorkload) unless the id is resident.
std::vector<AllocationDecision> release(const WorkloadId& id, std::span<const ServerProfile> servers,
                                        PlacementState& state, const AllocatorOptions& options = {});

struct BruteForceOptions {
  std::size_t exhaustive_limit = 12;
};

struct BruteForceResult {
  // Per arriving workload: chosen server, or nothing when left queued.
  std::vector<std::optional<std::size_t>> assignment;
  std::size_t queued = 0;
  ObjectiveValue objective;
  PlacementState final_state;
  std::size_t nodes_visited = 0;
};

// Exhaustive search over {servers, queued}^n, applying arrivals in order and
// rejecting any vector that commits an infeasible state. The best vector has
// the fewest queued workloads, then the lowest objective; remaining ties go to
// the lexicographically smallest vector (servers by index, queued last).
// Throws Error(SearchSpaceTooLarge) above the exhaustive limit.
BruteForceResult brute_force_allocate(std::span<const WorkloadSpec> sequence,
                                      std::span<const ServerProfile> servers, const PlacementState& initial,
                                      const BruteForceOptions& options = {});

}  // namespace consol
