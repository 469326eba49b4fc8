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
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "consol/server.hpp"
#include "consol/workload.hpp"

namespace consol {

// The two bin dimensions of a server plus their mean.
struct ServerLoads {
  double cache_in_use = 0.0;     // competing data / (alpha * llc_size)
  double max_degradation = 0.0;  // max resident total degradation
  double avg_load = 0.0;
  bool clamped = false;  // some resident's degradation sum hit the cap

  // Both bounds hold: max_degradation < 0.5 and cache_in_use <= 1.
  bool feasible() const;

  friend bool operator==(const ServerLoads&, const ServerLoads&) = default;
};

// Loads of `resident` on `server`; the server must carry a degradation table
// when more than one workload is resident.
ServerLoads server_loads(const ServerProfile& server, std::span<const WorkloadSpec> resident);

// Resident sets per server plus the FIFO queue of workloads waiting for room.
// Single writer; the allocator is the only thing that mutates it.
class PlacementState {
 public:
  PlacementState() = default;
  explicit PlacementState(std::size_t server_count) : servers_(server_count) {}

  std::size_t server_count() const { return servers_.size(); }
  std::span<const WorkloadSpec> resident(std::size_t server) const { return servers_.at(server); }
  const std::deque<WorkloadSpec>& queue() const { return queue_; }

  std::optional<std::size_t> server_of(const WorkloadId& id) const;
  bool is_queued(const WorkloadId& id) const;
  bool contains(const WorkloadId& id) const { return server_of(id).has_value() || is_queued(id); }
  std::size_t resident_count() const;

  // Throws Error(DuplicateWorkload) if the id is already known.
  void place(std::size_t server, WorkloadSpec workload);
  void enqueue(WorkloadSpec workload);

  // Throws Error(UnknownWorkload) unless the id is resident somewhere.
  WorkloadSpec remove_resident(const WorkloadId& id);
  WorkloadSpec remove_queued(std::size_t queue_position);

  friend bool operator==(const PlacementState&, const PlacementState&) = default;

 private:
  std::vector<std::vector<WorkloadSpec>> servers_;
  std::deque<WorkloadSpec> queue_;
};

std::vector<ServerLoads> all_loads(std::span<const ServerProfile> servers, const PlacementState& state);

// Sum over servers of avg_load: the quantity both allocators minimize.
struct ObjectiveValue {
  double total = 0.0;
};

ObjectiveValue objective(std::span<const ServerLoads> loads);
ObjectiveValue objective(std::span<const ServerProfile> servers, const PlacementState& state);

// 1 - max resident degradation; an empty server contributes 1.
double min_relative_throughput(const ServerLoads& loads);

}  // namespace consol
