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

#include "consol/placement.hpp"

#include <algorithm>
#include <string>

#include "consol/contention.hpp"
#include "consol/degradation.hpp"
#include "consol/error.hpp"

namespace consol {

bool ServerLoads::feasible() const {
  return !clamped && max_degradation < kSaturation && cache_in_use <= 1.0;
}

ServerLoads server_loads(const ServerProfile& server, std::span<const WorkloadSpec> resident) {
  ServerLoads loads;
  loads.cache_in_use = cache_in_use(resident, server);
  if (resident.size() > 1) {
    if (!server.degradation_table) {
      throw Error(Errc::InvalidProfile, "server '" + server.id + "' has no degradation table");
    }
    const DegradationTable& table = *server.degradation_table;
    std::vector<grid::GridPoint> points;
    points.reserve(resident.size());
    for (const WorkloadSpec& w : resident) points.push_back(grid_point(w));
    for (std::size_t j = 0; j < points.size(); ++j) {
      double raw = 0.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (i != j) raw += table.at(points[i], points[j]);
      }
      if (raw >= 1.0) loads.clamped = true;
      loads.max_degradation = std::max(loads.max_degradation, std::min(raw, kDegradationCap));
    }
  }
  loads.avg_load = (loads.cache_in_use + loads.max_degradation) / 2.0;
  return loads;
}

std::optional<std::size_t> PlacementState::server_of(const WorkloadId& id) const {
  for (std::size_t s = 0; s < servers_.size(); ++s) {
    for (const WorkloadSpec& w : servers_[s]) {
      if (w.id == id) return s;
    }
  }
  return std::nullopt;
}

bool PlacementState::is_queued(const WorkloadId& id) const {
  return std::any_of(queue_.begin(), queue_.end(), [&](const WorkloadSpec& w) { return w.id == id; });
}

std::size_t PlacementState::resident_count() const {
  std::size_t n = 0;
  for (const auto& s : servers_) n += s.size();
  return n;
}

void PlacementState::place(std::size_t server, WorkloadSpec workload) {
  if (contains(workload.id)) {
    throw Error(Errc::DuplicateWorkload, "workload '" + workload.id.value + "' is already known");
  }
  servers_.at(server).push_back(std::move(workload));
}

void PlacementState::enqueue(WorkloadSpec workload) {
  if (contains(workload.id)) {
    throw Error(Errc::DuplicateWorkload, "workload '" + workload.id.value + "' is already known");
  }
  queue_.push_back(std::move(workload));
}

WorkloadSpec PlacementState::remove_resident(const WorkloadId& id) {
  for (auto& residents : servers_) {
    auto it = std::find_if(residents.begin(), residents.end(), [&](const WorkloadSpec& w) { return w.id == id; });
    if (it != residents.end()) {
      WorkloadSpec out = std::move(*it);
      residents.erase(it);
      return out;
    }
  }
  throw Error(Errc::UnknownWorkload, "workload '" + id.value + "' is not resident on any server");
}

WorkloadSpec PlacementState::remove_queued(std::size_t queue_position) {
  WorkloadSpec out = std::move(queue_.at(queue_position));
  queue_.erase(queue_.begin() + static_cast<std::ptrdiff_t>(queue_position));
  return out;
}

std::vector<ServerLoads> all_loads(std::span<const ServerProfile> servers, const PlacementState& state) {
  std::vector<ServerLoads> out;
  out.reserve(servers.size());
  for (std::size_t s = 0; s < servers.size(); ++s) out.push_back(server_loads(servers[s], state.resident(s)));
  return out;
}

ObjectiveValue objective(std::span<const ServerLoads> loads) {
  ObjectiveValue v;
  for (const ServerLoads& l : loads) v.total += l.avg_load;
  return v;
}

ObjectiveValue objective(std::span<const ServerProfile> servers, const PlacementState& state) {
  const std::vector<ServerLoads> loads = all_loads(servers, state);
  return objective(loads);
}

double min_relative_throughput(const ServerLoads& loads) { return 1.0 - loads.max_degradation; }

}  // namespace consol
