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

#include <compare>
#include <optional>
#include <string>

#include "consol/grid.hpp"
#include "consol/units.hpp"

namespace consol {

struct ServerProfile;

struct WorkloadId {
  std::string value;

  friend auto operator<=>(const WorkloadId&, const WorkloadId&) = default;
};

enum class Operation { Read, Write };

const char* to_string(Operation op) noexcept;
Operation parse_operation(std::string_view text);

// One data-intensive workload, characterized by its request size (RS) and
// file size (FS). base_runtime is the solo running time in seconds.
struct WorkloadSpec {
  WorkloadId id;
  Bytes request_size = 0;
  Bytes file_size = 0;
  Operation operation = Operation::Write;
  std::optional<double> base_runtime;

  friend bool operator==(const WorkloadSpec&, const WorkloadSpec&) = default;
};

enum class Snapping { Disabled, Enabled };

// Checks size and runtime invariants and the server profile. With snapping
// enabled the returned spec has (rs, fs) moved to the nearest grid point in
// log space; otherwise off-grid sizes are an error.
WorkloadSpec validate(const WorkloadSpec& spec, const ServerProfile& profile,
                      Snapping snapping = Snapping::Disabled);

// Same checks without a server in the picture.
WorkloadSpec validate_workload(const WorkloadSpec& spec, Snapping snapping = Snapping::Disabled);

bool on_grid(const WorkloadSpec& spec);

// Throws Error(OffGridValue) for off-grid sizes when snapping is disabled.
grid::GridPoint grid_point(const WorkloadSpec& spec, Snapping snapping = Snapping::Disabled);

}  // namespace consol
