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
#include <filesystem>
#include <iosfwd>

#include "consol/degradation_table.hpp"
#include "consol/server.hpp"

// Synthetic stand-in for a pairwise profiling campaign. Generated tables have
// the structure the allocator relies on: a contention floor that grows with
// workload size plus a cliff once a pair overflows the LLC. The numbers are
// not measurements; real profiling data goes through load_table instead.
namespace consol {

struct GeneratorParams {
  std::uint64_t seed = 7;
  double baseline_coefficient = 0.06;  // contention floor at the largest pair
  double cache_penalty = 0.28;         // added when the pair overflows the LLC
  double noise_amplitude = 0.005;      // uniform in [0, amplitude)

  friend bool operator==(const GeneratorParams&, const GeneratorParams&) = default;
};

// Throws Error(InvalidParams) unless baseline >= 0, penalty >= 0,
// 0 <= noise < baseline (or noise == 0) and baseline + penalty + noise < 1.
void validate_params(const GeneratorParams& params);

// Position of a grid point in [0, 2]: rs index / 9 + fs index / 22.
double grid_position(grid::GridPoint p);

// Raw entry before the monotone envelope pass, without noise.
double raw_entry(grid::GridPoint culprit, grid::GridPoint victim, Bytes llc_size, const GeneratorParams& params);

// Entry = baseline * (pos_i + pos_j) / 4
//       + penalty when competing(i) + competing(j) > llc_size
//       + seeded noise,
// followed by a running max along each grid axis so the table is monotone.
DegradationTable generate_table(const ServerProfile& profile, const GeneratorParams& params);

// Table file: one '#' header line with llc_size, both grids and the entry
// count, then one "rs_i,fs_i,rs_j,fs_j,d" record per entry in lexicographic
// key order. Sizes are bytes; d is written exactly with at least six decimals.
void save_table(const DegradationTable& table, std::ostream& out);
void save_table(const DegradationTable& table, const std::filesystem::path& path);

// Throws Error(MalformedTable) for bad structure, values or cardinality and
// Error(GridMismatch) for grids or keys that differ from the profiling grid.
DegradationTable load_table(std::istream& in);
DegradationTable load_table(const std::filesystem::path& path);

}  // namespace consol
