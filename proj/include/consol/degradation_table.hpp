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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "consol/grid.hpp"
#include "consol/units.hpp"

namespace consol {

// Block shape of each axis inside the flat (rs_i, fs_i, rs_j, fs_j) layout,
// in the [outer][len][inner] form the SIMD kernels take.
struct TableAxis {
  std::size_t outer, len, inner;
};

inline constexpr std::array<TableAxis, 4> kTableAxes{{
    {1, grid::kRsCount, grid::kFsCount * grid::kPointCount},
    {grid::kRsCount, grid::kFsCount, grid::kPointCount},
    {grid::kPointCount, grid::kRsCount, grid::kFsCount},
    {grid::kPointCount * grid::kRsCount, grid::kFsCount, 1},
}};

// Result of scanning raw entries against the table invariants.
struct TableCheck {
  std::size_t entry_count = 0;
  std::size_t out_of_range = 0;
  // Descents along rs_i, fs_i, rs_j, fs_j.
  std::array<std::size_t, 4> descents{};

  bool ok() const;
};

TableCheck check_entries(std::span<const double> entries);

// Pairwise D(i, j) lookup over the 230 x 230 grid. Immutable once built;
// construction rejects tables that are the wrong size, leave [0, 1) or dip
// along an axis.
class DegradationTable {
 public:
  // Throws Error(MalformedTable) when any invariant fails.
  DegradationTable(Bytes llc_size, std::vector<double> entries);

  Bytes llc_size() const { return llc_size_; }

  // Degradation inflicted by the workload at `culprit` on the one at `victim`.
  double at(grid::GridPoint culprit, grid::GridPoint victim) const {
    return entries_[grid::entry_index(culprit, victim)];
  }

  std::span<const double> entries() const { return entries_; }

  friend bool operator==(const DegradationTable&, const DegradationTable&) = default;

 private:
  Bytes llc_size_;
  std::vector<double> entries_;
};

}  // namespace consol
