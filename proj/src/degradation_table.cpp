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

#include "consol/degradation_table.hpp"

#include <string>

#include "consol/error.hpp"
#include "consol/simd/kernels.hpp"

namespace consol {

bool TableCheck::ok() const {
  if (entry_count != grid::kEntryCount || out_of_range != 0) return false;
  for (std::size_t d : descents) {
    if (d != 0) return false;
  }
  return true;
}

TableCheck check_entries(std::span<const double> entries) {
  TableCheck check;
  check.entry_count = entries.size();
  if (entries.size() != grid::kEntryCount) return check;
  const simd::Kernels& k = simd::active();
  check.out_of_range = k.count_outside(entries.data(), entries.size(), 0.0, 1.0);
  for (std::size_t axis = 0; axis < kTableAxes.size(); ++axis) {
    const TableAxis& s = kTableAxes[axis];
    check.descents[axis] = k.count_descents(entries.data(), s.outer, s.len, s.inner);
  }
  return check;
}

DegradationTable::DegradationTable(Bytes llc_size, std::vector<double> entries)
    : llc_size_(llc_size), entries_(std::move(entries)) {
  if (llc_size_ == 0) throw Error(Errc::MalformedTable, "llc_size must be positive");
  const TableCheck check = check_entries(entries_);
  if (check.entry_count != grid::kEntryCount) {
    throw Error(Errc::MalformedTable, "expected " + std::to_string(grid::kEntryCount) + " entries, got " +
                                          std::to_string(check.entry_count));
  }
  if (check.out_of_range != 0) {
    throw Error(Errc::MalformedTable,
                std::to_string(check.out_of_range) + " entries fall outside [0, 1)");
  }
  static constexpr const char* kAxisNames[] = {"rs_i", "fs_i", "rs_j", "fs_j"};
  for (std::size_t axis = 0; axis < 4; ++axis) {
    if (check.descents[axis] != 0) {
      throw Error(Errc::MalformedTable, "entries decrease along " + std::string(kAxisNames[axis]) + " (" +
                                            std::to_string(check.descents[axis]) + " places)");
    }
  }
}

}  // namespace consol
