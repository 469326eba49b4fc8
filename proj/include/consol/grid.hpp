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
#include <optional>

#include "consol/units.hpp"

// The profiling grid: 10 request sizes and 23 file sizes, both doubling from
// 1KB. The profiling campaign quotes file sizes as "1KB-1GB", but 23 doubling
// steps from 1KB end at 4GB; the point count (and so the 52,900-entry table)
// is kept and the top of the file axis moves. Every degradation table is
// indexed by ordered pairs of grid points.
namespace consol::grid {

inline constexpr std::size_t kRsCount = 10;
inline constexpr std::size_t kFsCount = 23;
inline constexpr std::size_t kPointCount = kRsCount * kFsCount;    // 230
inline constexpr std::size_t kEntryCount = kPointCount * kPointCount;  // 52,900

constexpr Bytes rs_at(std::size_t index) { return kKiB << index; }
constexpr Bytes fs_at(std::size_t index) { return kKiB << index; }

constexpr std::array<Bytes, kRsCount> rs_values() {
  std::array<Bytes, kRsCount> out{};
  for (std::size_t i = 0; i < kRsCount; ++i) out[i] = rs_at(i);
  return out;
}

constexpr std::array<Bytes, kFsCount> fs_values() {
  std::array<Bytes, kFsCount> out{};
  for (std::size_t i = 0; i < kFsCount; ++i) out[i] = fs_at(i);
  return out;
}

struct GridPoint {
  std::size_t rs = 0;
  std::size_t fs = 0;

  constexpr std::size_t flat() const { return rs * kFsCount + fs; }
  constexpr Bytes request_size() const { return rs_at(rs); }
  constexpr Bytes file_size() const { return fs_at(fs); }

  static constexpr GridPoint from_flat(std::size_t flat) {
    return GridPoint{flat / kFsCount, flat % kFsCount};
  }

  friend constexpr bool operator==(const GridPoint&, const GridPoint&) = default;
};

// Entries are laid out row-major over (rs_i, fs_i, rs_j, fs_j), which is also
// the lexicographic order of the table file.
constexpr std::size_t entry_index(GridPoint i, GridPoint j) {
  return i.flat() * kPointCount + j.flat();
}

std::optional<std::size_t> rs_index(Bytes value);
std::optional<std::size_t> fs_index(Bytes value);

// Nearest grid index in log2 space, clamped to the grid ends.
std::size_t snap_rs_index(Bytes value);
std::size_t snap_fs_index(Bytes value);

}  // namespace consol::grid
