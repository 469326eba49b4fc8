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

#include <set>
#include <vector>

#include "consol/degradation_table.hpp"
#include "consol/grid.hpp"
#include "consol/placement.hpp"
#include "consol/server.hpp"
#include "consol/units.hpp"
#include "consol/workload.hpp"
#include "doctest.h"
#include "support/check.hpp"
#include "support/fixtures.hpp"

using namespace consol;
using consol::testing::wl;

TEST_CASE("grid has 10 request sizes and 23 file sizes, doubling from 1KB") {
  // 23 doublings from 1KB run to 4GB, past the quoted 1GB upper end; the
  // count is what the table layout depends on.
  const auto rs = grid::rs_values();
  const auto fs = grid::fs_values();
  REQUIRE(rs.size() == 10);
  REQUIRE(fs.size() == 23);
  CHECK(rs.front() == 1024);
  CHECK(rs.back() == 512 * kKiB);
  CHECK(fs[20] == kGiB);
  CHECK(fs.back() == 4 * kGiB);
  for (std::size_t i = 1; i < rs.size(); ++i) CHECK(rs[i] == 2 * rs[i - 1]);
  for (std::size_t i = 1; i < fs.size(); ++i) CHECK(fs[i] == 2 * fs[i - 1]);
  CHECK(grid::kPointCount == 230);
  CHECK(grid::kEntryCount == 52900);
}

TEST_CASE("entry index follows lexicographic key order") {
  std::size_t expected = 0;
  for (std::size_t ri = 0; ri < grid::kRsCount; ++ri)
    for (std::size_t fi = 0; fi < grid::kFsCount; ++fi)
      for (std::size_t rj = 0; rj < grid::kRsCount; ++rj)
        for (std::size_t fj = 0; fj < grid::kFsCount; ++fj) {
          REQUIRE(grid::entry_index({ri, fi}, {rj, fj}) == expected);
          ++expected;
        }
  CHECK(expected == grid::kEntryCount);
}

TEST_CASE("grid lookups and log-space snapping") {
  CHECK(grid::rs_index(32 * kKiB) == std::optional<std::size_t>(5));
  CHECK_FALSE(grid::rs_index(3 * kKiB).has_value());
  CHECK_FALSE(grid::rs_index(kMiB).has_value());  // above the request grid
  CHECK(grid::fs_index(kGiB) == std::optional<std::size_t>(20));
  CHECK(grid::fs_index(4 * kGiB) == std::optional<std::size_t>(22));
  CHECK(grid::snap_fs_index(3 * kMiB) == grid::fs_index(4 * kMiB));
  CHECK(grid::snap_fs_index(1280 * kKiB) == grid::fs_index(kMiB));
  CHECK(grid::snap_rs_index(1) == 0);
  CHECK(grid::snap_rs_index(8 * kMiB) == grid::kRsCount - 1);
  CHECK(grid::snap_fs_index(64 * kGiB) == grid::kFsCount - 1);
  // Snapping is idempotent on grid values.
  for (std::size_t i = 0; i < grid::kFsCount; ++i) CHECK(grid::snap_fs_index(grid::fs_at(i)) == i);
}

TEST_CASE("sizes parse and format in binary units") {
  CHECK(parse_size("32KB") == 32 * kKiB);
  CHECK(parse_size("1M") == kMiB);
  CHECK(parse_size("3M") == 3 * kMiB);
  CHECK(parse_size("1GB") == kGiB);
  CHECK(parse_size("4096") == 4096);
  CHECK(parse_size("1.5MB") == 1536 * kKiB);
  CHECK_ERRC(parse_size("abc"), Errc::InvalidConfig);
  CHECK_ERRC(parse_size("12XB"), Errc::InvalidConfig);
  CHECK(format_size(32 * kKiB) == "32KB");
  CHECK(format_size(kGiB) == "1GB");
  CHECK(format_size(1280 * kKiB) == "1280KB");
  CHECK(format_size(1000) == "1000");
}

TEST_CASE("validate accepts grid workloads and rejects bad ones") {
  const ServerProfile m1 = preset_m1();
  const WorkloadSpec ok = wl("a", 64 * kKiB, 64 * kMiB, Operation::Read);
  CHECK(validate(ok, m1) == ok);

  CHECK_ERRC(validate(wl("z", 0, kKiB), m1), Errc::NonPositiveSize);
  CHECK_ERRC(validate(wl("z", kKiB, 0), m1), Errc::NonPositiveSize);
  CHECK_ERRC(validate(wl("big", 2 * kMiB, kMiB), m1), Errc::RequestLargerThanFile);
  CHECK_ERRC(validate(wl("off", 3 * kKiB, kMiB), m1), Errc::OffGridValue);

  WorkloadSpec slow = ok;
  slow.base_runtime = 0.0;
  CHECK_ERRC(validate(slow, m1), Errc::NonPositiveRuntime);

  ServerProfile broken = m1;
  broken.alpha = 0.9;
  CHECK_ERRC(validate(ok, broken), Errc::InvalidProfile);
}

TEST_CASE("snapping moves off-grid sizes to the nearest grid point") {
  const WorkloadSpec off = wl("s", 3 * kKiB, 3 * kMiB);
  const WorkloadSpec snapped = validate_workload(off, Snapping::Enabled);
  CHECK(snapped.request_size == 4 * kKiB);
  CHECK(snapped.file_size == 4 * kMiB);
  CHECK(on_grid(snapped));
  CHECK_FALSE(on_grid(off));
  CHECK(grid_point(off, Snapping::Enabled) == grid::GridPoint{2, 12});
  CHECK_ERRC(grid_point(off), Errc::OffGridValue);
}

TEST_CASE("operations round-trip through text") {
  CHECK(parse_operation("read") == Operation::Read);
  CHECK(parse_operation("write") == Operation::Write);
  CHECK(std::string(to_string(Operation::Read)) == "read");
  CHECK_ERRC(parse_operation("append"), Errc::InvalidConfig);
}

TEST_CASE("server presets encode the two testbed machines") {
  const ServerProfile m1 = preset_m1();
  CHECK(m1.llc_size == 6 * kMiB);
  CHECK(m1.memory == 8 * kGiB);
  CHECK(m1.system_file_cache == 980 * kMiB);
  CHECK(m1.disk_cache == 12 * kMiB);
  CHECK(m1.buffer_capacity() == 992 * kMiB);

  const ServerProfile m2 = preset_m2();
  CHECK(m2.llc_size == 6 * kMiB);
  CHECK(m2.memory == 3 * kGiB);
  CHECK(m2.system_file_cache == 455 * kMiB);
  CHECK(m2.disk_cache == 8 * kMiB);
  CHECK(m2.buffer_capacity() == 463 * kMiB);

  CHECK(preset("M1")->id == m1.id);
  CHECK(preset("m2")->llc_size == m2.llc_size);
  CHECK_FALSE(preset("M3").has_value());
  CHECK(m1.cache_budget() == doctest::Approx(1.3 * 6 * kMiB));
}

TEST_CASE("profile validation") {
  ServerProfile p = preset_m1();
  CHECK_NOTHROW(validate_profile(p));
  p.alpha = 1.0;
  CHECK_NOTHROW(validate_profile(p));
  p.alpha = 0.99;
  CHECK_ERRC(validate_profile(p), Errc::InvalidProfile);
  p = preset_m1();
  p.disk_cache = 0;
  CHECK_ERRC(validate_profile(p), Errc::InvalidProfile);
  p = preset_m1();
  p.llc_size = 0;
  CHECK_ERRC(validate_profile(p), Errc::InvalidProfile);
}

TEST_CASE("degradation table enforces its invariants") {
  std::vector<double> flat(grid::kEntryCount, 0.1);
  CHECK_NOTHROW(DegradationTable(6 * kMiB, flat));

  CHECK_ERRC(DegradationTable(6 * kMiB, std::vector<double>(grid::kEntryCount - 1, 0.1)), Errc::MalformedTable);

  auto bad = flat;
  bad[123] = 1.0;
  CHECK_ERRC(DegradationTable(6 * kMiB, bad), Errc::MalformedTable);
  bad[123] = -0.01;
  CHECK_ERRC(DegradationTable(6 * kMiB, bad), Errc::MalformedTable);

  // A dip along each axis in turn.
  const grid::GridPoint hi{5, 10}, lo_rs{4, 10}, lo_fs{5, 9};
  for (int axis = 0; axis < 4; ++axis) {
    auto dip = flat;
    const grid::GridPoint c = axis == 0 ? lo_rs : axis == 1 ? lo_fs : hi;
    const grid::GridPoint v = axis == 2 ? lo_rs : axis == 3 ? lo_fs : hi;
    // Raise the lower neighbour above the upper one.
    dip[grid::entry_index(c, v)] = 0.2;
    CAPTURE(axis);
    CHECK_ERRC(DegradationTable(6 * kMiB, dip), Errc::MalformedTable);
  }

  std::vector<double> ramp(grid::kEntryCount);
  for (std::size_t e = 0; e < ramp.size(); ++e) ramp[e] = 0.5 * static_cast<double>(e) / grid::kEntryCount;
  const DegradationTable t(6 * kMiB, ramp);
  CHECK(t.at({0, 0}, {0, 1}) == ramp[1]);
  CHECK(t.at({0, 1}, {0, 0}) == ramp[grid::kPointCount]);  // ordered pairs, no symmetry
  CHECK(check_entries(t.entries()).ok());
}

TEST_CASE("placement state keeps every workload in exactly one place") {
  PlacementState s(2);
  s.place(0, wl("a", kKiB, kKiB));
  s.place(1, wl("b", kKiB, kKiB));
  s.enqueue(wl("c", kKiB, kKiB));
  CHECK(s.server_of(WorkloadId{"a"}) == std::optional<std::size_t>(0));
  CHECK(s.is_queued(WorkloadId{"c"}));
  CHECK_FALSE(s.server_of(WorkloadId{"c"}).has_value());
  CHECK(s.resident_count() == 2);

  CHECK_ERRC(s.place(1, wl("a", kKiB, kKiB)), Errc::DuplicateWorkload);
  CHECK_ERRC(s.place(1, wl("c", kKiB, kKiB)), Errc::DuplicateWorkload);
  CHECK_ERRC(s.enqueue(wl("b", kKiB, kKiB)), Errc::DuplicateWorkload);
  CHECK_ERRC(s.remove_resident(WorkloadId{"c"}), Errc::UnknownWorkload);

  const WorkloadSpec a = s.remove_resident(WorkloadId{"a"});
  CHECK(a.id.value == "a");
  CHECK_FALSE(s.contains(WorkloadId{"a"}));
  const WorkloadSpec c = s.remove_queued(0);
  CHECK(c.id.value == "c");
  CHECK(s.queue().empty());
}

TEST_CASE("server loads: empty, single and the worked example bin") {
  ServerProfile p = preset_m1();
  p.alpha = 1.0;
  const ServerLoads empty = server_loads(p, {});
  CHECK(empty.cache_in_use == 0.0);
  CHECK(empty.max_degradation == 0.0);
  CHECK(empty.avg_load == 0.0);
  CHECK(empty.feasible());

  // One resident needs no table and never degrades.
  const std::vector<WorkloadSpec> solo{wl("a", 64 * kKiB, kMiB)};
  const ServerLoads one = server_loads(p, solo);
  CHECK(one.max_degradation == 0.0);
  CHECK(one.cache_in_use == doctest::Approx(static_cast<double>(64 * kKiB + kMiB) / (6 * kMiB)));

  const std::vector<WorkloadSpec> pair{wl("a", kKiB, kKiB), wl("b", kKiB, kKiB)};
  CHECK_ERRC(server_loads(p, pair), Errc::InvalidProfile);
}

TEST_CASE("feasibility admits the cache boundary and rejects the degradation boundary") {
  CHECK(ServerLoads{1.0, 0.49, 0.745, false}.feasible());
  CHECK_FALSE(ServerLoads{1.0000001, 0.1, 0.55, false}.feasible());
  CHECK_FALSE(ServerLoads{0.2, 0.5, 0.35, false}.feasible());
  CHECK_FALSE(ServerLoads{0.2, 0.3, 0.25, true}.feasible());
}

TEST_CASE("objective sums average loads; empty servers give full throughput") {
  const std::vector<ServerLoads> loads{{0.3, 0.4, 0.35, false}, {0.0, 0.0, 0.0, false}, {0.5, 0.2, 0.35, false}};
  CHECK(objective(loads).total == doctest::Approx(0.70));
  CHECK(min_relative_throughput(loads[0]) == doctest::Approx(0.6));
  CHECK(min_relative_throughput(loads[1]) == 1.0);
}
