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
#include <map>
#include <memory>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "consol/allocator.hpp"
#include "consol/profile_synth.hpp"
#include "consol/server.hpp"
#include "consol/workload.hpp"

namespace consol::testing {

inline WorkloadSpec wl(std::string id, Bytes rs, Bytes fs, Operation op = Operation::Write) {
  WorkloadSpec w;
  w.id = WorkloadId{std::move(id)};
  w.request_size = rs;
  w.file_size = fs;
  w.operation = op;
  return w;
}

inline WorkloadSpec wl_at(std::string id, grid::GridPoint p) {
  return wl(std::move(id), p.request_size(), p.file_size());
}

// Generated tables are ~400KB each, so share one per (llc, params).
inline std::shared_ptr<const DegradationTable> shared_table(const ServerProfile& profile,
                                                            const GeneratorParams& params = {}) {
  static std::map<std::tuple<Bytes, std::uint64_t, double, double, double>, std::shared_ptr<const DegradationTable>>
      cache;
  const auto key = std::make_tuple(profile.llc_size, params.seed, params.baseline_coefficient, params.cache_penalty,
                                   params.noise_amplitude);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_shared<const DegradationTable>(generate_table(profile, params))).first;
  }
  return it->second;
}

inline ServerProfile with_table(ServerProfile p, const GeneratorParams& params = {}) {
  p.degradation_table = shared_table(p, params);
  return p;
}

// A table where every entry is `value`. Constant tables are trivially
// monotone, which makes hand-built degradation fixtures easy to reason about.
inline std::shared_ptr<const DegradationTable> constant_table(Bytes llc, double value) {
  return std::make_shared<const DegradationTable>(llc, std::vector<double>(grid::kEntryCount, value));
}

// Entry depends only on the culprit: `high` when its file is at least 1MB,
// `low` otherwise. Monotone on every axis.
inline std::shared_ptr<const DegradationTable> culprit_table(Bytes llc, double low, double high) {
  std::vector<double> entries(grid::kEntryCount);
  for (std::size_t c = 0; c < grid::kPointCount; ++c) {
    const double v = grid::GridPoint::from_flat(c).file_size() >= kMiB ? high : low;
    for (std::size_t k = 0; k < grid::kPointCount; ++k) entries[c * grid::kPointCount + k] = v;
  }
  return std::make_shared<const DegradationTable>(llc, std::move(entries));
}

// The two-server worked example. A holds 12KB of competing data in a 40KB
// budget (30%) with max degradation 40%; B holds 40KB of 100KB (40%) at 45%.
// The arriving (1KB, 1KB) workload moves A to (35%, 45%) or B to (42%, 48%).
struct TwoServer {
  std::vector<ServerProfile> servers;
  PlacementState state;
  WorkloadSpec arriving;
};

inline TwoServer two_server_fixture() {
  ServerProfile a;
  a.id = "A";
  a.llc_size = 40 * kKiB;
  a.system_file_cache = kMiB;
  a.disk_cache = kMiB;
  a.degradation_table = culprit_table(a.llc_size, 0.05, 0.40);
  ServerProfile b = a;
  b.id = "B";
  b.llc_size = 100 * kKiB;
  b.degradation_table = culprit_table(b.llc_size, 0.03, 0.45);

  TwoServer t{{a, b}, PlacementState(2), wl("W", kKiB, kKiB)};
  t.state.place(0, wl("a1", 4 * kKiB, kMiB));
  t.state.place(0, wl("a2", 4 * kKiB, 4 * kKiB));
  t.state.place(1, wl("b1", 8 * kKiB, kMiB));
  t.state.place(1, wl("b2", 16 * kKiB, 16 * kKiB));
  return t;
}

struct RandomInstance {
  std::vector<ServerProfile> servers;
  PlacementState initial;
  std::vector<WorkloadSpec> arrivals;
};

// Seeded random scenario: 1..max_servers servers drawn from the two presets
// with alpha in {1.0, 1.3, 1.5}, up to two feasible initial residents per
// server and 1..max_arrivals arrivals on the grid (exactly the maxima when
// `exact`). Tables come from a small pool of generator seeds so instances
// stay cheap.
inline RandomInstance random_instance(std::uint64_t seed, std::size_t max_servers = 4,
                                      std::size_t max_arrivals = 8, bool exact = false) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto random_point = [&] {
    const std::size_t rs = pick(grid::kRsCount);
    const std::size_t fs = rs + pick(grid::kFsCount - rs);
    return grid::GridPoint{rs, fs};
  };

  RandomInstance inst;
  const std::size_t server_count = exact ? max_servers : 1 + pick(max_servers);
  const double alphas[] = {1.0, 1.3, 1.5};
  for (std::size_t s = 0; s < server_count; ++s) {
    ServerProfile p = pick(2) == 0 ? preset_m1() : preset_m2();
    p.id = "S" + std::to_string(s + 1);
    p.alpha = alphas[pick(3)];
    GeneratorParams g;
    g.seed = 1 + pick(3);
    inst.servers.push_back(with_table(p, g));
  }

  inst.initial = PlacementState(server_count);
  std::size_t next_id = 0;
  for (std::size_t s = 0; s < server_count; ++s) {
    const std::size_t want = pick(3);
    for (std::size_t k = 0; k < want; ++k) {
      std::vector<WorkloadSpec> trial(inst.initial.resident(s).begin(), inst.initial.resident(s).end());
      trial.push_back(wl_at("init" + std::to_string(next_id), random_point()));
      if (server_loads(inst.servers[s], trial).feasible()) {
        inst.initial.place(s, trial.back());
        ++next_id;
      }
    }
  }

  const std::size_t arrivals = exact ? max_arrivals : 1 + pick(max_arrivals);
  for (std::size_t a = 0; a < arrivals; ++a) {
    inst.arrivals.push_back(wl_at("w" + std::to_string(a), random_point()));
  }
  return inst;
}

// Greedy over a whole arrival sequence; returns the final state.
inline PlacementState run_greedy(const RandomInstance& inst, const AllocatorOptions& options = {}) {
  PlacementState state = inst.initial;
  for (const WorkloadSpec& w : inst.arrivals) greedy_allocate(w, inst.servers, state, options);
  return state;
}

}  // namespace consol::testing
