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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "consol/allocator.hpp"
#include "consol/profile_synth.hpp"

namespace consol {

struct ScenarioOptions {
  Snapping snapping = Snapping::Enabled;
  std::size_t exhaustive_limit = 12;
  std::uint64_t seed = 7;  // the only entropy source; feeds table generation
};

struct ServerSetup {
  ServerProfile profile;
  std::vector<WorkloadSpec> initial;
};

struct NamedSequence {
  std::string name;
  std::vector<WorkloadSpec> workloads;
};

// Initial server loads plus named arrival sequences. Workloads are stored
// already resolved to the grid.
struct ScenarioConfig {
  std::vector<ServerSetup> servers;
  std::vector<NamedSequence> sequences;
  std::vector<double> alpha_sweep;
  ScenarioOptions options;
  GeneratorParams generator;
  std::vector<std::string> warnings;  // e.g. snapped sizes

  const NamedSequence& sequence(std::string_view name) const;
  std::vector<ServerProfile> profiles(std::optional<double> alpha_override = std::nullopt) const;
};

// JSON scenario files. Table paths are resolved against base_dir. Servers
// without a table get one generated from `generator` and `options.seed`.
ScenarioConfig parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);

// Four-server testbed (2 x M1, 2 x M2) with three arrival sequences and the
// alpha values 1.0, 1.3 and 1.5. Workloads default to writes with a 1 s
// solo runtime.
ScenarioConfig testbed_scenario(const GeneratorParams& generator = {});

// Re-attaches generated tables after the generator params or seed changed.
void regenerate_tables(ScenarioConfig& config);

// Builds the initial placement and checks both bin bounds on every server.
// Throws Error(InconsistentInitialState) otherwise.
PlacementState initial_state(const ScenarioConfig& config, std::span<const ServerProfile> profiles);

struct TraceEntry {
  std::size_t index = 0;  // position in the arrival sequence
  WorkloadSpec workload;
  Outcome outcome = Outcome::Queued;
  std::optional<std::size_t> server;
  std::vector<ServerLoads> loads;  // every server after the commit
};

struct RunReport {
  std::string sequence;
  double alpha = 1.0;
  std::vector<std::string> server_ids;
  std::vector<ServerLoads> initial_loads;
  std::vector<TraceEntry> trace;
  std::vector<ServerLoads> final_loads;
  std::vector<double> min_throughput;  // per server, 1 - max degradation
  double average_min_throughput = 1.0;
  ObjectiveValue objective;
  std::optional<ObjectiveValue> oracle_objective;
  std::size_t queued = 0;
  PlacementState final_state;
};

// Feeds the named sequence through the greedy allocator with every server's
// alpha set to `alpha` (or left at the profile value when absent).
// Throws Error(UnknownSequence) and Error(InconsistentInitialState).
RunReport run_scenario(const ScenarioConfig& config, std::string_view sequence, std::optional<double> alpha,
                       const AllocatorOptions& options = {});

// Re-applies the trace of `report` to the initial state.
PlacementState replay(const ScenarioConfig& config, const RunReport& report);

struct OracleComparison {
  RunReport greedy;
  RunReport oracle;
  double gap = 0.0;  // (greedy - oracle) / max(oracle, eps)
};

OracleComparison compare_with_oracle(const ScenarioConfig& config, std::string_view sequence,
                                     std::optional<double> alpha, const AllocatorOptions& options = {});

// One run per alpha in `alphas` (or the config's sweep list when empty).
std::vector<RunReport> sweep(const ScenarioConfig& config, std::string_view sequence,
                             std::span<const double> alphas = {}, const AllocatorOptions& options = {});

}  // namespace consol
