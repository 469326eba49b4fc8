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

#include "consol/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "consol/error.hpp"
#include "json.hpp"

namespace consol {

using nlohmann::json;

const NamedSequence& ScenarioConfig::sequence(std::string_view name) const {
  for (const NamedSequence& s : sequences) {
    if (s.name == name) return s;
  }
  throw Error(Errc::UnknownSequence, "no sequence named '" + std::string(name) + "'");
}

std::vector<ServerProfile> ScenarioConfig::profiles(std::optional<double> alpha_override) const {
  std::vector<ServerProfile> out;
  out.reserve(servers.size());
  for (const ServerSetup& s : servers) {
    out.push_back(s.profile);
    if (alpha_override) out.back().alpha = *alpha_override;
  }
  return out;
}

// ---- parsing -----------------------------------------------------------------

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(Errc::InvalidConfig, what); }

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> known, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      config_error("unknown key '" + it.key() + "' in " + where);
    }
  }
}

Bytes size_field(const json& value, const std::string& where) {
  if (value.is_number_unsigned()) return value.get<Bytes>();
  if (value.is_number_integer()) {
    const auto v = value.get<long long>();
    if (v < 0) config_error(where + ": negative size");
    return static_cast<Bytes>(v);
  }
  if (value.is_string()) return parse_size(value.get<std::string>());
  config_error(where + ": size must be a byte count or a string like \"32KB\"");
}

double number_field(const json& value, const std::string& where) {
  if (!value.is_number()) config_error(where + " must be a number");
  return value.get<double>();
}

struct WorkloadParser {
  Snapping snapping;
  std::vector<std::string>& warnings;

  WorkloadSpec operator()(const json& entry, std::string default_id) const {
    WorkloadSpec w;
    w.id.value = std::move(default_id);
    w.operation = Operation::Write;
    w.base_runtime = 1.0;
    if (entry.is_array()) {
      if (entry.size() < 2 || entry.size() > 3) config_error(w.id.value + ": expected [rs, fs] or [rs, fs, op]");
      w.request_size = size_field(entry[0], w.id.value + " rs");
      w.file_size = size_field(entry[1], w.id.value + " fs");
      if (entry.size() == 3) w.operation = parse_operation(entry[2].get<std::string>());
    } else if (entry.is_object()) {
      reject_unknown_keys(entry, {"id", "rs", "fs", "op", "runtime"}, "workload " + w.id.value);
      if (entry.contains("id")) w.id.value = entry.at("id").get<std::string>();
      if (!entry.contains("rs") || !entry.contains("fs")) config_error(w.id.value + ": needs rs and fs");
      w.request_size = size_field(entry.at("rs"), w.id.value + " rs");
      w.file_size = size_field(entry.at("fs"), w.id.value + " fs");
      if (entry.contains("op")) w.operation = parse_operation(entry.at("op").get<std::string>());
      if (entry.contains("runtime")) w.base_runtime = number_field(entry.at("runtime"), w.id.value + " runtime");
    } else {
      config_error(w.id.value + ": workload must be an array or object");
    }
    WorkloadSpec resolved = validate_workload(w, snapping);
    if (resolved.request_size != w.request_size || resolved.file_size != w.file_size) {
      warnings.push_back("workload '" + w.id.value + "' (" + format_size(w.request_size) + ", " +
                         format_size(w.file_size) + ") snapped to (" + format_size(resolved.request_size) + ", " +
                         format_size(resolved.file_size) + ")");
    }
    return resolved;
  }
};

ThroughputParams parse_throughput(const json& obj, ThroughputParams base) {
  reject_unknown_keys(obj, {"level1_base", "level2_base", "level3_base", "rs_exponent", "rs_reference"},
                      "throughput");
  if (obj.contains("level1_base")) base.level1_base = number_field(obj.at("level1_base"), "level1_base");
  if (obj.contains("level2_base")) base.level2_base = number_field(obj.at("level2_base"), "level2_base");
  if (obj.contains("level3_base")) base.level3_base = number_field(obj.at("level3_base"), "level3_base");
  if (obj.contains("rs_exponent")) base.rs_exponent = number_field(obj.at("rs_exponent"), "rs_exponent");
  if (obj.contains("rs_reference")) base.rs_reference = size_field(obj.at("rs_reference"), "rs_reference");
  validate_params(base);
  return base;
}

void check_unique_ids(const ScenarioConfig& config) {
  std::set<WorkloadId> initial;
  for (const ServerSetup& s : config.servers) {
    for (const WorkloadSpec& w : s.initial) {
      if (!initial.insert(w.id).second) config_error("duplicate workload id '" + w.id.value + "'");
    }
  }
  std::set<std::string> names;
  for (const NamedSequence& seq : config.sequences) {
    if (!names.insert(seq.name).second) config_error("duplicate sequence name '" + seq.name + "'");
    std::set<WorkloadId> ids = initial;
    for (const WorkloadSpec& w : seq.workloads) {
      if (!ids.insert(w.id).second) {
        config_error("duplicate workload id '" + w.id.value + "' in sequence '" + seq.name + "'");
      }
    }
  }
}

}  // namespace

void regenerate_tables(ScenarioConfig& config) {
  GeneratorParams params = config.generator;
  params.seed = config.options.seed;
  std::map<Bytes, std::shared_ptr<const DegradationTable>> cache;
  for (ServerSetup& s : config.servers) {
    auto& slot = cache[s.profile.llc_size];
    if (!slot) slot = std::make_shared<const DegradationTable>(generate_table(s.profile, params));
    s.profile.degradation_table = slot;
  }
}

ScenarioConfig parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    config_error(std::string("not valid JSON: ") + e.what());
  }
  if (!root.is_object()) config_error("scenario must be a JSON object");
  reject_unknown_keys(root, {"servers", "sequences", "alpha_sweep", "generator", "options"}, "scenario");

  ScenarioConfig config;
  try {
    if (root.contains("options")) {
      const json& o = root.at("options");
      reject_unknown_keys(o, {"snapping", "exhaustive_limit", "seed"}, "options");
      if (o.contains("snapping")) {
        config.options.snapping = o.at("snapping").get<bool>() ? Snapping::Enabled : Snapping::Disabled;
      }
      if (o.contains("exhaustive_limit")) config.options.exhaustive_limit = o.at("exhaustive_limit").get<std::size_t>();
      if (o.contains("seed")) config.options.seed = o.at("seed").get<std::uint64_t>();
    }
    if (root.contains("generator")) {
      const json& g = root.at("generator");
      reject_unknown_keys(g, {"baseline_coefficient", "cache_penalty", "noise_amplitude"}, "generator");
      if (g.contains("baseline_coefficient")) {
        config.generator.baseline_coefficient = number_field(g.at("baseline_coefficient"), "baseline_coefficient");
      }
      if (g.contains("cache_penalty")) config.generator.cache_penalty = number_field(g.at("cache_penalty"), "cache_penalty");
      if (g.contains("noise_amplitude")) {
        config.generator.noise_amplitude = number_field(g.at("noise_amplitude"), "noise_amplitude");
      }
    }
    config.generator.seed = config.options.seed;
    validate_params(config.generator);

    if (root.contains("alpha_sweep")) {
      for (const json& a : root.at("alpha_sweep")) {
        const double alpha = number_field(a, "alpha_sweep entry");
        if (!(alpha >= 1.0)) config_error("alpha values must be >= 1");
        config.alpha_sweep.push_back(alpha);
      }
    }

    const WorkloadParser parse_workload{config.options.snapping, config.warnings};

    if (!root.contains("servers") || !root.at("servers").is_array() || root.at("servers").empty()) {
      config_error("scenario needs a non-empty 'servers' array");
    }
    std::size_t index = 0;
    std::map<Bytes, std::shared_ptr<const DegradationTable>> generated;
    for (const json& s : root.at("servers")) {
      ++index;
      reject_unknown_keys(s,
                          {"id", "preset", "llc_size", "memory", "system_file_cache", "disk_cache", "alpha", "table",
                           "throughput", "initial"},
                          "server " + std::to_string(index));
      ServerSetup setup;
      if (s.contains("preset")) {
        const std::string name = s.at("preset").get<std::string>();
        const auto p = preset(name);
        if (!p) config_error("unknown server preset '" + name + "'");
        setup.profile = *p;
      }
      setup.profile.id = s.contains("id") ? s.at("id").get<std::string>() : "Server" + std::to_string(index);
      if (s.contains("llc_size")) setup.profile.llc_size = size_field(s.at("llc_size"), "llc_size");
      if (s.contains("memory")) setup.profile.memory = size_field(s.at("memory"), "memory");
      if (s.contains("system_file_cache")) {
        setup.profile.system_file_cache = size_field(s.at("system_file_cache"), "system_file_cache");
      }
      if (s.contains("disk_cache")) setup.profile.disk_cache = size_field(s.at("disk_cache"), "disk_cache");
      if (s.contains("alpha")) setup.profile.alpha = number_field(s.at("alpha"), "alpha");
      if (s.contains("throughput")) setup.profile.throughput = parse_throughput(s.at("throughput"), setup.profile.throughput);
      validate_profile(setup.profile);

      if (s.contains("table")) {
        const std::filesystem::path path = base_dir / s.at("table").get<std::string>();
        auto table = std::make_shared<const DegradationTable>(load_table(path));
        if (table->llc_size() != setup.profile.llc_size) {
          config_error("table '" + path.string() + "' was built for a different llc_size than server '" +
                       setup.profile.id + "'");
        }
        setup.profile.degradation_table = std::move(table);
      } else {
        auto& slot = generated[setup.profile.llc_size];
        if (!slot) slot = std::make_shared<const DegradationTable>(generate_table(setup.profile, config.generator));
        setup.profile.degradation_table = slot;
      }

      if (s.contains("initial")) {
        std::size_t k = 0;
        for (const json& w : s.at("initial")) {
          setup.initial.push_back(parse_workload(w, setup.profile.id + ".init" + std::to_string(k++)));
        }
      }
      config.servers.push_back(std::move(setup));
    }

    if (root.contains("sequences")) {
      const json& seqs = root.at("sequences");
      const auto add_sequence = [&](std::string name, const json& list) {
        if (!list.is_array()) config_error("sequence '" + name + "' must be an array");
        NamedSequence seq;
        seq.name = std::move(name);
        std::size_t k = 0;
        for (const json& w : list) seq.workloads.push_back(parse_workload(w, "seq" + seq.name + "." + std::to_string(k++)));
        config.sequences.push_back(std::move(seq));
      };
      if (seqs.is_object()) {
        for (auto it = seqs.begin(); it != seqs.end(); ++it) add_sequence(it.key(), it.value());
      } else if (seqs.is_array()) {
        for (const json& s : seqs) {
          if (!s.is_object() || !s.contains("name") || !s.contains("workloads")) {
            config_error("sequence entries need 'name' and 'workloads'");
          }
          add_sequence(s.at("name").get<std::string>(), s.at("workloads"));
        }
      } else {
        config_error("'sequences' must be an object or an array");
      }
    }
  } catch (const json::exception& e) {
    config_error(std::string("bad field type: ") + e.what());
  }
  check_unique_ids(config);
  return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path.parent_path());
}

ScenarioConfig testbed_scenario(const GeneratorParams& generator) {
  ScenarioConfig config;
  config.generator = generator;
  config.options.seed = generator.seed;
  config.alpha_sweep = {1.0, 1.3, 1.5};

  const auto workload = [](std::string id, Bytes rs, Bytes fs) {
    return WorkloadSpec{{std::move(id)}, rs, fs, Operation::Write, 1.0};
  };
  const auto server = [&](std::string id, ServerProfile profile, std::vector<std::pair<Bytes, Bytes>> init) {
    ServerSetup s;
    s.profile = std::move(profile);
    s.profile.id = std::move(id);
    std::size_t k = 0;
    for (auto [rs, fs] : init) s.initial.push_back(workload(s.profile.id + ".init" + std::to_string(k++), rs, fs));
    return s;
  };
  config.servers.push_back(server("Server1", preset_m1(), {{32 * kKiB, 64 * kKiB}, {4 * kKiB, 16 * kKiB}, {16 * kKiB, 32 * kMiB}}));
  config.servers.push_back(server("Server2", preset_m1(), {{32 * kKiB, 64 * kMiB}, {512 * kKiB, 2 * kMiB}, {128 * kKiB, 512 * kKiB}}));
  config.servers.push_back(server("Server3", preset_m2(), {{256 * kKiB, 1 * kMiB}, {4 * kKiB, 2 * kMiB}, {32 * kKiB, 8 * kMiB}}));
  config.servers.push_back(server("Server4", preset_m2(), {{2 * kKiB, 32 * kKiB}, {512 * kKiB, 64 * kMiB}, {8 * kKiB, 4 * kMiB}}));

  const auto sequence = [&](std::string name, std::vector<std::pair<Bytes, Bytes>> arrivals) {
    NamedSequence seq;
    seq.name = std::move(name);
    std::size_t k = 0;
    for (auto [rs, fs] : arrivals) seq.workloads.push_back(workload("seq" + seq.name + "." + std::to_string(k++), rs, fs));
    return seq;
  };
  config.sequences.push_back(sequence("1", {{16 * kKiB, 64 * kKiB}, {32 * kKiB, 1 * kMiB}, {64 * kKiB, 64 * kMiB},
                                            {32 * kKiB, 2 * kMiB}, {8 * kKiB, 64 * kMiB}}));
  config.sequences.push_back(sequence("2", {{4 * kKiB, 16 * kKiB}, {2 * kKiB, 16 * kMiB}, {2 * kKiB, 8 * kKiB},
                                            {32 * kKiB, 256 * kKiB}, {16 * kKiB, 64 * kMiB}}));
  // The third arrival is listed as 3M, which is off the grid; 4MB is the
  // nearest grid point in log space.
  config.sequences.push_back(sequence("3", {{256 * kKiB, 2 * kMiB}, {8 * kKiB, 4 * kMiB}, {32 * kKiB, 64 * kMiB},
                                            {4 * kKiB, 256 * kMiB}, {8 * kKiB, 32 * kMiB}}));
  config.warnings.push_back("workload 'seq3.1' (8KB, 3MB) snapped to (8KB, 4MB)");
  regenerate_tables(config);
  return config;
}

// ---- running -------------------------------------------------------------------

PlacementState initial_state(const ScenarioConfig& config, std::span<const ServerProfile> profiles) {
  PlacementState state(profiles.size());
  for (std::size_t s = 0; s < config.servers.size(); ++s) {
    for (const WorkloadSpec& w : config.servers[s].initial) state.place(s, w);
    const ServerLoads loads = server_loads(profiles[s], state.resident(s));
    if (!loads.feasible()) {
      std::ostringstream msg;
      msg << "server '" << profiles[s].id << "' starts at cache_in_use " << loads.cache_in_use
          << " and max_degradation " << loads.max_degradation << " under alpha " << profiles[s].alpha;
      throw Error(Errc::InconsistentInitialState, msg.str());
    }
  }
  return state;
}

namespace {

RunReport start_report(std::string_view sequence, std::span<const ServerProfile> profiles, const PlacementState& state,
                       double alpha) {
  RunReport report;
  report.sequence = std::string(sequence);
  report.alpha = alpha;
  for (const ServerProfile& p : profiles) report.server_ids.push_back(p.id);
  report.initial_loads = all_loads(profiles, state);
  return report;
}

void finish_report(RunReport& report, std::span<const ServerProfile> profiles, PlacementState state) {
  report.final_loads = all_loads(profiles, state);
  report.min_throughput.clear();
  double sum = 0.0;
  for (const ServerLoads& l : report.final_loads) {
    report.min_throughput.push_back(min_relative_throughput(l));
    sum += report.min_throughput.back();
  }
  report.average_min_throughput = report.final_loads.empty() ? 1.0 : sum / static_cast<double>(report.final_loads.size());
  report.objective = objective(report.final_loads);
  report.queued = state.queue().size();
  report.final_state = std::move(state);
}

double effective_alpha(std::span<const ServerProfile> profiles, std::optional<double> alpha) {
  if (alpha) return *alpha;
  return profiles.empty() ? 1.0 : profiles.front().alpha;
}

}  // namespace

RunReport run_scenario(const ScenarioConfig& config, std::string_view sequence, std::optional<double> alpha,
                       const AllocatorOptions& options) {
  const NamedSequence& seq = config.sequence(sequence);
  const std::vector<ServerProfile> profiles = config.profiles(alpha);
  for (const ServerProfile& p : profiles) validate_profile(p);
  PlacementState state = initial_state(config, profiles);
  RunReport report = start_report(sequence, profiles, state, effective_alpha(profiles, alpha));
  for (std::size_t k = 0; k < seq.workloads.size(); ++k) {
    AllocationDecision d = greedy_allocate(seq.workloads[k], profiles, state, options);
    report.trace.push_back({k, seq.workloads[k], d.outcome, d.server, std::move(d.snapshot)});
  }
  finish_report(report, profiles, std::move(state));
  return report;
}

PlacementState replay(const ScenarioConfig& config, const RunReport& report) {
  const std::vector<ServerProfile> profiles = config.profiles(report.alpha);
  PlacementState state = initial_state(config, profiles);
  for (const TraceEntry& e : report.trace) {
    if (e.outcome == Outcome::Placed) {
      const auto& queue = state.queue();
      const auto it = std::find_if(queue.begin(), queue.end(), [&](const WorkloadSpec& w) { return w.id == e.workload.id; });
      if (it != queue.end()) state.remove_queued(static_cast<std::size_t>(it - queue.begin()));
      state.place(*e.server, e.workload);
    } else {
      state.enqueue(e.workload);
    }
  }
  return state;
}

OracleComparison compare_with_oracle(const ScenarioConfig& config, std::string_view sequence,
                                     std::optional<double> alpha, const AllocatorOptions& options) {
  const NamedSequence& seq = config.sequence(sequence);
  if (seq.workloads.size() > config.options.exhaustive_limit) {
    throw Error(Errc::SearchSpaceTooLarge, "sequence '" + seq.name + "' has " + std::to_string(seq.workloads.size()) +
                                               " arrivals; the exhaustive-search limit is " +
                                               std::to_string(config.options.exhaustive_limit));
  }
  OracleComparison out;
  out.greedy = run_scenario(config, sequence, alpha, options);

  const std::vector<ServerProfile> profiles = config.profiles(alpha);
  const PlacementState start = initial_state(config, profiles);
  const BruteForceResult best =
      brute_force_allocate(seq.workloads, profiles, start, {config.options.exhaustive_limit});

  PlacementState state = start;
  out.oracle = start_report(sequence, profiles, state, effective_alpha(profiles, alpha));
  for (std::size_t k = 0; k < seq.workloads.size(); ++k) {
    const auto& choice = best.assignment[k];
    if (choice) {
      state.place(*choice, seq.workloads[k]);
    } else {
      state.enqueue(seq.workloads[k]);
    }
    out.oracle.trace.push_back({k, seq.workloads[k], choice ? Outcome::Placed : Outcome::Queued, choice,
                                all_loads(profiles, state)});
  }
  finish_report(out.oracle, profiles, std::move(state));

  out.greedy.oracle_objective = out.oracle.objective;
  out.oracle.oracle_objective = out.oracle.objective;
  constexpr double kEps = 1e-12;
  out.gap = (out.greedy.objective.total - out.oracle.objective.total) / std::max(out.oracle.objective.total, kEps);
  return out;
}

std::vector<RunReport> sweep(const ScenarioConfig& config, std::string_view sequence, std::span<const double> alphas,
                             const AllocatorOptions& options) {
  const std::span<const double> points = alphas.empty() ? std::span<const double>(config.alpha_sweep) : alphas;
  std::vector<RunReport> out;
  out.reserve(points.size());
  for (double a : points) out.push_back(run_scenario(config, sequence, a, options));
  return out;
}

}  // namespace consol
