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

// consolidate: command-line front end for table generation, scenario runs,
// alpha sweeps and greedy-versus-exhaustive comparisons.
//
// Exit status: 0 on success, 1 on invalid input, 2 on infeasible or
// oversized requests. Diagnostics go to stderr; data goes to files, or to
// stdout when the output path is "-".

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "consol/error.hpp"
#include "consol/profile_synth.hpp"
#include "consol/report_io.hpp"
#include "consol/scenario.hpp"
#include "json.hpp"

namespace {

using consol::Errc;
using consol::Error;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::SearchSpaceTooLarge:
    case Errc::InconsistentInitialState:
      return 2;
    default:
      return 1;
  }
}

// Opens the destination before any work starts so an unwritable path fails
// fast. "-" means stdout.
class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw Error(Errc::Io, "cannot open '" + path + "' for writing");
  }

  std::ostream& stream() { return file_ ? *file_ : std::cout; }

  void close() {
    stream().flush();
    if (!stream()) throw Error(Errc::Io, "write to '" + path_ + "' failed");
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

struct ConfigFlags {
  std::string path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> limit;
  bool no_snap = false;
};

consol::ScenarioConfig load_config(const ConfigFlags& flags) {
  std::ifstream in(flags.path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open '" + flags.path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::InvalidConfig, std::string("not valid JSON: ") + e.what());
  }
  if (root.is_object()) {
    if (flags.seed) root["options"]["seed"] = *flags.seed;
    if (flags.limit) root["options"]["exhaustive_limit"] = *flags.limit;
    if (flags.no_snap) root["options"]["snapping"] = false;
  }
  consol::ScenarioConfig config =
      consol::parse_scenario(root.dump(), std::filesystem::path(flags.path).parent_path());
  for (const std::string& w : config.warnings) std::cerr << "warning: " << w << '\n';
  return config;
}

consol::AllocatorOptions allocator_options(const std::string& rule) {
  consol::AllocatorOptions options;
  options.rule = rule == "own" ? consol::SelectionRule::OwnAverage : consol::SelectionRule::GlobalSum;
  return options;
}

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--config", flags.path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "Seed for generated degradation tables");
  cmd->add_flag("--no-snap", flags.no_snap, "Reject off-grid sizes instead of snapping them");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cache-contention-aware workload consolidation"};
  app.require_subcommand(1, 1);

  // generate-profile
  std::string gen_server = "M1";
  std::string gen_out;
  consol::GeneratorParams gen_params;
  auto* gen = app.add_subcommand("generate-profile", "Write a synthetic degradation table");
  gen->add_option("--server", gen_server, "Server preset (M1 or M2)")->check(CLI::IsMember({"M1", "M2", "m1", "m2"}));
  gen->add_option("--seed", gen_params.seed, "Noise seed");
  gen->add_option("--baseline", gen_params.baseline_coefficient, "Contention floor coefficient");
  gen->add_option("--penalty", gen_params.cache_penalty, "LLC overflow penalty");
  gen->add_option("--noise", gen_params.noise_amplitude, "Noise amplitude");
  gen->add_option("--out", gen_out, "Table file, or - for stdout")->required();

  // run
  ConfigFlags run_flags;
  std::string run_sequence, run_out, run_trace, run_summary, run_rule = "global";
  std::optional<double> run_alpha;
  auto* run = app.add_subcommand("run", "Replay one arrival sequence through the greedy allocator");
  add_config_flags(run, run_flags);
  run->add_option("--sequence", run_sequence, "Sequence name")->required();
  run->add_option("--alpha", run_alpha, "Override alpha on every server")->check(CLI::Range(1.0, 1e9));
  run->add_option("--rule", run_rule, "Server selection: global (sum of averages) or own")
      ->check(CLI::IsMember({"global", "own"}));
  run->add_option("--out", run_out, "Report JSON, or - for stdout")->required();
  run->add_option("--trace-csv", run_trace, "Per-decision CSV");
  run->add_option("--summary-csv", run_summary, "One-row summary CSV");

  // sweep
  ConfigFlags sweep_flags;
  std::vector<std::string> sweep_sequences;
  std::vector<double> sweep_alphas;
  std::string sweep_out, sweep_dir, sweep_rule = "global";
  auto* sweep = app.add_subcommand("sweep", "Run sequences over a list of alpha values");
  add_config_flags(sweep, sweep_flags);
  sweep->add_option("--sequence", sweep_sequences, "Sequence names (default: all)");
  sweep->add_option("--alpha", sweep_alphas, "Alpha values (default: the config's alpha_sweep)")
      ->check(CLI::Range(1.0, 1e9));
  sweep->add_option("--rule", sweep_rule, "Server selection rule")->check(CLI::IsMember({"global", "own"}));
  sweep->add_option("--out", sweep_out, "Summary CSV, or - for stdout")->required();
  sweep->add_option("--report-dir", sweep_dir, "Directory for per-run report JSON files");

  // compare
  ConfigFlags cmp_flags;
  std::string cmp_sequence, cmp_out, cmp_rule = "global";
  std::optional<double> cmp_alpha;
  auto* cmp = app.add_subcommand("compare", "Compare the greedy allocator with exhaustive search");
  add_config_flags(cmp, cmp_flags);
  cmp->add_option("--sequence", cmp_sequence, "Sequence name")->required();
  cmp->add_option("--alpha", cmp_alpha, "Override alpha on every server")->check(CLI::Range(1.0, 1e9));
  cmp->add_option("--limit", cmp_flags.limit, "Exhaustive-search limit on arrivals");
  cmp->add_option("--rule", cmp_rule, "Server selection rule")->check(CLI::IsMember({"global", "own"}));
  cmp->add_option("--out", cmp_out, "Comparison JSON, or - for stdout")->required();

  // validate
  std::string val_config, val_table;
  auto* val = app.add_subcommand("validate", "Check a scenario file and/or a table file");
  val->add_option("--config", val_config, "Scenario JSON file");
  val->add_option("--table", val_table, "Degradation table file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      Output out(gen_out);
      const auto profile = consol::preset(gen_server);
      const consol::DegradationTable table = consol::generate_table(*profile, gen_params);
      consol::save_table(table, out.stream());
      out.close();
      return 0;
    }

    if (*run) {
      Output out(run_out);
      std::optional<Output> trace, summary;
      if (!run_trace.empty()) trace.emplace(run_trace);
      if (!run_summary.empty()) summary.emplace(run_summary);
      const consol::ScenarioConfig config = load_config(run_flags);
      const consol::RunReport report =
          consol::run_scenario(config, run_sequence, run_alpha, allocator_options(run_rule));
      out.stream() << consol::report_json(report) << '\n';
      out.close();
      if (trace) {
        consol::write_trace_csv(trace->stream(), report);
        trace->close();
      }
      if (summary) {
        consol::write_summary_csv(summary->stream(), std::span(&report, 1));
        summary->close();
      }
      return 0;
    }

    if (*sweep) {
      Output out(sweep_out);
      if (!sweep_dir.empty()) std::filesystem::create_directories(sweep_dir);
      const consol::ScenarioConfig config = load_config(sweep_flags);
      std::vector<std::string> names = sweep_sequences;
      if (names.empty()) {
        for (const auto& s : config.sequences) names.push_back(s.name);
      }
      std::vector<consol::RunReport> reports;
      for (const std::string& name : names) {
        auto batch = consol::sweep(config, name, sweep_alphas, allocator_options(sweep_rule));
        for (auto& r : batch) reports.push_back(std::move(r));
      }
      if (!sweep_dir.empty()) {
        for (const consol::RunReport& r : reports) {
          std::ostringstream name;
          name << "report_seq" << r.sequence << "_alpha" << r.alpha << ".json";
          Output file((std::filesystem::path(sweep_dir) / name.str()).string());
          file.stream() << consol::report_json(r) << '\n';
          file.close();
        }
      }
      consol::write_summary_csv(out.stream(), reports);
      out.close();
      return 0;
    }

    if (*cmp) {
      Output out(cmp_out);
      const consol::ScenarioConfig config = load_config(cmp_flags);
      const consol::OracleComparison c =
          consol::compare_with_oracle(config, cmp_sequence, cmp_alpha, allocator_options(cmp_rule));
      out.stream() << consol::comparison_json(c) << '\n';
      out.close();
      std::cerr << "greedy objective " << c.greedy.objective.total << ", oracle " << c.oracle.objective.total
                << ", gap " << c.gap << '\n';
      return 0;
    }

    if (*val) {
      if (val_config.empty() && val_table.empty()) {
        std::cerr << "validate: give --config and/or --table\n";
        return 1;
      }
      if (!val_table.empty()) {
        const consol::DegradationTable table = consol::load_table(std::filesystem::path(val_table));
        std::cerr << val_table << ": ok (" << table.entries().size() << " entries, llc_size " << table.llc_size()
                  << ")\n";
      }
      if (!val_config.empty()) {
        const consol::ScenarioConfig config = load_config(ConfigFlags{val_config, {}, {}, false});
        std::vector<std::optional<double>> alphas{std::nullopt};
        for (double a : config.alpha_sweep) alphas.emplace_back(a);
        for (const auto& a : alphas) {
          const auto profiles = config.profiles(a);
          consol::initial_state(config, profiles);
        }
        std::cerr << val_config << ": ok (" << config.servers.size() << " servers, " << config.sequences.size()
                  << " sequences)\n";
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
