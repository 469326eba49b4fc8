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

#include "consol/profile_synth.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "consol/contention.hpp"
#include "consol/error.hpp"
#include "consol/simd/kernels.hpp"
#include "consol/workload.hpp"

namespace consol {

namespace {

constexpr std::string_view kMagic = "consol-degradation-table";

double competing_bytes(grid::GridPoint p, Bytes llc_size) {
  WorkloadSpec w;
  w.request_size = p.request_size();
  w.file_size = p.file_size();
  return static_cast<double>(competing_contribution(w, llc_size));
}

}  // namespace

void validate_params(const GeneratorParams& p) {
  if (!(p.baseline_coefficient >= 0.0) || !(p.cache_penalty >= 0.0) || !(p.noise_amplitude >= 0.0)) {
    throw Error(Errc::InvalidParams, "generator coefficients must be non-negative");
  }
  if (p.noise_amplitude > 0.0 && !(p.noise_amplitude < p.baseline_coefficient)) {
    throw Error(Errc::InvalidParams, "noise_amplitude must be below baseline_coefficient");
  }
  if (!(p.baseline_coefficient + p.cache_penalty + p.noise_amplitude < 1.0)) {
    throw Error(Errc::InvalidParams, "baseline + penalty + noise must stay below 1");
  }
}

double grid_position(grid::GridPoint p) {
  return static_cast<double>(p.rs) / static_cast<double>(grid::kRsCount - 1) +
         static_cast<double>(p.fs) / static_cast<double>(grid::kFsCount - 1);
}

double raw_entry(grid::GridPoint culprit, grid::GridPoint victim, Bytes llc_size, const GeneratorParams& params) {
  const double size_term = params.baseline_coefficient * ((grid_position(culprit) + grid_position(victim)) * 0.25);
  const bool overflow =
      competing_bytes(culprit, llc_size) + competing_bytes(victim, llc_size) > static_cast<double>(llc_size);
  return size_term + (overflow ? params.cache_penalty : 0.0);
}

DegradationTable generate_table(const ServerProfile& profile, const GeneratorParams& params) {
  validate_params(params);
  if (profile.llc_size == 0) throw Error(Errc::InvalidProfile, "llc_size must be positive");

  std::array<double, grid::kPointCount> position{};
  std::array<double, grid::kPointCount> competing{};
  for (std::size_t p = 0; p < grid::kPointCount; ++p) {
    position[p] = grid_position(grid::GridPoint::from_flat(p));
    competing[p] = competing_bytes(grid::GridPoint::from_flat(p), profile.llc_size);
  }

  // Portable uniform draw: the top 53 bits of the engine output.
  std::vector<double> noise(grid::kEntryCount);
  std::mt19937_64 engine(params.seed);
  for (double& n : noise) {
    n = static_cast<double>(engine() >> 11) * 0x1.0p-53 * params.noise_amplitude;
  }

  const simd::Kernels& k = simd::active();
  std::vector<double> entries(grid::kEntryCount);
  simd::PairRowArgs row;
  row.victim_position = position.data();
  row.victim_competing = competing.data();
  row.count = grid::kPointCount;
  row.baseline = params.baseline_coefficient;
  row.penalty = params.cache_penalty;
  row.llc_size = static_cast<double>(profile.llc_size);
  for (std::size_t culprit = 0; culprit < grid::kPointCount; ++culprit) {
    row.culprit_position = position[culprit];
    row.culprit_competing = competing[culprit];
    row.noise = noise.data() + culprit * grid::kPointCount;
    k.fill_pair_row(entries.data() + culprit * grid::kPointCount, row);
  }

  // Monotone envelope: a running max along each axis in turn leaves every
  // entry equal to the max over its lower orthant.
  for (const TableAxis& axis : kTableAxes) k.cummax_axis(entries.data(), axis.outer, axis.len, axis.inner);

  return DegradationTable(profile.llc_size, std::move(entries));
}

// ---- file format -------------------------------------------------------------

namespace {

std::string format_fraction(double d) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), d, std::chars_format::fixed);
  std::string s(buf.data(), ptr);
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    s.push_back('.');
    dot = s.size() - 1;
  }
  while (s.size() - dot - 1 < 6) s.push_back('0');
  return s;
}

template <std::size_t N>
std::string join_grid(const std::array<Bytes, N>& values) {
  std::string out;
  for (std::size_t i = 0; i < N; ++i) {
    if (i) out.push_back(';');
    out += std::to_string(values[i]);
  }
  return out;
}

Bytes parse_u64(std::string_view text, Errc code, const std::string& what) {
  Bytes v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(code, "bad " + what + " '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

void save_table(const DegradationTable& table, std::ostream& out) {
  out << '#' << ' ' << kMagic << " llc_size=" << table.llc_size() << " rs_grid=" << join_grid(grid::rs_values())
      << " fs_grid=" << join_grid(grid::fs_values()) << " entries=" << grid::kEntryCount << '\n';
  const auto entries = table.entries();
  std::string line;
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const auto i = grid::GridPoint::from_flat(e / grid::kPointCount);
    const auto j = grid::GridPoint::from_flat(e % grid::kPointCount);
    line.clear();
    line += std::to_string(i.request_size());
    line += ',';
    line += std::to_string(i.file_size());
    line += ',';
    line += std::to_string(j.request_size());
    line += ',';
    line += std::to_string(j.file_size());
    line += ',';
    line += format_fraction(entries[e]);
    line += '\n';
    out << line;
  }
}

void save_table(const DegradationTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot open '" + path.string() + "' for writing");
  save_table(table, out);
  out.flush();
  if (!out) throw Error(Errc::Io, "write to '" + path.string() + "' failed");
}

DegradationTable load_table(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.empty() || header[0] != '#') {
    throw Error(Errc::MalformedTable, "missing header line");
  }
  std::istringstream tokens(header.substr(1));
  std::string token;
  tokens >> token;
  if (token != kMagic) throw Error(Errc::MalformedTable, "header does not name a degradation table");

  std::optional<Bytes> llc_size;
  std::optional<std::string> rs_grid, fs_grid;
  std::optional<Bytes> declared;
  while (tokens >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw Error(Errc::MalformedTable, "bad header field '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "llc_size") {
      llc_size = parse_u64(value, Errc::MalformedTable, "llc_size");
    } else if (key == "rs_grid") {
      rs_grid = value;
    } else if (key == "fs_grid") {
      fs_grid = value;
    } else if (key == "entries") {
      declared = parse_u64(value, Errc::MalformedTable, "entry count");
    } else {
      throw Error(Errc::MalformedTable, "unknown header field '" + key + "'");
    }
  }
  if (!llc_size || !rs_grid || !fs_grid || !declared) {
    throw Error(Errc::MalformedTable, "header needs llc_size, rs_grid, fs_grid and entries");
  }
  if (*rs_grid != join_grid(grid::rs_values()) || *fs_grid != join_grid(grid::fs_values())) {
    throw Error(Errc::GridMismatch, "table grids differ from the 10 x 23 profiling grid");
  }
  if (*declared != grid::kEntryCount) {
    throw Error(Errc::MalformedTable, "header declares " + std::to_string(*declared) + " entries");
  }

  std::vector<double> entries;
  entries.reserve(grid::kEntryCount);
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (entries.size() == grid::kEntryCount) {
      throw Error(Errc::MalformedTable, "more than " + std::to_string(grid::kEntryCount) + " records");
    }
    std::array<std::string_view, 5> fields;
    std::string_view rest(line);
    for (std::size_t f = 0; f < fields.size(); ++f) {
      const auto comma = rest.find(',');
      if ((comma == std::string_view::npos) != (f == fields.size() - 1)) {
        throw Error(Errc::MalformedTable, "line " + std::to_string(line_no) + " needs five fields");
      }
      fields[f] = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    const std::size_t e = entries.size();
    const auto i = grid::GridPoint::from_flat(e / grid::kPointCount);
    const auto j = grid::GridPoint::from_flat(e % grid::kPointCount);
    const std::array<Bytes, 4> expected{i.request_size(), i.file_size(), j.request_size(), j.file_size()};
    for (std::size_t f = 0; f < 4; ++f) {
      if (parse_u64(fields[f], Errc::MalformedTable, "size") != expected[f]) {
        throw Error(Errc::GridMismatch, "line " + std::to_string(line_no) + " key out of grid order");
      }
    }
    double d = 0.0;
    const auto [ptr, ec] = std::from_chars(fields[4].data(), fields[4].data() + fields[4].size(), d);
    if (ec != std::errc() || ptr != fields[4].data() + fields[4].size() || fields[4].empty()) {
      throw Error(Errc::MalformedTable, "line " + std::to_string(line_no) + " has a bad degradation value");
    }
    if (!(d >= 0.0 && d < 1.0)) {
      throw Error(Errc::MalformedTable, "line " + std::to_string(line_no) + " degradation outside [0, 1)");
    }
    entries.push_back(d);
  }
  if (entries.size() != grid::kEntryCount) {
    throw Error(Errc::MalformedTable, "expected " + std::to_string(grid::kEntryCount) + " records, found " +
                                          std::to_string(entries.size()));
  }
  return DegradationTable(*llc_size, std::move(entries));
}

DegradationTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open '" + path.string() + "'");
  return load_table(in);
}

}  // namespace consol
