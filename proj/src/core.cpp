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

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <string>

#include "consol/error.hpp"
#include "consol/grid.hpp"
#include "consol/server.hpp"
#include "consol/units.hpp"
#include "consol/workload.hpp"

namespace consol {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonPositiveSize: return "NonPositiveSize";
    case Errc::RequestLargerThanFile: return "RequestLargerThanFile";
    case Errc::OffGridValue: return "OffGridValue";
    case Errc::InvalidProfile: return "InvalidProfile";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::NonPositiveRuntime: return "NonPositiveRuntime";
    case Errc::NonPositiveObservation: return "NonPositiveObservation";
    case Errc::DegradationOutOfRange: return "DegradationOutOfRange";
    case Errc::SelfDegradation: return "SelfDegradation";
    case Errc::DuplicateWorkload: return "DuplicateWorkload";
    case Errc::UnknownWorkload: return "UnknownWorkload";
    case Errc::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case Errc::MalformedTable: return "MalformedTable";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::InconsistentInitialState: return "InconsistentInitialState";
    case Errc::UnknownSequence: return "UnknownSequence";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

// ---- sizes ---------------------------------------------------------------

Bytes parse_size(std::string_view text) {
  const auto fail = [&] { throw Error(Errc::InvalidConfig, "bad size '" + std::string(text) + "'"); };
  std::size_t pos = 0;
  while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) {
    ++pos;
  }
  if (pos == 0) fail();
  double number = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + pos, number);
  if (ec != std::errc() || ptr != text.data() + pos) fail();

  std::string suffix;
  for (char c : text.substr(pos)) {
    if (!std::isspace(static_cast<unsigned char>(c))) suffix.push_back(static_cast<char>(std::toupper(c)));
  }
  Bytes unit = 1;
  if (suffix.empty() || suffix == "B") {
    unit = 1;
  } else if (suffix == "K" || suffix == "KB" || suffix == "KIB") {
    unit = kKiB;
  } else if (suffix == "M" || suffix == "MB" || suffix == "MIB") {
    unit = kMiB;
  } else if (suffix == "G" || suffix == "GB" || suffix == "GIB") {
    unit = kGiB;
  } else {
    fail();
  }
  const double bytes = number * static_cast<double>(unit);
  if (bytes != std::floor(bytes) || bytes > 9.0e15) fail();
  return static_cast<Bytes>(bytes);
}

std::string format_size(Bytes value) {
  if (value != 0) {
    if (value % kGiB == 0) return std::to_string(value / kGiB) + "GB";
    if (value % kMiB == 0) return std::to_string(value / kMiB) + "MB";
    if (value % kKiB == 0) return std::to_string(value / kKiB) + "KB";
  }
  return std::to_string(value);
}

// ---- grid ----------------------------------------------------------------

namespace grid {
namespace {

std::optional<std::size_t> exact_index(Bytes value, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    if ((kKiB << i) == value) return i;
  }
  return std::nullopt;
}

std::size_t snap_index(Bytes value, std::size_t count) {
  if (value <= kKiB) return 0;
  const double steps = std::log2(static_cast<double>(value) / static_cast<double>(kKiB));
  const auto rounded = static_cast<long long>(std::llround(steps));
  return static_cast<std::size_t>(std::clamp<long long>(rounded, 0, static_cast<long long>(count) - 1));
}

}  // namespace

std::optional<std::size_t> rs_index(Bytes value) { return exact_index(value, kRsCount); }
std::optional<std::size_t> fs_index(Bytes value) { return exact_index(value, kFsCount); }
std::size_t snap_rs_index(Bytes value) { return snap_index(value, kRsCount); }
std::size_t snap_fs_index(Bytes value) { return snap_index(value, kFsCount); }

}  // namespace grid

// ---- workloads -------------------------------------------------------------

const char* to_string(Operation op) noexcept { return op == Operation::Read ? "read" : "write"; }

Operation parse_operation(std::string_view text) {
  std::string lower;
  for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "read" || lower == "r") return Operation::Read;
  if (lower == "write" || lower == "w") return Operation::Write;
  throw Error(Errc::InvalidConfig, "unknown operation '" + std::string(text) + "'");
}

bool on_grid(const WorkloadSpec& spec) {
  return grid::rs_index(spec.request_size).has_value() && grid::fs_index(spec.file_size).has_value();
}

grid::GridPoint grid_point(const WorkloadSpec& spec, Snapping snapping) {
  if (snapping == Snapping::Enabled) {
    return {grid::snap_rs_index(spec.request_size), grid::snap_fs_index(spec.file_size)};
  }
  const auto rs = grid::rs_index(spec.request_size);
  const auto fs = grid::fs_index(spec.file_size);
  if (!rs || !fs) {
    throw Error(Errc::OffGridValue, "workload '" + spec.id.value + "' (" + format_size(spec.request_size) +
                                        ", " + format_size(spec.file_size) + ") is not on the profiling grid");
  }
  return {*rs, *fs};
}

WorkloadSpec validate_workload(const WorkloadSpec& spec, Snapping snapping) {
  if (spec.request_size < 1 || spec.file_size < 1) {
    throw Error(Errc::NonPositiveSize, "workload '" + spec.id.value + "' has a zero size");
  }
  if (spec.request_size > spec.file_size) {
    throw Error(Errc::RequestLargerThanFile, "workload '" + spec.id.value + "' request size " +
                                                 format_size(spec.request_size) + " exceeds file size " +
                                                 format_size(spec.file_size));
  }
  if (spec.base_runtime && !(*spec.base_runtime > 0.0)) {
    throw Error(Errc::NonPositiveRuntime, "workload '" + spec.id.value + "' base runtime must be positive");
  }
  const grid::GridPoint point = grid_point(spec, snapping);
  WorkloadSpec out = spec;
  out.request_size = point.request_size();
  out.file_size = point.file_size();
  if (out.request_size > out.file_size) {
    throw Error(Errc::RequestLargerThanFile, "workload '" + spec.id.value + "' snaps to rs > fs");
  }
  return out;
}

WorkloadSpec validate(const WorkloadSpec& spec, const ServerProfile& profile, Snapping snapping) {
  validate_profile(profile);
  return validate_workload(spec, snapping);
}

// ---- servers ---------------------------------------------------------------

void validate_profile(const ServerProfile& profile) {
  if (profile.llc_size == 0 || profile.system_file_cache == 0 || profile.disk_cache == 0) {
    throw Error(Errc::InvalidProfile, "server '" + profile.id + "' needs positive cache sizes");
  }
  if (!(profile.alpha >= 1.0) || !std::isfinite(profile.alpha)) {
    throw Error(Errc::InvalidProfile, "server '" + profile.id + "' alpha must be >= 1");
  }
}

ServerProfile preset_m1() {
  ServerProfile p;
  p.id = "M1";
  p.llc_size = 6 * kMiB;
  p.memory = 8 * kGiB;
  p.system_file_cache = 980 * kMiB;
  p.disk_cache = 12 * kMiB;
  p.alpha = 1.3;
  return p;
}

ServerProfile preset_m2() {
  ServerProfile p;
  p.id = "M2";
  p.llc_size = 6 * kMiB;
  p.memory = 3 * kGiB;
  p.system_file_cache = 455 * kMiB;
  p.disk_cache = 8 * kMiB;
  p.alpha = 1.3;
  return p;
}

std::optional<ServerProfile> preset(std::string_view name) {
  if (name == "M1" || name == "m1") return preset_m1();
  if (name == "M2" || name == "m2") return preset_m2();
  return std::nullopt;
}

}  // namespace consol
