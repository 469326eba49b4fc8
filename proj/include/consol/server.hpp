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

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "consol/throughput.hpp"
#include "consol/units.hpp"

namespace consol {

class DegradationTable;

struct ServerProfile {
  std::string id;
  Bytes llc_size = 0;
  Bytes memory = 0;  // informational only
  Bytes system_file_cache = 0;
  Bytes disk_cache = 0;
  double alpha = 1.0;
  std::shared_ptr<const DegradationTable> degradation_table;
  ThroughputParams throughput;

  // System file cache plus disk cache: where writes start hitting the disk.
  Bytes buffer_capacity() const { return system_file_cache + disk_cache; }

  // alpha * llc_size, the denominator of cache_in_use.
  double cache_budget() const { return alpha * static_cast<double>(llc_size); }
};

void validate_profile(const ServerProfile& profile);

// The two testbed machines. Presets carry alpha = 1.3 and no degradation table.
ServerProfile preset_m1();
ServerProfile preset_m2();
std::optional<ServerProfile> preset(std::string_view name);

}  // namespace consol
