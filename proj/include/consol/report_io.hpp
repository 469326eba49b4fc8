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

#include <iosfwd>
#include <span>
#include <string>

#include "consol/scenario.hpp"

namespace consol {

std::string report_json(const RunReport& report, int indent = 2);
std::string comparison_json(const OracleComparison& comparison, int indent = 2);

// One row per decision: index, workload, rs, fs, outcome, server, then
// cache_in_use and max_degradation for every server after the commit.
void write_trace_csv(std::ostream& out, const RunReport& report);

// One row per (sequence, alpha) run, for plotting.
void write_summary_csv(std::ostream& out, std::span<const RunReport> reports);

}  // namespace consol
