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

#include "consol/report_io.hpp"

#include <ostream>

#include "json.hpp"

namespace consol {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json loads_json(const ServerLoads& l) {
  ordered_json j;
  j["cache_in_use"] = l.cache_in_use;
  j["max_degradation"] = l.max_degradation;
  j["avg_load"] = l.avg_load;
  if (l.clamped) j["clamped"] = true;
  return j;
}

ordered_json loads_list(std::span<const ServerLoads> loads) {
  ordered_json arr = ordered_json::array();
  for (const ServerLoads& l : loads) arr.push_back(loads_json(l));
  return arr;
}

ordered_json workload_json(const WorkloadSpec& w) {
  ordered_json j;
  j["id"] = w.id.value;
  j["rs"] = w.request_size;
  j["fs"] = w.file_size;
  j["op"] = to_string(w.operation);
  if (w.base_runtime) j["runtime"] = *w.base_runtime;
  return j;
}

ordered_json report_value(const RunReport& r) {
  ordered_json j;
  j["sequence"] = r.sequence;
  j["alpha"] = r.alpha;
  j["servers"] = r.server_ids;
  j["initial_loads"] = loads_list(r.initial_loads);
  ordered_json trace = ordered_json::array();
  for (const TraceEntry& e : r.trace) {
    ordered_json t;
    t["index"] = e.index;
    t["workload"] = workload_json(e.workload);
    t["outcome"] = to_string(e.outcome);
    t["server"] = e.server ? ordered_json(r.server_ids.at(*e.server)) : ordered_json(nullptr);
    t["loads"] = loads_list(e.loads);
    trace.push_back(std::move(t));
  }
  j["trace"] = std::move(trace);
  j["final_loads"] = loads_list(r.final_loads);
  j["min_throughput"] = r.min_throughput;
  j["average_min_throughput"] = r.average_min_throughput;
  j["objective"] = r.objective.total;
  j["oracle_objective"] = r.oracle_objective ? ordered_json(r.oracle_objective->total) : ordered_json(nullptr);
  j["queued"] = r.queued;
  ordered_json queue = ordered_json::array();
  for (const WorkloadSpec& w : r.final_state.queue()) queue.push_back(w.id.value);
  j["queue"] = std::move(queue);
  return j;
}

}  // namespace

std::string report_json(const RunReport& report, int indent) { return report_value(report).dump(indent); }

std::string comparison_json(const OracleComparison& c, int indent) {
  ordered_json j;
  j["gap"] = c.gap;
  j["greedy"] = report_value(c.greedy);
  j["oracle"] = report_value(c.oracle);
  return j.dump(indent);
}

void write_trace_csv(std::ostream& out, const RunReport& report) {
  out << "index,workload,rs,fs,outcome,server";
  for (const std::string& id : report.server_ids) out << ',' << id << ".cache_in_use," << id << ".max_degradation";
  out << '\n';
  for (const TraceEntry& e : report.trace) {
    out << e.index << ',' << e.workload.id.value << ',' << e.workload.request_size << ',' << e.workload.file_size
        << ',' << to_string(e.outcome) << ',' << (e.server ? report.server_ids.at(*e.server) : std::string());
    for (const ServerLoads& l : e.loads) out << ',' << json(l.cache_in_use).dump() << ',' << json(l.max_degradation).dump();
    out << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const RunReport> reports) {
  out << "sequence,alpha,decisions,placed,queued,average_min_throughput,objective,oracle_objective\n";
  for (const RunReport& r : reports) {
    std::size_t placed = 0;
    for (const TraceEntry& e : r.trace) placed += e.outcome == Outcome::Placed ? 1 : 0;
    out << r.sequence << ',' << json(r.alpha).dump() << ',' << r.trace.size() << ',' << placed << ',' << r.queued << ','
        << json(r.average_min_throughput).dump() << ',' << json(r.objective.total).dump() << ','
        << (r.oracle_objective ? json(r.oracle_objective->total).dump() : std::string()) << '\n';
  }
}

}  // namespace consol
