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

#include "consol/allocator.hpp"

#include <string>

#include "consol/error.hpp"

namespace consol {

namespace {

void check_shape(std::span<const ServerProfile> servers, const PlacementState& state) {
  if (servers.size() != state.server_count()) {
    throw Error(Errc::InvalidConfig, "placement state tracks " + std::to_string(state.server_count()) +
                                         " servers but " + std::to_string(servers.size()) + " were given");
  }
}

std::vector<CandidateLoads> evaluate_candidates(const WorkloadSpec& workload,
                                                std::span<const ServerProfile> servers,
                                                const PlacementState& state) {
  std::vector<CandidateLoads> out;
  out.reserve(servers.size());
  std::vector<WorkloadSpec> hypothetical;
  for (std::size_t s = 0; s < servers.size(); ++s) {
    const auto resident = state.resident(s);
    hypothetical.assign(resident.begin(), resident.end());
    hypothetical.push_back(workload);
    out.push_back({server_loads(servers[s], resident), server_loads(servers[s], hypothetical)});
  }
  return out;
}

std::optional<std::size_t> choose_server(const WorkloadSpec& workload, std::span<const ServerProfile> servers,
                                         const PlacementState& state, const AllocatorOptions& options) {
  const std::vector<CandidateLoads> candidates = evaluate_candidates(workload, servers, state);
  return select_server(candidates, options.rule);
}

}  // namespace

std::optional<std::size_t> select_server(std::span<const CandidateLoads> candidates, SelectionRule rule) {
  std::optional<std::size_t> best;
  // Minimizing the global sum is the same as minimizing this server's
  // marginal increase, since every other server keeps its "before" load.
  double best_score = rule == SelectionRule::OwnAverage ? 1.0 : 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const CandidateLoads& c = candidates[i];
    if (!c.after.feasible()) continue;
    if (rule == SelectionRule::OwnAverage) {
      if (c.after.avg_load < best_score) {
        best_score = c.after.avg_load;
        best = i;
      }
    } else {
      const double marginal = c.after.avg_load - c.before.avg_load;
      if (!best || marginal < best_score) {
        best_score = marginal;
        best = i;
      }
    }
  }
  return best;
}

double global_sum_if_placed(std::span<const CandidateLoads> candidates, std::size_t chosen) {
  double total = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    total += i == chosen ? candidates[i].after.avg_load : candidates[i].before.avg_load;
  }
  return total;
}

const char* to_string(Outcome outcome) noexcept { return outcome == Outcome::Placed ? "placed" : "queued"; }

AllocationDecision greedy_allocate(const WorkloadSpec& workload, std::span<const ServerProfile> servers,
                                   PlacementState& state, const AllocatorOptions& options) {
  check_shape(servers, state);
  if (state.contains(workload.id)) {
    throw Error(Errc::DuplicateWorkload, "workload '" + workload.id.value + "' is already resident or queued");
  }
  AllocationDecision decision;
  decision.workload = workload.id;
  decision.server = choose_server(workload, servers, state, options);
  if (decision.server) {
    decision.outcome = Outcome::Placed;
    state.place(*decision.server, workload);
  } else {
    decision.outcome = Outcome::Queued;
    state.enqueue(workload);
  }
  decision.snapshot = all_loads(servers, state);
  return decision;
}

std::vector<AllocationDecision> release(const WorkloadId& id, std::span<const ServerProfile> servers,
                                        PlacementState& state, const AllocatorOptions& options) {
  check_shape(servers, state);
  state.remove_resident(id);
  std::vector<AllocationDecision> decisions;
  bool placed_any = true;
  while (placed_any) {
    placed_any = false;
    std::size_t pos = 0;
    while (pos < state.queue().size()) {
      const WorkloadSpec& head = state.queue()[pos];
      const std::optional<std::size_t> server = choose_server(head, servers, state, options);
      if (!server) {
        ++pos;
        continue;
      }
      WorkloadSpec workload = state.remove_queued(pos);
      AllocationDecision decision;
      decision.workload = workload.id;
      decision.outcome = Outcome::Placed;
      decision.server = server;
      state.place(*server, std::move(workload));
      decision.snapshot = all_loads(servers, state);
      decisions.push_back(std::move(decision));
      placed_any = true;
    }
  }
  return decisions;
}

// ---- exhaustive oracle -----------------------------------------------------

namespace {

class ExhaustiveSearch {
 public:
  ExhaustiveSearch(std::span<const WorkloadSpec> sequence, std::span<const ServerProfile> servers,
                   const PlacementState& initial)
      : sequence_(sequence), servers_(servers), choice_(sequence.size()) {
    residents_.resize(servers.size());
    for (std::size_t s = 0; s < servers.size(); ++s) {
      const auto r = initial.resident(s);
      residents_[s].assign(r.begin(), r.end());
      loads_.push_back(server_loads(servers[s], residents_[s]));
    }
  }

  void run() { visit(0, 0); }

  bool found() const { return found_; }
  const std::vector<std::optional<std::size_t>>& best() const { return best_choice_; }
  std::size_t best_queued() const { return best_queued_; }
  double best_objective() const { return best_objective_; }
  std::size_t nodes() const { return nodes_; }

 private:
  double current_objective() const {
    double total = 0.0;
    for (const ServerLoads& l : loads_) total += l.avg_load;
    return total;
  }

  // Loads only grow as workloads are added, so the partial (queued,
  // objective) pair bounds every completion of this prefix from below.
  bool dominated(std::size_t queued) const {
    if (!found_) return false;
    if (queued != best_queued_) return queued > best_queued_;
    return current_objective() > best_objective_;
  }

  void visit(std::size_t depth, std::size_t queued) {
    ++nodes_;
    if (dominated(queued)) return;
    if (depth == sequence_.size()) {
      const double obj = current_objective();
      if (!found_ || queued < best_queued_ || (queued == best_queued_ && obj < best_objective_)) {
        found_ = true;
        best_queued_ = queued;
        best_objective_ = obj;
        best_choice_ = choice_;
      }
      return;
    }
    for (std::size_t s = 0; s < servers_.size(); ++s) {
      residents_[s].push_back(sequence_[depth]);
      const ServerLoads saved = loads_[s];
      loads_[s] = server_loads(servers_[s], residents_[s]);
      if (loads_[s].feasible()) {
        choice_[depth] = s;
        visit(depth + 1, queued);
      }
      loads_[s] = saved;
      residents_[s].pop_back();
    }
    choice_[depth] = std::nullopt;
    visit(depth + 1, queued + 1);
  }

  std::span<const WorkloadSpec> sequence_;
  std::span<const ServerProfile> servers_;
  std::vector<std::vector<WorkloadSpec>> residents_;
  std::vector<ServerLoads> loads_;
  std::vector<std::optional<std::size_t>> choice_;

  bool found_ = false;
  std::vector<std::optional<std::size_t>> best_choice_;
  std::size_t best_queued_ = 0;
  double best_objective_ = 0.0;
  std::size_t nodes_ = 0;
};

}  // namespace

BruteForceResult brute_force_allocate(std::span<const WorkloadSpec> sequence,
                                      std::span<const ServerProfile> servers, const PlacementState& initial,
                                      const BruteForceOptions& options) {
  check_shape(servers, initial);
  if (sequence.size() > options.exhaustive_limit) {
    throw Error(Errc::SearchSpaceTooLarge, std::to_string(sequence.size()) +
                                               " arrivals exceed the exhaustive-search limit of " +
                                               std::to_string(options.exhaustive_limit));
  }
  for (const WorkloadSpec& w : sequence) {
    if (initial.contains(w.id)) {
      throw Error(Errc::DuplicateWorkload, "workload '" + w.id.value + "' is already resident or queued");
    }
  }
  ExhaustiveSearch search(sequence, servers, initial);
  search.run();

  // Queueing everything is always valid, so a best vector always exists.
  BruteForceResult result;
  result.assignment = search.best();
  result.queued = search.best_queued();
  result.nodes_visited = search.nodes();
  result.final_state = initial;
  for (std::size_t k = 0; k < sequence.size(); ++k) {
    if (result.assignment[k]) {
      result.final_state.place(*result.assignment[k], sequence[k]);
    } else {
      result.final_state.enqueue(sequence[k]);
    }
  }
  result.objective = objective(servers, result.final_state);
  return result;
}

}  // namespace consol
