// Copyright 2026 The fairfleet Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fairfleet/envy_graph.hpp"
#include "fairfleet/fairness.hpp"
#include "fairfleet/model.hpp"

namespace fairfleet {

/// What one algorithm round did, plus the state it left behind. The welfare
/// sequence across a run never decreases, and strictly increases on any
/// round that eliminated cycles.
struct RoundTrace {
  int round = 0;
  std::optional<int> request;  // picked request; nullopt on a retirement round
  int driver = -1;             // assignee, or the retired vehicle
  bool retired = false;        // min-max only: vehicle left the remaining set
  std::vector<std::vector<int>> pre_pick_cycles;  // fallback eliminations (normally empty)
  std::vector<std::vector<int>> cycles;           // eliminated after the assignment
  RequestSet returned;                            // sent back to the pool this round
  Rational welfare;                               // Σ_i p_i(F_ii) after the round
  Assignment bundles_after;                       // snapshot for invariant audits
};

struct AlgorithmResult {
  Assignment assignment;
  std::vector<RoundTrace> rounds;
};

namespace detail {

inline void require_valid(const Instance& inst) {
  if (auto issue = inst.validate()) {
    throw std::invalid_argument("invalid instance: " + issue->message);
  }
}

}  // namespace detail

/// Round bound for the envy-graph algorithm, used purely as a loop guard.
///
/// Welfare values are rationals whose denominators divide L, the lcm of all
/// profit-payload denominators, so every welfare-increasing round adds at
/// least 1/L. With U an upper bound on the final welfare there are at most
/// U*L such rounds, separated by at most m' pick-only rounds each. Returns
/// nullopt (guard disabled) when the bound overflows 64-bit arithmetic.
inline std::optional<Rational> envy_graph_round_cap(const Instance& inst) {
  try {
    const int servable = inst.servable_requests().size();
    Rational upper;
    for (int i = 0; i < inst.vehicle_count(); ++i) {
      upper += inst.value(i, inst.feasible_set(i));
    }
    std::int64_t lcm = 1;
    for (int i = 0; i < inst.vehicle_count(); ++i) {
      for (const Rational& r : inst.profit(i).payload_values()) {
        lcm = checked_lcm(lcm, r.denominator());
      }
    }
    return Rational(servable) + Rational(servable + 1) * upper * Rational(lcm);
  } catch (const std::overflow_error&) {
    return std::nullopt;
  }
}

/// Greedy min-max assignment: repeatedly hand the lowest-profit remaining
/// vehicle its most valuable feasible remaining request, retiring vehicles
/// that cannot serve anything left. Ties break to the lowest index. The
/// result is feasible, complete and FEQ1; the trace holds one entry per
/// pick or retirement, so it has at most m + n rounds.
inline AlgorithmResult feasible_min_max(const Instance& inst) {
  detail::require_valid(inst);
  const int n = inst.vehicle_count();

  AlgorithmResult result;
  result.assignment = Assignment::empty(n);
  std::vector<char> remaining(static_cast<std::size_t>(n), 1);
  RequestSet pool = inst.servable_requests();
  std::vector<Rational> own_value(static_cast<std::size_t>(n));

  int round = 0;
  while (!pool.empty()) {
    int vehicle = -1;
    for (int k = 0; k < n; ++k) {
      if (remaining[static_cast<std::size_t>(k)] &&
          (vehicle < 0 || own_value[static_cast<std::size_t>(k)] <
                              own_value[static_cast<std::size_t>(vehicle)])) {
        vehicle = k;
      }
    }
    if (vehicle < 0) {
      // Unreachable: a vehicle is only retired once it can serve nothing in
      // the pool, and pooled requests stay servable by some vehicle.
      throw std::logic_error("feasible_min_max: pool not empty but no vehicle remains");
    }

    RequestSet& bundle = result.assignment.bundles[static_cast<std::size_t>(vehicle)];
    int picked = -1;
    Rational picked_value;
    for (int j : pool) {
      if (!inst.feasible(vehicle, j)) continue;
      const Rational v = inst.value(vehicle, bundle.with(j));
      if (picked < 0 || v > picked_value) {
        picked = j;
        picked_value = v;
      }
    }

    RoundTrace trace;
    trace.round = round++;
    trace.driver = vehicle;
    if (picked >= 0) {
      bundle.insert(picked);
      own_value[static_cast<std::size_t>(vehicle)] = picked_value;
      pool.erase(picked);
      trace.request = picked;
    } else {
      remaining[static_cast<std::size_t>(vehicle)] = 0;
      trace.retired = true;
    }
    trace.welfare = feasible_welfare(inst, result.assignment);
    trace.bundles_after = result.assignment;
    result.rounds.push_back(std::move(trace));
  }
  return result;
}

/// Envy-graph assignment with feasibility: per round, pick the next pooled
/// request, give it to an unenvied driver of the envy graph projected onto
/// the vehicles feasible for it, eliminate all feasible envy cycles, and
/// return any request a rotation left with an infeasible vehicle. The result
/// is feasible, complete and FEF1.
///
/// `request_order` fixes the pick order (a permutation of all requests);
/// default is ascending index. Requests returned to the pool are re-picked
/// in the same order.
inline AlgorithmResult feasible_envy_graph(
    const Instance& inst,
    const std::optional<std::vector<int>>& request_order = std::nullopt) {
  detail::require_valid(inst);
  const int n = inst.vehicle_count();
  const int m = inst.request_count();

  std::vector<int> order;
  if (request_order) {
    order = *request_order;
    std::vector<char> seen(static_cast<std::size_t>(m), 0);
    if (static_cast<int>(order.size()) != m) {
      throw std::invalid_argument("request order must be a permutation of all requests");
    }
    for (int j : order) {
      if (j < 0 || j >= m || seen[static_cast<std::size_t>(j)]) {
        throw std::invalid_argument("request order must be a permutation of all requests");
      }
      seen[static_cast<std::size_t>(j)] = 1;
    }
  } else {
    order.resize(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
  }

  AlgorithmResult result;
  result.assignment = Assignment::empty(n);
  std::vector<char> pooled(static_cast<std::size_t>(m), 0);
  int pool_count = 0;
  for (int j : inst.servable_requests()) {
    pooled[static_cast<std::size_t>(j)] = 1;
    ++pool_count;
  }

  const std::optional<Rational> cap = envy_graph_round_cap(inst);
  int round = 0;
  while (pool_count > 0) {
    if (cap && Rational(round) > *cap) {
      throw std::logic_error("feasible_envy_graph: round cap exceeded (internal error)");
    }

    int request = -1;
    for (int j : order) {
      if (pooled[static_cast<std::size_t>(j)]) {
        request = j;
        break;
      }
    }

    RoundTrace trace;
    trace.round = round++;

    EnvyGraph graph = build_envy_graph(inst, result.assignment);
    EnvyGraphProjection proj = project_graph(graph, inst, request);
    std::optional<int> driver = try_find_unenvied(proj);
    if (!driver) {
      // Residual cycles can hide every projected vertex behind an envy
      // edge; an acyclic full graph always leaves the projection a source.
      auto elimination = eliminate_feasible_cycles(inst, result.assignment);
      result.assignment = std::move(elimination.assignment);
      trace.pre_pick_cycles = std::move(elimination.cycles);
      graph = build_envy_graph(inst, result.assignment);
      proj = project_graph(graph, inst, request);
      driver = try_find_unenvied(proj);
      if (!driver) {
        throw std::logic_error("feasible_envy_graph: no unenvied driver after elimination");
      }
    }

    result.assignment.bundles[static_cast<std::size_t>(*driver)].insert(request);
    pooled[static_cast<std::size_t>(request)] = 0;
    --pool_count;
    trace.request = request;
    trace.driver = *driver;

    auto elimination = eliminate_feasible_cycles(inst, result.assignment);
    result.assignment = std::move(elimination.assignment);
    trace.cycles = std::move(elimination.cycles);

    auto stripped = return_non_feasible(inst, result.assignment);
    result.assignment = std::move(stripped.assignment);
    trace.returned = stripped.returned;
    for (int j : trace.returned) {
      pooled[static_cast<std::size_t>(j)] = 1;
      ++pool_count;
    }

    trace.welfare = feasible_welfare(inst, result.assignment);
    trace.bundles_after = result.assignment;
    result.rounds.push_back(std::move(trace));
  }
  return result;
}

}  // namespace fairfleet
