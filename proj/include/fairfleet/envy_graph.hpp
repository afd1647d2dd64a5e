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

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fairfleet/fairness.hpp"
#include "fairfleet/model.hpp"

namespace fairfleet {

/// Directed feasible-envy relation over vehicles: edge (i, k) present iff
/// p_i(F_ii) < p_i(F_ik). A cache of the current assignment's envy state;
/// rebuild after any bundle change.
struct EnvyGraph {
  int vehicle_count = 0;
  std::vector<std::vector<int>> out;  // ascending adjacency per vehicle

  bool has_edge(int i, int k) const {
    const auto& targets = out[static_cast<std::size_t>(i)];
    return std::binary_search(targets.begin(), targets.end(), k);
  }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < vehicle_count; ++i) {
      for (int k : out[static_cast<std::size_t>(i)]) e.emplace_back(i, k);
    }
    return e;
  }
};

/// The envy graph restricted to vehicles feasible for one request.
struct EnvyGraphProjection {
  std::vector<int> vertices;          // ascending; vehicles with f_ij > 0
  std::vector<std::vector<int>> out;  // indexed by vehicle id; targets inside the projection
};

inline EnvyGraph build_envy_graph(const Instance& inst, const Assignment& asg) {
  detail::require_shape(inst, asg);
  const int n = inst.vehicle_count();
  EnvyGraph g;
  g.vehicle_count = n;
  g.out.resize(static_cast<std::size_t>(n));
  std::vector<Rational> own(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    own[static_cast<std::size_t>(i)] =
        inst.value(i, inst.feasible_subset(i, asg.bundles[static_cast<std::size_t>(i)]));
  }
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (i == k) continue;  // monotone profits forbid self-envy
      const Rational seen =
          inst.value(i, inst.feasible_subset(i, asg.bundles[static_cast<std::size_t>(k)]));
      if (own[static_cast<std::size_t>(i)] < seen) {
        g.out[static_cast<std::size_t>(i)].push_back(k);
      }
    }
  }
  return g;
}

inline EnvyGraphProjection project_graph(const EnvyGraph& g, const Instance& inst,
                                         int request) {
  if (request < 0 || request >= inst.request_count()) {
    throw std::out_of_range("project_graph: request index out of range");
  }
  EnvyGraphProjection proj;
  proj.out.resize(static_cast<std::size_t>(g.vehicle_count));
  std::vector<char> member(static_cast<std::size_t>(g.vehicle_count), 0);
  for (int i = 0; i < g.vehicle_count; ++i) {
    if (inst.feasible(i, request)) {
      proj.vertices.push_back(i);
      member[static_cast<std::size_t>(i)] = 1;
    }
  }
  for (int i : proj.vertices) {
    for (int k : g.out[static_cast<std::size_t>(i)]) {
      if (member[static_cast<std::size_t>(k)]) {
        proj.out[static_cast<std::size_t>(i)].push_back(k);
      }
    }
  }
  return proj;
}

/// Lowest-index vertex of the projection with no incoming projected edge,
/// or nullopt when every vertex is envied (an uneliminated cycle).
inline std::optional<int> try_find_unenvied(const EnvyGraphProjection& proj) {
  for (int candidate : proj.vertices) {
    bool envied = false;
    for (int i : proj.vertices) {
      if (i == candidate) continue;
      const auto& targets = proj.out[static_cast<std::size_t>(i)];
      if (std::binary_search(targets.begin(), targets.end(), candidate)) {
        envied = true;
        break;
      }
    }
    if (!envied) return candidate;
  }
  return std::nullopt;
}

/// As try_find_unenvied, but a missing source is an internal-invariant
/// failure: callers must eliminate cycles first.
inline int find_unenvied(const EnvyGraphProjection& proj) {
  if (proj.vertices.empty()) {
    throw std::invalid_argument("find_unenvied: empty projection");
  }
  const auto v = try_find_unenvied(proj);
  if (!v) {
    throw std::logic_error("find_unenvied: projection has no unenvied vehicle");
  }
  return *v;
}

/// First directed cycle found by depth-first search from the lowest-index
/// vertex, visiting neighbours in ascending order. The returned sequence
/// [c0, ..., ck] carries edges c0→c1→...→ck→c0. Deterministic.
inline std::optional<std::vector<int>> find_cycle(const EnvyGraph& g) {
  enum : char { kWhite, kGray, kBlack };
  std::vector<char> color(static_cast<std::size_t>(g.vehicle_count), kWhite);
  std::vector<int> stack;
  std::optional<std::vector<int>> found;

  std::function<bool(int)> dfs = [&](int u) {
    color[static_cast<std::size_t>(u)] = kGray;
    stack.push_back(u);
    for (int v : g.out[static_cast<std::size_t>(u)]) {
      if (color[static_cast<std::size_t>(v)] == kGray) {
        const auto it = std::find(stack.begin(), stack.end(), v);
        found = std::vector<int>(it, stack.end());
        return true;
      }
      if (color[static_cast<std::size_t>(v)] == kWhite && dfs(v)) return true;
    }
    color[static_cast<std::size_t>(u)] = kBlack;
    stack.pop_back();
    return false;
  };

  for (int s = 0; s < g.vehicle_count; ++s) {
    if (color[static_cast<std::size_t>(s)] == kWhite && dfs(s)) break;
  }
  return found;
}

inline bool is_acyclic(const EnvyGraph& g) { return !find_cycle(g).has_value(); }

struct CycleElimination {
  Assignment assignment;
  std::vector<std::vector<int>> cycles;  // eliminated, in order
};

/// Repeatedly rotates whole bundles along a feasible-envy cycle — each
/// driver in the cycle receives the bundle of the driver they envy — until
/// the graph is acyclic. Each rotation strictly increases Σ_i p_i(F_ii), so
/// this terminates. The graph is rebuilt after every rotation: a rotation
/// changes the envy edges, so eliminating stale cycles would be unsound.
inline CycleElimination eliminate_feasible_cycles(const Instance& inst,
                                                  const Assignment& asg) {
  CycleElimination result;
  result.assignment = asg;
  while (true) {
    const EnvyGraph g = build_envy_graph(inst, result.assignment);
    const auto cycle = find_cycle(g);
    if (!cycle) break;
    std::vector<RequestSet> rotated;
    rotated.reserve(cycle->size());
    for (std::size_t t = 0; t < cycle->size(); ++t) {
      const int receives_from = (*cycle)[(t + 1) % cycle->size()];
      rotated.push_back(result.assignment.bundles[static_cast<std::size_t>(receives_from)]);
    }
    for (std::size_t t = 0; t < cycle->size(); ++t) {
      result.assignment.bundles[static_cast<std::size_t>((*cycle)[t])] =
          std::move(rotated[t]);
    }
    result.cycles.push_back(*cycle);
  }
  return result;
}

struct ReturnResult {
  Assignment assignment;
  RequestSet returned;
};

/// Strips every request whose assignee's vehicle cannot service it. The
/// stripped assignment is feasible; the removed requests go back to the
/// caller's pool.
inline ReturnResult return_non_feasible(const Instance& inst, const Assignment& asg) {
  detail::require_shape(inst, asg);
  ReturnResult result;
  result.assignment = asg;
  for (int i = 0; i < inst.vehicle_count(); ++i) {
    RequestSet& bundle = result.assignment.bundles[static_cast<std::size_t>(i)];
    for (int j : asg.bundles[static_cast<std::size_t>(i)]) {
      if (!inst.feasible(i, j)) {
        bundle.erase(j);
        result.returned.insert(j);
      }
    }
  }
  return result;
}

}  // namespace fairfleet
