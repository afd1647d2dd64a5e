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
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "fairfleet/fairness.hpp"
#include "fairfleet/model.hpp"

namespace fairfleet {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

struct EnumerationOptions {
  bool require_feasible = true;
  bool require_complete = true;
  std::uint64_t max_leaves = kDefaultEnumerationBudget;
};

namespace detail {

// Placement choices per request; -1 means "leave unassigned". The choices
// are independent across requests, so the leaf count is their product.
inline std::vector<std::vector<int>> placement_choices(const Instance& inst,
                                                       const EnumerationOptions& opts) {
  const int n = inst.vehicle_count();
  const int m = inst.request_count();
  std::vector<std::vector<int>> choices(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    auto& c = choices[static_cast<std::size_t>(j)];
    const bool servable = inst.servable(j);
    if (opts.require_complete && !servable) {
      c = {-1};  // universally unservable requests must stay unassigned
      continue;
    }
    for (int i = 0; i < n; ++i) {
      if (!opts.require_feasible || inst.feasible(i, j)) c.push_back(i);
    }
    if (!opts.require_complete) c.push_back(-1);
  }
  return choices;
}

inline std::uint64_t leaf_count(const std::vector<std::vector<int>>& choices) {
  std::uint64_t leaves = 1;
  for (const auto& c : choices) {
    if (c.empty()) return 0;
    if (leaves > std::numeric_limits<std::uint64_t>::max() / c.size()) {
      return std::numeric_limits<std::uint64_t>::max();  // saturate
    }
    leaves *= c.size();
  }
  return leaves;
}

}  // namespace detail

/// Exact size of the enumeration tree under the given options.
inline std::uint64_t count_enumeration_leaves(const Instance& inst,
                                              const EnumerationOptions& opts = {}) {
  return detail::leaf_count(detail::placement_choices(inst, opts));
}

/// Visits every assignment satisfying the options exactly once, in
/// deterministic order (requests by ascending index; per request: drivers
/// ascending, then "unassigned" where allowed). Infeasible branches are
/// pruned at the choice level when require_feasible is set.
///
/// The visitor receives `const Assignment&`; returning false stops the
/// enumeration. Throws BudgetExceeded up front when the tree holds more
/// than max_leaves assignments — the budget is a bound on leaves, not wall
/// clock, so runs are reproducible.
template <typename Visitor>
void enumerate_assignments(const Instance& inst, const EnumerationOptions& opts,
                           Visitor&& visit) {
  const auto choices = detail::placement_choices(inst, opts);
  const std::uint64_t leaves = detail::leaf_count(choices);
  if (leaves > opts.max_leaves) {
    throw BudgetExceeded("enumeration budget exceeded: " + std::to_string(leaves) +
                         " assignments > " + std::to_string(opts.max_leaves));
  }

  const int m = inst.request_count();
  Assignment asg = Assignment::empty(inst.vehicle_count());
  bool stop = false;

  const std::function<void(int)> recurse = [&](int j) {
    if (stop) return;
    if (j == m) {
      if constexpr (std::is_void_v<std::invoke_result_t<Visitor&, const Assignment&>>) {
        visit(asg);
      } else {
        if (!visit(asg)) stop = true;
      }
      return;
    }
    for (int placement : choices[static_cast<std::size_t>(j)]) {
      if (placement >= 0) asg.bundles[static_cast<std::size_t>(placement)].insert(j);
      recurse(j + 1);
      if (placement >= 0) asg.bundles[static_cast<std::size_t>(placement)].erase(j);
      if (stop) return;
    }
  };
  recurse(0);
}

/// The existence decision problem: is there an assignment with the given
/// properties satisfying the notion?
struct ExistenceQuery {
  Notion notion = Notion::ef1;
  bool require_feasible = true;
  bool require_complete = true;
  std::uint64_t max_leaves = kDefaultEnumerationBudget;
};

/// First witness in enumeration order, or nullopt when none exists.
inline std::optional<Assignment> decide_existence(const Instance& inst,
                                                  const ExistenceQuery& query) {
  std::optional<Assignment> witness;
  EnumerationOptions opts;
  opts.require_feasible = query.require_feasible;
  opts.require_complete = query.require_complete;
  opts.max_leaves = query.max_leaves;
  enumerate_assignments(inst, opts, [&](const Assignment& asg) {
    if (satisfies(inst, asg, query.notion)) {
      witness = asg;
      return false;
    }
    return true;
  });
  return witness;
}

/// A PARTITION input: positive integers with an even sum 2P > m ≥ 1.
struct PartitionInstance {
  std::vector<std::int64_t> values;

  std::int64_t sum() const {
    return std::accumulate(values.begin(), values.end(), std::int64_t{0});
  }
  std::int64_t half() const { return sum() / 2; }

  ValidationResult validate() const {
    if (values.empty()) {
      return ValidationIssue{"partition instance: need at least one value"};
    }
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (values[j] <= 0) {
        return ValidationIssue{"partition instance: values must be positive", -1,
                               static_cast<int>(j)};
      }
    }
    if (sum() % 2 != 0) {
      return ValidationIssue{"partition instance: sum must be even"};
    }
    if (sum() <= static_cast<std::int64_t>(values.size())) {
      return ValidationIssue{"partition instance: requires sum 2P > m"};
    }
    return std::nullopt;
  }
};

/// Subset-sum search for an equal split. Odd sums short-circuit to false.
inline bool has_equal_partition(const std::vector<std::int64_t>& values) {
  const std::int64_t total = std::accumulate(values.begin(), values.end(), std::int64_t{0});
  if (total % 2 != 0) return false;
  if (values.size() > 40) {
    throw BudgetExceeded("partition search limited to 40 values");
  }
  std::vector<std::int64_t> sorted = values;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::function<bool(std::size_t, std::int64_t)> reach =
      [&](std::size_t index, std::int64_t remaining) {
        if (remaining == 0) return true;
        if (index == sorted.size() || remaining < 0) return false;
        std::int64_t suffix = 0;
        for (std::size_t t = index; t < sorted.size(); ++t) suffix += sorted[t];
        if (suffix < remaining) return false;
        return reach(index + 1, remaining - sorted[index]) ||
               reach(index + 1, remaining);
      };
  return reach(0, total / 2);
}

/// The 3-driver, (m+4)-request instance reduced from a PARTITION input.
/// Requests 0..m-1 carry the input numbers as profits; the four special
/// requests s1..s4 carry 2P, 2P, 3P, 3P. All drivers share the same
/// additive profits. Driver 0 is feasible only for s3 and s4; driver 1 for
/// the number-requests and s1; driver 2 for the number-requests and s2.
inline Instance build_partition_reduction(const PartitionInstance& pi) {
  if (auto issue = pi.validate()) {
    throw std::invalid_argument(issue->message);
  }
  const int m = static_cast<int>(pi.values.size());
  const std::int64_t p = pi.half();

  std::vector<Rational> per_request;
  per_request.reserve(static_cast<std::size_t>(m) + 4);
  for (std::int64_t v : pi.values) per_request.emplace_back(v);
  per_request.emplace_back(2 * p);
  per_request.emplace_back(2 * p);
  per_request.emplace_back(3 * p);
  per_request.emplace_back(3 * p);

  std::vector<std::vector<int>> rows(3, std::vector<int>(static_cast<std::size_t>(m) + 4, 0));
  rows[0][static_cast<std::size_t>(m) + 2] = 1;  // s3
  rows[0][static_cast<std::size_t>(m) + 3] = 1;  // s4
  for (int j = 0; j < m; ++j) {
    rows[1][static_cast<std::size_t>(j)] = 1;
    rows[2][static_cast<std::size_t>(j)] = 1;
  }
  rows[1][static_cast<std::size_t>(m)] = 1;      // s1
  rows[2][static_cast<std::size_t>(m) + 1] = 1;  // s2

  std::vector<ProfitFunction> profits;
  profits.reserve(3);
  for (int i = 0; i < 3; ++i) profits.push_back(ProfitFunction::additive(per_request));
  return Instance(std::move(profits), FeasibilityMatrix::from_rows(rows));
}

struct ReductionCheck {
  bool partition_exists = false;
  bool eq1_exists = false;
  bool ef1_exists = false;
  bool eq1_matches_ef1_pointwise = true;

  /// The reduction is sound on this input: an equal partition exists iff a
  /// feasible complete EF1 assignment does, and EQ1 and EF1 agree on every
  /// feasible complete assignment of the reduced instance.
  bool holds() const {
    return partition_exists == ef1_exists && eq1_matches_ef1_pointwise;
  }
};

/// Brute-forces both sides of the reduction's biconditional.
inline ReductionCheck verify_reduction(const PartitionInstance& pi,
                                       std::uint64_t max_leaves = kDefaultEnumerationBudget) {
  ReductionCheck check;
  check.partition_exists = has_equal_partition(pi.values);

  const Instance reduced = build_partition_reduction(pi);
  EnumerationOptions opts;
  opts.max_leaves = max_leaves;
  enumerate_assignments(reduced, opts, [&](const Assignment& asg) {
    const bool eq1 = is_eq1(reduced, asg);
    const bool ef1 = is_ef1(reduced, asg);
    check.eq1_exists = check.eq1_exists || eq1;
    check.ef1_exists = check.ef1_exists || ef1;
    if (eq1 != ef1) check.eq1_matches_ef1_pointwise = false;
  });
  return check;
}

}  // namespace fairfleet
