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

#include <stdexcept>
#include <string>
#include <vector>

#include "fairfleet/model.hpp"

namespace fairfleet {

// The four pairwise fairness notions. EQ1/EF1 compare whole bundles; the
// F-variants restrict every comparison to the requests the *viewing*
// vehicle is feasible for (sets F_ii and F_ik). EQ-family compares against
// the owner's profit function, EF-family against the viewer's own.
enum class Notion { eq1, ef1, feq1, fef1 };

inline const char* to_string(Notion n) {
  switch (n) {
    case Notion::eq1: return "eq1";
    case Notion::ef1: return "ef1";
    case Notion::feq1: return "feq1";
    case Notion::fef1: return "fef1";
  }
  throw std::logic_error("unknown notion");
}

inline Notion notion_from_string(const std::string& s) {
  if (s == "eq1") return Notion::eq1;
  if (s == "ef1") return Notion::ef1;
  if (s == "feq1") return Notion::feq1;
  if (s == "fef1") return Notion::fef1;
  throw std::invalid_argument("unknown fairness notion '" + s + "'");
}

/// A violated ordered pair: viewer i compares own_value against the owner's
/// bundle, and even the best single removal stays strictly above own_value.
struct PairWitness {
  int viewer = -1;
  int owner = -1;
  Rational viewer_value;        // viewer's (possibly restricted) own-bundle value
  Rational owner_bundle_value;  // comparison-set value before any removal
  Rational best_removal_value;  // min over single removals; still > viewer_value
};

struct InfeasibleAssignment {
  int vehicle = -1;
  int request = -1;  // assigned to `vehicle` although f = 0
};

struct IncompleteAssignment {
  int request = -1;
  int assigned_to = -1;  // -1: servable but unassigned; >= 0: unservable yet assigned
};

/// All six verdicts for one (instance, assignment) pair, with the witnesses
/// that re-trigger each failed notion.
struct FairnessReport {
  bool feasible = true;
  bool complete = true;
  bool eq1 = true;
  bool ef1 = true;
  bool feq1 = true;
  bool fef1 = true;

  std::vector<InfeasibleAssignment> feasibility_witnesses;
  std::vector<IncompleteAssignment> completeness_witnesses;
  std::vector<PairWitness> eq1_witnesses;
  std::vector<PairWitness> ef1_witnesses;
  std::vector<PairWitness> feq1_witnesses;
  std::vector<PairWitness> fef1_witnesses;

  bool verdict(Notion n) const {
    switch (n) {
      case Notion::eq1: return eq1;
      case Notion::ef1: return ef1;
      case Notion::feq1: return feq1;
      case Notion::fef1: return fef1;
    }
    throw std::logic_error("unknown notion");
  }

  bool all_pass() const { return feasible && complete && eq1 && ef1 && feq1 && fef1; }
};

namespace detail {

inline void require_shape(const Instance& inst, const Assignment& asg) {
  if (asg.vehicle_count() != inst.vehicle_count()) {
    throw std::invalid_argument("assignment has wrong number of bundles");
  }
}

// One ordered pair under one notion. Vacuous when the comparison set is
// empty; otherwise satisfied iff some single removal closes the gap.
// Self-pairs are never violable (monotonicity), so callers skip i == k.
struct PairCheck {
  bool ok = true;
  Rational viewer_value;
  Rational owner_bundle_value;
  Rational best_removal_value;
};

inline PairCheck check_pair(const Instance& inst, const Assignment& asg, int viewer,
                            int owner, Notion notion) {
  const bool restricted = notion == Notion::feq1 || notion == Notion::fef1;
  const bool owner_evaluates = notion == Notion::eq1 || notion == Notion::feq1;

  const RequestSet& own_bundle = asg.bundles[static_cast<std::size_t>(viewer)];
  const RequestSet& other_bundle = asg.bundles[static_cast<std::size_t>(owner)];
  const RequestSet own_set =
      restricted ? inst.feasible_subset(viewer, own_bundle) : own_bundle;
  const RequestSet other_set =
      restricted ? inst.feasible_subset(viewer, other_bundle) : other_bundle;

  PairCheck result;
  if (other_set.empty()) return result;

  const int evaluator = owner_evaluates ? owner : viewer;
  result.viewer_value = inst.value(viewer, own_set);
  result.owner_bundle_value = inst.value(evaluator, other_set);

  bool first = true;
  for (int j : other_set) {
    const Rational removed = inst.value(evaluator, other_set.without(j));
    if (result.viewer_value >= removed) {
      result.ok = true;
      return result;
    }
    if (first || removed < result.best_removal_value) {
      result.best_removal_value = removed;
      first = false;
    }
  }
  result.ok = false;
  return result;
}

}  // namespace detail

/// Every assigned request is feasible for its assignee.
inline bool is_feasible(const Instance& inst, const Assignment& asg) {
  detail::require_shape(inst, asg);
  for (int i = 0; i < inst.vehicle_count(); ++i) {
    for (int j : asg.bundles[static_cast<std::size_t>(i)]) {
      if (!inst.feasible(i, j)) return false;
    }
  }
  return true;
}

/// Every servable request is assigned; every universally unservable request
/// is unassigned.
inline bool is_complete(const Instance& inst, const Assignment& asg) {
  detail::require_shape(inst, asg);
  for (int j = 0; j < inst.request_count(); ++j) {
    const bool assigned = asg.assignee(j).has_value();
    if (inst.servable(j) != assigned) return false;
  }
  return true;
}

inline bool satisfies(const Instance& inst, const Assignment& asg, Notion notion) {
  detail::require_shape(inst, asg);
  const int n = inst.vehicle_count();
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (i == k) continue;
      if (!detail::check_pair(inst, asg, i, k, notion).ok) return false;
    }
  }
  return true;
}

inline bool is_eq1(const Instance& inst, const Assignment& asg) {
  return satisfies(inst, asg, Notion::eq1);
}
inline bool is_ef1(const Instance& inst, const Assignment& asg) {
  return satisfies(inst, asg, Notion::ef1);
}
inline bool is_feq1(const Instance& inst, const Assignment& asg) {
  return satisfies(inst, asg, Notion::feq1);
}
inline bool is_fef1(const Instance& inst, const Assignment& asg) {
  return satisfies(inst, asg, Notion::fef1);
}

/// Σ_i p_i(F_ii): the feasible utilitarian welfare of an assignment.
inline Rational feasible_welfare(const Instance& inst, const Assignment& asg) {
  detail::require_shape(inst, asg);
  Rational total;
  for (int i = 0; i < inst.vehicle_count(); ++i) {
    total += inst.value(i, inst.feasible_subset(i, asg.bundles[static_cast<std::size_t>(i)]));
  }
  return total;
}

/// All six verdicts at once, with violating witnesses in ascending
/// (viewer, owner) order. Works on any assignment, feasible or not.
inline FairnessReport fairness_report(const Instance& inst, const Assignment& asg) {
  detail::require_shape(inst, asg);
  FairnessReport report;

  for (int i = 0; i < inst.vehicle_count(); ++i) {
    for (int j : asg.bundles[static_cast<std::size_t>(i)]) {
      if (!inst.feasible(i, j)) {
        report.feasible = false;
        report.feasibility_witnesses.push_back({i, j});
      }
    }
  }
  for (int j = 0; j < inst.request_count(); ++j) {
    const auto owner = asg.assignee(j);
    if (inst.servable(j) && !owner) {
      report.complete = false;
      report.completeness_witnesses.push_back({j, -1});
    } else if (!inst.servable(j) && owner) {
      report.complete = false;
      report.completeness_witnesses.push_back({j, *owner});
    }
  }

  const auto check_notion = [&](Notion notion, bool& verdict,
                                std::vector<PairWitness>& witnesses) {
    const int n = inst.vehicle_count();
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        if (i == k) continue;
        const auto pair = detail::check_pair(inst, asg, i, k, notion);
        if (!pair.ok) {
          verdict = false;
          witnesses.push_back({i, k, pair.viewer_value, pair.owner_bundle_value,
                               pair.best_removal_value});
        }
      }
    }
  };
  check_notion(Notion::eq1, report.eq1, report.eq1_witnesses);
  check_notion(Notion::ef1, report.ef1, report.ef1_witnesses);
  check_notion(Notion::feq1, report.feq1, report.feq1_witnesses);
  check_notion(Notion::fef1, report.fef1, report.fef1_witnesses);
  return report;
}

}  // namespace fairfleet
