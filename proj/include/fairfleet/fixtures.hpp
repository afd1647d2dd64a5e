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

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fairfleet/exact.hpp"
#include "fairfleet/model.hpp"

namespace fairfleet {

/// A named study instance with reference assignments and, where relevant,
/// exact documentation values (as rational strings).
struct Fixture {
  Instance instance;
  std::map<std::string, Assignment> assignments;
  std::map<std::string, std::string> notes;
};

/// Two vehicles, two unit-profit requests, vehicle 1 infeasible for both.
/// The unique feasible complete assignment hands everything to vehicle 0,
/// which is FEQ1/FEF1 but neither EQ1 nor EF1.
inline Fixture fixture_theorem1() {
  Fixture fx;
  std::vector<ProfitFunction> profits = {
      ProfitFunction::additive({1, 1}),
      ProfitFunction::additive({1, 1}),
  };
  fx.instance = Instance(std::move(profits),
                         FeasibilityMatrix::from_rows({{1, 1}, {0, 0}}),
                         {{"name", "theorem1"}});
  Assignment all_to_first = Assignment::empty(2);
  all_to_first.bundles[0] = {0, 1};
  fx.assignments.emplace("feasible_complete", std::move(all_to_first));
  return fx;
}

/// Two vehicles, three requests with profits 1, 1, 5 shared by both
/// drivers; vehicle 1 cannot serve request 0. Separates completeness,
/// feasibility and the F-notions.
inline Fixture fixture_theorem3() {
  Fixture fx;
  std::vector<ProfitFunction> profits = {
      ProfitFunction::additive({1, 1, 5}),
      ProfitFunction::additive({1, 1, 5}),
  };
  fx.instance = Instance(std::move(profits),
                         FeasibilityMatrix::from_rows({{1, 1, 1}, {0, 1, 1}}),
                         {{"name", "theorem3"}});
  Assignment complete_not_feasible = Assignment::empty(2);
  complete_not_feasible.bundles[0] = {2};
  complete_not_feasible.bundles[1] = {0, 1};
  fx.assignments.emplace("complete_not_feasible", std::move(complete_not_feasible));
  Assignment feasible_complete = Assignment::empty(2);
  feasible_complete.bundles[0] = {0, 1, 2};
  fx.assignments.emplace("feasible_complete", std::move(feasible_complete));
  return fx;
}

/// Two drivers valuing each of four requests at 4 and 1 respectively, with
/// unit feasibility. Complete EQ1 and complete EF1 assignments exist but
/// are disjoint.
inline Fixture fixture_example2() {
  Fixture fx;
  std::vector<ProfitFunction> profits = {
      ProfitFunction::additive({4, 4, 4, 4}),
      ProfitFunction::additive({1, 1, 1, 1}),
  };
  fx.instance = Instance(std::move(profits), unit_feasibility(2, 4),
                         {{"name", "example2"}});
  return fx;
}

/// Two vehicles at positions 0 and 1 on the unit segment, requests at
/// ε and 2ε, one profit unit per visit. Documents the tension between the
/// minimum-travel dispatch (objective 2ε, profits 2 vs 0) and the fair
/// split (objective 1−ε, one profit unit each). Requires ε ∈ [0, 1/4).
inline Fixture fixture_example1(const Rational& epsilon) {
  if (epsilon.is_negative() || epsilon >= Rational(1, 4)) {
    throw std::invalid_argument("example1: epsilon must lie in [0, 1/4)");
  }
  Fixture fx;
  std::vector<ProfitFunction> profits = {
      ProfitFunction::additive({1, 1}),
      ProfitFunction::additive({1, 1}),
  };
  fx.instance = Instance(std::move(profits), unit_feasibility(2, 2),
                         {{"name", "example1"}});

  Assignment min_travel = Assignment::empty(2);
  min_travel.bundles[0] = {0, 1};
  fx.assignments.emplace("min_travel", std::move(min_travel));
  Assignment fair_split = Assignment::empty(2);
  fair_split.bundles[0] = {0};
  fair_split.bundles[1] = {1};
  fx.assignments.emplace("fair_split", std::move(fair_split));

  const Rational two_eps = Rational(2) * epsilon;
  fx.notes["vehicle0_position"] = Rational(0).str();
  fx.notes["vehicle1_position"] = Rational(1).str();
  fx.notes["request0_position"] = epsilon.str();
  fx.notes["request1_position"] = two_eps.str();
  fx.notes["min_travel_objective"] = two_eps.str();
  fx.notes["fair_split_objective"] = (Rational(1) - epsilon).str();
  return fx;
}

/// The PARTITION reduction instance for the given multiset.
inline Fixture fixture_partition(const std::vector<std::int64_t>& multiset) {
  PartitionInstance pi{multiset};
  Fixture fx;
  std::string name = "partition(";
  for (std::size_t t = 0; t < multiset.size(); ++t) {
    if (t) name += ',';
    name += std::to_string(multiset[t]);
  }
  name += ')';
  const Instance reduced = build_partition_reduction(pi);
  fx.instance = Instance(reduced.profits(), reduced.feasibility(), {{"name", name}});
  return fx;
}

/// Dispatch by fixture identifier: example1 (needs epsilon), example2,
/// theorem1, theorem3, partition (needs the multiset).
inline Fixture generate_fixture(const std::string& name,
                                const std::optional<Rational>& epsilon = std::nullopt,
                                const std::vector<std::int64_t>& multiset = {}) {
  if (name == "theorem1") return fixture_theorem1();
  if (name == "theorem3") return fixture_theorem3();
  if (name == "example2") return fixture_example2();
  if (name == "example1") {
    if (!epsilon) throw std::invalid_argument("example1: epsilon required");
    return fixture_example1(*epsilon);
  }
  if (name == "partition") {
    if (multiset.empty()) throw std::invalid_argument("partition: multiset required");
    return fixture_partition(multiset);
  }
  throw std::invalid_argument("unknown fixture '" + name + "'");
}

}  // namespace fairfleet
