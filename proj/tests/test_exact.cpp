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

#include "fairfleet/exact.hpp"

#include <random>
#include <vector>

#include "fairfleet/algorithms.hpp"
#include "fairfleet/fixtures.hpp"
#include "fairfleet/generator.hpp"
#include "gtest/gtest.h"

namespace fairfleet {
namespace {

Assignment bundles(std::vector<RequestSet> sets) {
  Assignment asg;
  asg.bundles = std::move(sets);
  return asg;
}

std::vector<Assignment> collect(const Instance& inst, const EnumerationOptions& opts) {
  std::vector<Assignment> all;
  enumerate_assignments(inst, opts, [&](const Assignment& a) { all.push_back(a); });
  return all;
}

TEST(Enumerate, CountsCompletePlacements) {
  std::vector<ProfitFunction> profits = {ProfitFunction::additive({1, 1}),
                                         ProfitFunction::additive({1, 1})};
  const Instance inst(std::move(profits), unit_feasibility(2, 2));
  EXPECT_EQ(collect(inst, {}).size(), 4u);  // 2 placements per request
  EXPECT_EQ(count_enumeration_leaves(inst, {}), 4u);

  EnumerationOptions partial;
  partial.require_complete = false;
  EXPECT_EQ(collect(inst, partial).size(), 9u);  // plus "unassigned" branches
}

TEST(Enumerate, Theorem1HasUniqueFeasibleComplete) {
  const Instance inst = fixture_theorem1().instance;
  const auto all = collect(inst, {});
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0], bundles({{0, 1}, {}}));
}

TEST(Enumerate, SingleVehicleNoRequests) {
  std::vector<ProfitFunction> profits = {ProfitFunction::additive({})};
  const Instance inst(std::move(profits), FeasibilityMatrix(1, 0));
  const auto all = collect(inst, {});
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0], Assignment::empty(1));
}

TEST(Enumerate, UnservableRequestsStayUnassignedWhenComplete) {
  std::vector<ProfitFunction> profits = {ProfitFunction::additive({1, 1})};
  const Instance inst(std::move(profits), FeasibilityMatrix::from_rows({{1, 0}}));
  const auto all = collect(inst, {});
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(all[0], bundles({{0}}));
}

TEST(Enumerate, BudgetIsCheckedUpFront) {
  std::vector<ProfitFunction> profits = {ProfitFunction::additive({1, 1, 1}),
                                         ProfitFunction::additive({1, 1, 1})};
  const Instance inst(std::move(profits), unit_feasibility(2, 3));
  EnumerationOptions tiny;
  tiny.max_leaves = 7;  // the tree has 8 leaves
  EXPECT_THROW(collect(inst, tiny), BudgetExceeded);
  tiny.max_leaves = 8;
  EXPECT_EQ(collect(inst, tiny).size(), 8u);
}

TEST(Enumerate, VisitorCanStopEarly) {
  const Instance inst = fixture_example2().instance;
  int seen = 0;
  enumerate_assignments(inst, {}, [&](const Assignment&) { return ++seen < 3; });
  EXPECT_EQ(seen, 3);
}

// Feasibility pruning yields exactly the post-filtered unpruned stream.
TEST(Enumerate, PruningMatchesPostFiltering) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 60; ++t) {
    RandomSpec spec;
    spec.seed = rng();
    spec.vehicles = 1 + static_cast<int>(rng() % 3);
    spec.requests = static_cast<int>(rng() % 7);
    spec.density = (t % 2) ? 0.5 : 0.8;
    const Instance inst = generate_random(spec);

    for (const bool complete : {false, true}) {
      EnumerationOptions pruned;
      pruned.require_feasible = true;
      pruned.require_complete = complete;
      EnumerationOptions unpruned;
      unpruned.require_feasible = false;
      unpruned.require_complete = complete;

      const auto fast = collect(inst, pruned);
      std::vector<Assignment> filtered;
      for (const auto& a : collect(inst, unpruned)) {
        if (is_feasible(inst, a)) filtered.push_back(a);
      }
      ASSERT_EQ(fast, filtered);
    }
  }
}

TEST(DecideExistence, Theorem1Answers) {
  const Instance inst = fixture_theorem1().instance;
  EXPECT_FALSE(decide_existence(inst, {Notion::eq1}).has_value());
  EXPECT_FALSE(decide_existence(inst, {Notion::ef1}).has_value());

  const auto feq1_witness = decide_existence(inst, {Notion::feq1});
  ASSERT_TRUE(feq1_witness.has_value());
  EXPECT_EQ(*feq1_witness, bundles({{0, 1}, {}}));
  const auto fef1_witness = decide_existence(inst, {Notion::fef1});
  ASSERT_TRUE(fef1_witness.has_value());
  EXPECT_EQ(*fef1_witness, bundles({{0, 1}, {}}));
}

TEST(DecideExistence, Example2Eq1AndEf1SetsAreDisjoint) {
  const Instance inst = fixture_example2().instance;
  int eq1_count = 0;
  int ef1_count = 0;
  int both = 0;
  int total = 0;
  enumerate_assignments(inst, {}, [&](const Assignment& a) {
    ++total;
    const bool eq1 = is_eq1(inst, a);
    const bool ef1 = is_ef1(inst, a);
    eq1_count += eq1;
    ef1_count += ef1;
    both += eq1 && ef1;
  });
  EXPECT_EQ(total, 16);
  EXPECT_GT(eq1_count, 0);
  EXPECT_GT(ef1_count, 0);
  EXPECT_EQ(both, 0);
}

TEST(DecideExistence, WitnessSatisfiesEveryRequestedPredicate) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 120; ++t) {
    RandomSpec spec;
    spec.seed = rng();
    spec.vehicles = 1 + static_cast<int>(rng() % 3);
    spec.requests = static_cast<int>(rng() % 7);
    spec.density = (t % 3 == 0) ? 0.3 : (t % 3 == 1 ? 0.7 : 1.0);
    const Instance inst = generate_random(spec);
    for (const Notion notion : {Notion::eq1, Notion::ef1, Notion::feq1, Notion::fef1}) {
      const auto witness = decide_existence(inst, {notion});
      if (witness) {
        ASSERT_TRUE(is_feasible(inst, *witness));
        ASSERT_TRUE(is_complete(inst, *witness));
        ASSERT_TRUE(satisfies(inst, *witness, notion));
      }
    }
  }
}

// A feasible complete FEQ1/FEF1 assignment exists in every setting, and
// the enumerator agrees with the constructive algorithms on that.
TEST(DecideExistence, FNotionsAlwaysExist) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 150; ++t) {
    RandomSpec spec;
    spec.seed = rng();
    spec.vehicles = 1 + static_cast<int>(rng() % 3);
    spec.requests = static_cast<int>(rng() % 7);
    spec.density = (t % 3 == 0) ? 0.3 : (t % 3 == 1 ? 0.7 : 1.0);
    const Instance inst = generate_random(spec);
    ASSERT_TRUE(decide_existence(inst, {Notion::feq1}).has_value());
    ASSERT_TRUE(decide_existence(inst, {Notion::fef1}).has_value());
    ASSERT_TRUE(is_feq1(inst, feasible_min_max(inst).assignment));
    ASSERT_TRUE(is_fef1(inst, feasible_envy_graph(inst).assignment));
  }
}

TEST(Partition, ValidatesPremises) {
  EXPECT_FALSE((PartitionInstance{{2, 2}}.validate().has_value()));
  EXPECT_TRUE((PartitionInstance{{}}.validate().has_value()));
  EXPECT_TRUE((PartitionInstance{{1, 2}}.validate().has_value()));   // odd sum
  EXPECT_TRUE((PartitionInstance{{1, 1}}.validate().has_value()));   // 2P = 2 is not > m = 2
  EXPECT_TRUE((PartitionInstance{{0, 2}}.validate().has_value()));   // non-positive value
  EXPECT_TRUE((PartitionInstance{{-1, 3}}.validate().has_value()));
}

TEST(Partition, SubsetSumOracle) {
  EXPECT_TRUE(has_equal_partition({2, 2}));
  EXPECT_FALSE(has_equal_partition({1, 3}));
  EXPECT_TRUE(has_equal_partition({1, 2, 3}));
  EXPECT_FALSE(has_equal_partition({1, 2}));  // odd sum
  EXPECT_TRUE(has_equal_partition({5, 4, 3, 2, 2}));
}

TEST(Reduction, MatchesTheProofTable) {
  const Instance inst = build_partition_reduction(PartitionInstance{{2, 2}});
  ASSERT_EQ(inst.vehicle_count(), 3);
  ASSERT_EQ(inst.request_count(), 6);

  // Identical additive profits: numbers then 2P, 2P, 3P, 3P with P = 2.
  for (int i = 0; i < 3; ++i) {
    const auto& payload = std::get<AdditiveProfit>(inst.profit(i).payload());
    EXPECT_EQ(payload.per_request,
              (std::vector<Rational>{2, 2, 4, 4, 6, 6}));
  }

  // Feasibility rows: driver 0 only s3/s4; drivers 1 and 2 the numbers
  // plus s1 and s2 respectively.
  const std::vector<std::vector<int>> want = {
      {0, 0, 0, 0, 1, 1}, {1, 1, 1, 0, 0, 0}, {1, 1, 0, 1, 0, 0}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 6; ++j) {
      EXPECT_EQ(inst.feasible(i, j), want[static_cast<std::size_t>(i)]
                                         [static_cast<std::size_t>(j)] == 1);
    }
  }

  const Instance other = build_partition_reduction(PartitionInstance{{1, 3}});
  const auto& payload = std::get<AdditiveProfit>(other.profit(0).payload());
  EXPECT_EQ(payload.per_request, (std::vector<Rational>{1, 3, 4, 4, 6, 6}));

  EXPECT_THROW(build_partition_reduction(PartitionInstance{{1, 1}}),
               std::invalid_argument);
  EXPECT_THROW(build_partition_reduction(PartitionInstance{{1, 2}}),
               std::invalid_argument);
}

TEST(Reduction, VerifiesBothDirections) {
  const auto yes = verify_reduction(PartitionInstance{{2, 2}});
  EXPECT_TRUE(yes.partition_exists);
  EXPECT_TRUE(yes.ef1_exists);
  EXPECT_TRUE(yes.eq1_exists);
  EXPECT_TRUE(yes.eq1_matches_ef1_pointwise);
  EXPECT_TRUE(yes.holds());

  const auto no = verify_reduction(PartitionInstance{{1, 3}});
  EXPECT_FALSE(no.partition_exists);
  EXPECT_FALSE(no.ef1_exists);
  EXPECT_TRUE(no.eq1_matches_ef1_pointwise);
  EXPECT_TRUE(no.holds());
}

}  // namespace
}  // namespace fairfleet
