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

// Acceptance suite: one criterion per function, one PASS/FAIL line each,
// exit code = number of failures. All verdict arithmetic is exact; the only
// tolerances are the stated wall-clock budgets.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fairfleet/algorithms.hpp"
#include "fairfleet/exact.hpp"
#include "fairfleet/fairness.hpp"
#include "fairfleet/fixtures.hpp"
#include "fairfleet/generator.hpp"
#include "oracle.hpp"

namespace {

using namespace fairfleet;

struct Failure {
  std::string detail;
};

using Check = std::function<bool(std::string&)>;

Instance suite_instance(std::uint64_t base_seed, int index) {
  RandomSpec spec;  // all four profit variants by default
  spec.seed = base_seed + static_cast<std::uint64_t>(index);
  spec.vehicles = 1 + index % 5;
  spec.requests = index % 13;
  const double densities[] = {0.3, 0.7, 1.0};
  spec.density = densities[index % 3];
  return generate_random(spec);
}

Assignment bundles(std::vector<RequestSet> sets) {
  Assignment asg;
  asg.bundles = std::move(sets);
  return asg;
}

// Criterion 1: feasible_min_max returns feasible complete FEQ1 assignments
// on 1000 seeded random instances (n <= 5, m <= 12, all profit variants,
// densities 0.3/0.7/1.0), within 60 s.
bool criterion1(std::string& detail) {
  const auto started = std::chrono::steady_clock::now();
  for (int index = 0; index < 1000; ++index) {
    const Instance inst = suite_instance(100000, index);
    const auto result = feasible_min_max(inst);
    if (!is_feasible(inst, result.assignment) || !is_complete(inst, result.assignment) ||
        !is_feq1(inst, result.assignment)) {
      detail = "guarantee failed on instance " + std::to_string(index);
      return false;
    }
    if (result.rounds.size() >
        static_cast<std::size_t>(inst.request_count() + inst.vehicle_count())) {
      detail = "more than m + n rounds on instance " + std::to_string(index);
      return false;
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (seconds > 60.0) {
    detail = "suite took " + std::to_string(seconds) + " s > 60 s";
    return false;
  }
  detail = "1000/1000 instances";
  return true;
}

// Criterion 2: feasible_envy_graph returns feasible complete FEF1
// assignments on the same suite; round counts stay under the termination
// guard; welfare traces never decrease and strictly increase on every
// cycle-elimination round.
bool criterion2(std::string& detail) {
  for (int index = 0; index < 1000; ++index) {
    const Instance inst = suite_instance(200000, index);
    const auto result = feasible_envy_graph(inst);
    if (!is_feasible(inst, result.assignment) || !is_complete(inst, result.assignment) ||
        !is_fef1(inst, result.assignment)) {
      detail = "guarantee failed on instance " + std::to_string(index);
      return false;
    }
    const auto cap = envy_graph_round_cap(inst);
    if (!cap.has_value() ||
        Rational(static_cast<std::int64_t>(result.rounds.size())) > *cap) {
      detail = "round guard breached on instance " + std::to_string(index);
      return false;
    }
    Rational previous;
    for (const auto& t : result.rounds) {
      const bool eliminated = !t.cycles.empty() || !t.pre_pick_cycles.empty();
      if (t.welfare < previous) {
        detail = "welfare decreased on instance " + std::to_string(index);
        return false;
      }
      if (eliminated && !(t.welfare > previous)) {
        detail = "cycle round without strict welfare gain on instance " +
                 std::to_string(index);
        return false;
      }
      previous = t.welfare;
    }
  }
  detail = "1000/1000 instances";
  return true;
}

// Criterion 3: on the theorem-1 fixture, existence says "no" for EQ1 and
// EF1 but "yes" for FEQ1 and FEF1 with witness ({r1, r2}, {}), within 1 s.
bool criterion3(std::string& detail) {
  const auto started = std::chrono::steady_clock::now();
  const Instance inst = fixture_theorem1().instance;
  const Assignment want = bundles({{0, 1}, {}});
  if (decide_existence(inst, {Notion::eq1}).has_value()) {
    detail = "EQ1 unexpectedly exists";
    return false;
  }
  if (decide_existence(inst, {Notion::ef1}).has_value()) {
    detail = "EF1 unexpectedly exists";
    return false;
  }
  const auto feq1 = decide_existence(inst, {Notion::feq1});
  const auto fef1 = decide_existence(inst, {Notion::fef1});
  if (!feq1 || !(*feq1 == want)) {
    detail = "FEQ1 witness missing or wrong";
    return false;
  }
  if (!fef1 || !(*fef1 == want)) {
    detail = "FEF1 witness missing or wrong";
    return false;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (seconds > 1.0) {
    detail = "took " + std::to_string(seconds) + " s > 1 s";
    return false;
  }
  detail = "all four answers and the witness match";
  return true;
}

// Criterion 4: theorem-3 fixture verdicts, exactly.
bool criterion4(std::string& detail) {
  const Instance inst = fixture_theorem3().instance;

  const Assignment split = bundles({{2}, {0, 1}});
  if (!is_feq1(inst, split) || !is_fef1(inst, split)) {
    detail = "({r3}, {r1,r2}) should be FEQ1 and FEF1";
    return false;
  }
  if (is_feasible(inst, split)) {
    detail = "({r3}, {r1,r2}) should not be feasible";
    return false;
  }

  const Assignment all_to_first = bundles({{0, 1, 2}, {}});
  if (!is_feasible(inst, all_to_first) || !is_complete(inst, all_to_first)) {
    detail = "({r1,r2,r3}, {}) should be feasible complete";
    return false;
  }
  if (is_feq1(inst, all_to_first) || is_fef1(inst, all_to_first)) {
    detail = "({r1,r2,r3}, {}) should violate FEQ1 and FEF1";
    return false;
  }
  detail = "both assignments verdict exactly as stated";
  return true;
}

// Criterion 5: over the 16 complete assignments of example 2, the EQ1 and
// EF1 sets are non-empty and disjoint; every EF1 member splits 2/2; every
// EQ1 member splits 1/3 with the singleton at driver 0.
bool criterion5(std::string& detail) {
  const Instance inst = fixture_example2().instance;
  int total = 0;
  int eq1_count = 0;
  int ef1_count = 0;
  bool ok = true;
  enumerate_assignments(inst, {}, [&](const Assignment& asg) {
    ++total;
    const bool eq1 = is_eq1(inst, asg);
    const bool ef1 = is_ef1(inst, asg);
    if (eq1 && ef1) ok = false;
    if (eq1) {
      ++eq1_count;
      if (asg.bundles[0].size() != 1 || asg.bundles[1].size() != 3) ok = false;
    }
    if (ef1) {
      ++ef1_count;
      if (asg.bundles[0].size() != 2 || asg.bundles[1].size() != 2) ok = false;
    }
  });
  if (total != 16 || !ok || eq1_count == 0 || ef1_count == 0) {
    detail = "total=" + std::to_string(total) + " eq1=" + std::to_string(eq1_count) +
             " ef1=" + std::to_string(ef1_count);
    return false;
  }
  detail = std::to_string(eq1_count) + " EQ1 and " + std::to_string(ef1_count) +
           " EF1 assignments, disjoint with the stated shapes";
  return true;
}

// Criterion 6: the reduction biconditional holds for every valid partition
// multiset with size <= 4 and values <= 5, within 5 minutes.
bool criterion6(std::string& detail) {
  const auto started = std::chrono::steady_clock::now();
  int checked = 0;
  std::vector<std::int64_t> values;
  bool ok = true;
  const std::function<void()> sweep = [&]() {
    if (!ok) return;
    if (!values.empty()) {
      const PartitionInstance pi{values};
      if (!pi.validate()) {
        const auto check = verify_reduction(pi);
        ++checked;
        if (!check.holds()) ok = false;
      }
    }
    if (values.size() == 4) return;
    const std::int64_t low = values.empty() ? 1 : values.back();
    for (std::int64_t v = low; v <= 5 && ok; ++v) {
      values.push_back(v);
      sweep();
      values.pop_back();
    }
  };
  sweep();
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (!ok) {
    detail = "a reduction check failed";
    return false;
  }
  if (seconds > 300.0) {
    detail = "sweep took " + std::to_string(seconds) + " s > 300 s";
    return false;
  }
  detail = std::to_string(checked) + " valid multisets verified";
  return true;
}

// Criterion 7: with unit feasibility, FEQ1 coincides with EQ1 and FEF1 with
// EF1 on 500 random (instance, assignment) pairs.
bool criterion7(std::string& detail) {
  for (int index = 0; index < 500; ++index) {
    RandomSpec spec;
    spec.seed = 300000 + static_cast<std::uint64_t>(index);
    spec.vehicles = 1 + index % 5;
    spec.requests = index % 13;
    spec.density = 1.0;
    const Instance inst = generate_random(spec);
    const Assignment asg =
        random_assignment(inst, 7777 + static_cast<std::uint64_t>(index));
    if (is_feq1(inst, asg) != is_eq1(inst, asg) ||
        is_fef1(inst, asg) != is_ef1(inst, asg)) {
      detail = "coincidence broken on pair " + std::to_string(index);
      return false;
    }
  }
  detail = "500/500 pairs agree";
  return true;
}

// Criterion 8: every checker matches the definition-level brute-force
// evaluator over a seeded grid of instances with n <= 3, m <= 6.
bool criterion8(std::string& detail) {
  long long compared = 0;
  for (int n = 1; n <= 3; ++n) {
    for (int m = 0; m <= 6; ++m) {
      for (const double density : {0.3, 0.7, 1.0}) {
        for (int variant_seed = 0; variant_seed < 2; ++variant_seed) {
          RandomSpec spec;
          spec.seed = static_cast<std::uint64_t>(
              400000 + n * 10000 + m * 100 + static_cast<int>(density * 10) +
              variant_seed);
          spec.vehicles = n;
          spec.requests = m;
          spec.density = density;
          const Instance inst = generate_random(spec);

          // All assignments when the space is small, samples otherwise.
          std::vector<Assignment> assignments;
          double space = 1;
          for (int j = 0; j < m; ++j) space *= n + 1;
          if (space <= 1024) {
            EnumerationOptions opts;
            opts.require_feasible = false;
            opts.require_complete = false;
            enumerate_assignments(inst, opts, [&](const Assignment& a) {
              assignments.push_back(a);
            });
          } else {
            for (int s = 0; s < 200; ++s) {
              assignments.push_back(
                  random_assignment(inst, spec.seed * 31 + static_cast<std::uint64_t>(s)));
            }
          }

          for (const Assignment& asg : assignments) {
            ++compared;
            if (is_feasible(inst, asg) != oracle::feasible(inst, asg) ||
                is_complete(inst, asg) != oracle::complete(inst, asg) ||
                is_eq1(inst, asg) != oracle::eq1(inst, asg) ||
                is_ef1(inst, asg) != oracle::ef1(inst, asg) ||
                is_feq1(inst, asg) != oracle::feq1(inst, asg) ||
                is_fef1(inst, asg) != oracle::fef1(inst, asg)) {
              detail = "oracle disagreement (n=" + std::to_string(n) +
                       ", m=" + std::to_string(m) + ")";
              return false;
            }
          }
        }
      }
    }
  }
  detail = std::to_string(compared) + " assignment verdicts matched";
  return true;
}

// Criterion 9: per-round invariants on 100 traced runs of each algorithm:
// every intermediate assignment is FEQ1 (min-max) or FEF1 (envy graph).
bool criterion9(std::string& detail) {
  for (int index = 0; index < 100; ++index) {
    const Instance inst = suite_instance(500000, index);

    const auto min_max = feasible_min_max(inst);
    for (const auto& t : min_max.rounds) {
      if (!is_feq1(inst, t.bundles_after)) {
        detail = "min-max round " + std::to_string(t.round) + " not FEQ1 on instance " +
                 std::to_string(index);
        return false;
      }
    }

    const auto envy = feasible_envy_graph(inst);
    for (const auto& t : envy.rounds) {
      if (!is_fef1(inst, t.bundles_after)) {
        detail = "envy-graph round " + std::to_string(t.round) +
                 " not FEF1 on instance " + std::to_string(index);
        return false;
      }
    }
  }
  detail = "100 traced runs per algorithm audited";
  return true;
}

}  // namespace

int main() {
  const struct {
    const char* name;
    Check check;
  } criteria[] = {
      {"feasible-min-max guarantees at scale", criterion1},
      {"feasible-envy-graph guarantees at scale", criterion2},
      {"theorem-1 existence answers", criterion3},
      {"theorem-3 fixture verdicts", criterion4},
      {"example-2 EQ1/EF1 disjointness", criterion5},
      {"partition reduction sweep", criterion6},
      {"unit-feasibility coincidence", criterion7},
      {"checker-oracle equivalence", criterion8},
      {"per-round invariant audits", criterion9},
  };

  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    std::string detail;
    const auto started = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::printf("[criterion %d] %-45s %s (%.2f s) — %s\n", index, c.name,
                ok ? "PASS" : "FAIL", seconds, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures == 0) {
    std::printf("all %d acceptance criteria passed\n", index);
  } else {
    std::printf("%d of %d acceptance criteria FAILED\n", failures, index);
  }
  return failures;
}
