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
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "fairfleet/model.hpp"

namespace fairfleet {

/// Seeded random-instance parameters. Generated instances always pass
/// validate(): profit payloads are built non-negative and, for tables,
/// monotone by construction.
struct RandomSpec {
  std::uint64_t seed = 0;
  int vehicles = 2;
  int requests = 4;
  std::vector<ProfitKind> variants = {ProfitKind::additive, ProfitKind::budget_additive,
                                      ProfitKind::pair_bonus, ProfitKind::table};
  double density = 1.0;  // probability that f_ij = 1
};

namespace detail {

// Draws below `bound` straight off the engine output. The modulo bias is
// irrelevant here and, unlike std::uniform_int_distribution, the result is
// identical across standard libraries.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t below(std::uint64_t bound) { return bound ? engine_() % bound : 0; }
  Rational small_rational(std::uint64_t numerator_bound) {
    const std::int64_t den = std::int64_t{1} << below(3);  // 1, 2 or 4
    return Rational(static_cast<std::int64_t>(below(numerator_bound)), den);
  }

 private:
  std::mt19937_64 engine_;
};

inline ProfitFunction random_profit(Draw& draw, int requests,
                                    const std::vector<ProfitKind>& variants) {
  const ProfitKind kind = variants[draw.below(variants.size())];
  std::vector<Rational> per_request;
  per_request.reserve(static_cast<std::size_t>(requests));
  for (int j = 0; j < requests; ++j) per_request.push_back(draw.small_rational(13));

  switch (kind) {
    case ProfitKind::additive:
      return ProfitFunction::additive(std::move(per_request));
    case ProfitKind::budget_additive:
      return ProfitFunction::budget_additive(std::move(per_request),
                                             draw.small_rational(25));
    case ProfitKind::pair_bonus:
      return ProfitFunction::pair_bonus(std::move(per_request), draw.small_rational(5));
    case ProfitKind::table: {
      const int support_size = static_cast<int>(draw.below(
          static_cast<std::uint64_t>(std::min(requests, 4)) + 1));
      std::vector<int> all(static_cast<std::size_t>(requests));
      for (int j = 0; j < requests; ++j) all[static_cast<std::size_t>(j)] = j;
      // Partial Fisher-Yates for a random distinct support.
      for (int t = 0; t < support_size; ++t) {
        const auto pick = t + static_cast<int>(draw.below(
                                  static_cast<std::uint64_t>(requests - t)));
        std::swap(all[static_cast<std::size_t>(t)], all[static_cast<std::size_t>(pick)]);
      }
      RequestSet support(std::vector<int>(all.begin(), all.begin() + support_size));

      // Monotone by construction: each subset value is the max over its
      // one-smaller subsets plus a non-negative increment.
      const std::uint32_t masks = std::uint32_t{1} << support.size();
      std::vector<Rational> value_by_mask(masks);
      for (std::uint32_t mask = 1; mask < masks; ++mask) {
        Rational base;
        for (int t = 0; t < support.size(); ++t) {
          const std::uint32_t bit = std::uint32_t{1} << t;
          if (mask & bit) base = std::max(base, value_by_mask[mask ^ bit]);
        }
        value_by_mask[mask] = base + draw.small_rational(5);
      }
      return ProfitFunction::table(std::move(support), std::move(value_by_mask));
    }
  }
  throw std::logic_error("unknown profit kind");
}

}  // namespace detail

/// Deterministic under the seed; equal specs give equal instances.
inline Instance generate_random(const RandomSpec& spec) {
  if (spec.vehicles < 0 || spec.requests < 0) {
    throw std::invalid_argument("random instance: negative dimension");
  }
  if (spec.variants.empty()) {
    throw std::invalid_argument("random instance: at least one profit variant required");
  }
  if (spec.density < 0.0 || spec.density > 1.0) {
    throw std::invalid_argument("random instance: density must lie in [0, 1]");
  }
  detail::Draw draw(spec.seed);

  const auto per_mille = static_cast<std::uint64_t>(std::llround(spec.density * 1000.0));
  FeasibilityMatrix feasibility(spec.vehicles, spec.requests);
  for (int i = 0; i < spec.vehicles; ++i) {
    for (int j = 0; j < spec.requests; ++j) {
      feasibility.set(i, j, draw.below(1000) < per_mille);
    }
  }

  std::vector<ProfitFunction> profits;
  profits.reserve(static_cast<std::size_t>(spec.vehicles));
  for (int i = 0; i < spec.vehicles; ++i) {
    profits.push_back(detail::random_profit(draw, spec.requests, spec.variants));
  }
  return Instance(std::move(profits), std::move(feasibility));
}

/// Random possibly-partial assignment: each request goes to a uniformly
/// random vehicle or stays unassigned. With feasible_only, placements the
/// vehicle cannot serve become unassigned instead.
inline Assignment random_assignment(const Instance& inst, std::uint64_t seed,
                                    bool feasible_only = false) {
  detail::Draw draw(seed);
  Assignment asg = Assignment::empty(inst.vehicle_count());
  for (int j = 0; j < inst.request_count(); ++j) {
    const auto pick = draw.below(static_cast<std::uint64_t>(inst.vehicle_count()) + 1);
    if (pick == static_cast<std::uint64_t>(inst.vehicle_count())) continue;
    const int vehicle = static_cast<int>(pick);
    if (feasible_only && !inst.feasible(vehicle, j)) continue;
    asg.bundles[static_cast<std::size_t>(vehicle)].insert(j);
  }
  return asg;
}

}  // namespace fairfleet
