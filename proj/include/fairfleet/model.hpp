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
#include <array>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fairfleet/rational.hpp"

namespace fairfleet {

/// Set of request indices, kept sorted and duplicate-free.
///
/// Bundles, feasibility restrictions and enumeration states are all small
/// index sets; a sorted vector keeps them value-semantic and deterministic
/// to iterate.
class RequestSet {
 public:
  RequestSet() = default;
  RequestSet(std::initializer_list<int> indices)
      : RequestSet(std::vector<int>(indices)) {}
  explicit RequestSet(std::vector<int> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  }

  bool contains(int j) const {
    return std::binary_search(indices_.begin(), indices_.end(), j);
  }
  bool empty() const { return indices_.empty(); }
  int size() const { return static_cast<int>(indices_.size()); }

  void insert(int j) {
    const auto it = std::lower_bound(indices_.begin(), indices_.end(), j);
    if (it == indices_.end() || *it != j) indices_.insert(it, j);
  }
  void erase(int j) {
    const auto it = std::lower_bound(indices_.begin(), indices_.end(), j);
    if (it != indices_.end() && *it == j) indices_.erase(it);
  }

  RequestSet with(int j) const {
    RequestSet s = *this;
    s.insert(j);
    return s;
  }
  RequestSet without(int j) const {
    RequestSet s = *this;
    s.erase(j);
    return s;
  }
  RequestSet unite(const RequestSet& o) const {
    RequestSet s;
    std::set_union(indices_.begin(), indices_.end(), o.indices_.begin(),
                   o.indices_.end(), std::back_inserter(s.indices_));
    return s;
  }
  RequestSet intersect(const RequestSet& o) const {
    RequestSet s;
    std::set_intersection(indices_.begin(), indices_.end(), o.indices_.begin(),
                          o.indices_.end(), std::back_inserter(s.indices_));
    return s;
  }
  RequestSet minus(const RequestSet& o) const {
    RequestSet s;
    std::set_difference(indices_.begin(), indices_.end(), o.indices_.begin(),
                        o.indices_.end(), std::back_inserter(s.indices_));
    return s;
  }

  const std::vector<int>& indices() const { return indices_; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  friend bool operator==(const RequestSet&, const RequestSet&) = default;

 private:
  std::vector<int> indices_;
};

/// First violated invariant, with the witness that re-triggers it.
struct ValidationIssue {
  std::string message;
  int vehicle = -1;
  int request = -1;
  RequestSet subset;

  ValidationIssue() = default;
  explicit ValidationIssue(std::string msg, int vehicle_witness = -1,
                           int request_witness = -1, RequestSet subset_witness = {})
      : message(std::move(msg)),
        vehicle(vehicle_witness),
        request(request_witness),
        subset(std::move(subset_witness)) {}
};
using ValidationResult = std::optional<ValidationIssue>;

enum class ProfitKind { additive, budget_additive, pair_bonus, table };

inline const char* to_string(ProfitKind kind) {
  switch (kind) {
    case ProfitKind::additive: return "additive";
    case ProfitKind::budget_additive: return "budget_additive";
    case ProfitKind::pair_bonus: return "pair_bonus";
    case ProfitKind::table: return "table";
  }
  throw std::logic_error("unknown profit kind");
}

struct AdditiveProfit {
  std::vector<Rational> per_request;
};

/// Additive up to a cap: value(S) = min(sum, cap). Sub-additive.
struct BudgetAdditiveProfit {
  std::vector<Rational> per_request;
  Rational cap;
};

/// Additive plus a bonus per unordered pair in the bundle:
/// value(S) = sum + pair_bonus * |S|*(|S|-1)/2. Super-additive.
struct PairBonusProfit {
  std::vector<Rational> per_request;
  Rational pair_bonus;
};

/// General monotone set function given by a full table over a small support
/// set. Requests outside the support contribute zero; the table value of
/// S ∩ support is the value of S. value_by_mask[mask] holds the value of the
/// subset whose bit t selects support index t (in sorted support order).
struct TableProfit {
  RequestSet support;
  std::vector<Rational> value_by_mask;
};

inline constexpr int kMaxTableSupport = 16;

/// A driver's monotone profit over bundles of requests. Algorithms only call
/// value() and marginal(): oracle access, never variant internals.
class ProfitFunction {
 public:
  using Payload =
      std::variant<AdditiveProfit, BudgetAdditiveProfit, PairBonusProfit, TableProfit>;

  explicit ProfitFunction(Payload payload) : payload_(std::move(payload)) {
    if (const auto* t = std::get_if<TableProfit>(&payload_)) {
      if (t->support.size() > kMaxTableSupport) {
        throw std::invalid_argument("table profit: support larger than 16 requests");
      }
      const std::size_t want = std::size_t{1} << t->support.size();
      if (t->value_by_mask.size() != want) {
        throw std::invalid_argument("table profit: need one value per support subset");
      }
    }
  }

  static ProfitFunction additive(std::vector<Rational> per_request) {
    return ProfitFunction(AdditiveProfit{std::move(per_request)});
  }
  static ProfitFunction budget_additive(std::vector<Rational> per_request, Rational cap) {
    return ProfitFunction(BudgetAdditiveProfit{std::move(per_request), cap});
  }
  static ProfitFunction pair_bonus(std::vector<Rational> per_request, Rational bonus) {
    return ProfitFunction(PairBonusProfit{std::move(per_request), bonus});
  }
  static ProfitFunction table(RequestSet support, std::vector<Rational> value_by_mask) {
    return ProfitFunction(TableProfit{std::move(support), std::move(value_by_mask)});
  }

  ProfitKind kind() const {
    return static_cast<ProfitKind>(payload_.index());
  }
  const Payload& payload() const { return payload_; }

  /// p(S). Throws std::out_of_range if S refers past an additive vector.
  Rational value(const RequestSet& s) const {
    return std::visit(
        [&](const auto& p) -> Rational { return eval(p, s); }, payload_);
  }

  /// p(S ∪ {j}) − p(S). Requires j ∉ S.
  Rational marginal(const RequestSet& s, int j) const {
    if (s.contains(j)) throw std::invalid_argument("marginal: request already in set");
    return value(s.with(j)) - value(s);
  }

  /// Every rational in the payload, for denominator scans.
  std::vector<Rational> payload_values() const {
    std::vector<Rational> out;
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, AdditiveProfit>) {
            out = p.per_request;
          } else if constexpr (std::is_same_v<T, BudgetAdditiveProfit>) {
            out = p.per_request;
            out.push_back(p.cap);
          } else if constexpr (std::is_same_v<T, PairBonusProfit>) {
            out = p.per_request;
            out.push_back(p.pair_bonus);
          } else {
            out = p.value_by_mask;
          }
        },
        payload_);
    return out;
  }

  /// Checks monotonicity, p(∅)=0, non-negativity and dimension bounds.
  /// Table monotonicity is checked exhaustively over the support lattice.
  ValidationResult validate(int request_count) const;

 private:
  static Rational eval(const AdditiveProfit& p, const RequestSet& s) {
    Rational total;
    for (int j : s) total += p.per_request.at(static_cast<std::size_t>(j));
    return total;
  }
  static Rational eval(const BudgetAdditiveProfit& p, const RequestSet& s) {
    Rational total;
    for (int j : s) total += p.per_request.at(static_cast<std::size_t>(j));
    return std::min(total, p.cap);
  }
  static Rational eval(const PairBonusProfit& p, const RequestSet& s) {
    Rational total;
    for (int j : s) total += p.per_request.at(static_cast<std::size_t>(j));
    const std::int64_t k = s.size();
    return total + p.pair_bonus * Rational(k * (k - 1) / 2);
  }
  static Rational eval(const TableProfit& p, const RequestSet& s) {
    std::uint32_t mask = 0;
    const auto& sup = p.support.indices();
    for (std::size_t t = 0; t < sup.size(); ++t) {
      if (s.contains(sup[t])) mask |= std::uint32_t{1} << t;
    }
    return p.value_by_mask[mask];
  }

  Payload payload_;
};

/// Binary vehicle-by-request feasibility indicators.
class FeasibilityMatrix {
 public:
  FeasibilityMatrix() = default;
  FeasibilityMatrix(int vehicles, int requests, bool fill = false)
      : vehicles_(vehicles), requests_(requests) {
    if (vehicles < 0 || requests < 0) {
      throw std::invalid_argument("feasibility matrix: negative dimension");
    }
    cells_.assign(static_cast<std::size_t>(vehicles) * requests, fill ? 1 : 0);
  }

  /// Builds from explicit 0/1 rows; any other entry value is rejected.
  /// `requests` disambiguates the column count when there are no rows.
  static FeasibilityMatrix from_rows(const std::vector<std::vector<int>>& rows,
                                     int requests = -1) {
    const int n = static_cast<int>(rows.size());
    const int m = n > 0 ? static_cast<int>(rows.front().size())
                        : std::max(requests, 0);
    FeasibilityMatrix f(n, m);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[i].size()) != m) {
        throw std::invalid_argument("feasibility matrix: ragged rows");
      }
      for (int j = 0; j < m; ++j) {
        if (rows[i][j] != 0 && rows[i][j] != 1) {
          throw std::invalid_argument("feasibility matrix: entries must be 0 or 1");
        }
        f.set(i, j, rows[i][j] == 1);
      }
    }
    return f;
  }

  int vehicle_count() const { return vehicles_; }
  int request_count() const { return requests_; }

  bool at(int i, int j) const {
    check_bounds(i, j);
    return cells_[static_cast<std::size_t>(i) * requests_ + j] != 0;
  }
  void set(int i, int j, bool feasible) {
    check_bounds(i, j);
    cells_[static_cast<std::size_t>(i) * requests_ + j] = feasible ? 1 : 0;
  }

  friend bool operator==(const FeasibilityMatrix&, const FeasibilityMatrix&) = default;

 private:
  void check_bounds(int i, int j) const {
    if (i < 0 || i >= vehicles_ || j < 0 || j >= requests_) {
      throw std::out_of_range("feasibility matrix: index out of range");
    }
  }

  int vehicles_ = 0;
  int requests_ = 0;
  std::vector<std::uint8_t> cells_;
};

inline FeasibilityMatrix unit_feasibility(int vehicles, int requests) {
  return FeasibilityMatrix(vehicles, requests, true);
}

/// Raw constraint data that compiles down to a FeasibilityMatrix: 1-D
/// capacity versus demand, and optionally 3-D bay versus package dimensions.
struct ConstraintSpec {
  std::vector<Rational> capacities;  // one per vehicle
  std::vector<Rational> demands;     // one per request
  // Present together or not at all.
  std::optional<std::vector<std::array<Rational, 3>>> bays;      // per vehicle
  std::optional<std::vector<std::array<Rational, 3>>> packages;  // per request

  ValidationResult validate() const {
    if (bays.has_value() != packages.has_value()) {
      return ValidationIssue{"constraint spec: 3-D bays and packages must be given together"};
    }
    if (bays && static_cast<int>(bays->size()) != static_cast<int>(capacities.size())) {
      return ValidationIssue{"constraint spec: one bay triple per vehicle required"};
    }
    if (packages && static_cast<int>(packages->size()) != static_cast<int>(demands.size())) {
      return ValidationIssue{"constraint spec: one package triple per request required"};
    }
    for (std::size_t i = 0; i < capacities.size(); ++i) {
      if (capacities[i].is_negative()) {
        return ValidationIssue{"constraint spec: negative capacity", static_cast<int>(i)};
      }
    }
    for (std::size_t j = 0; j < demands.size(); ++j) {
      if (demands[j].is_negative()) {
        return ValidationIssue{"constraint spec: negative demand", -1, static_cast<int>(j)};
      }
    }
    const auto any_negative = [](const std::array<Rational, 3>& d) {
      return d[0].is_negative() || d[1].is_negative() || d[2].is_negative();
    };
    if (bays) {
      for (std::size_t i = 0; i < bays->size(); ++i) {
        if (any_negative((*bays)[i])) {
          return ValidationIssue{"constraint spec: negative bay dimension",
                                 static_cast<int>(i)};
        }
      }
    }
    if (packages) {
      for (std::size_t j = 0; j < packages->size(); ++j) {
        if (any_negative((*packages)[j])) {
          return ValidationIssue{"constraint spec: negative package dimension", -1,
                                 static_cast<int>(j)};
        }
      }
    }
    return std::nullopt;
  }
};

/// f_ij = 1 iff demand_j ≤ capacity_i and, when 3-D data is present, the
/// package's sorted dimension triple fits the bay's sorted triple
/// component-wise (rotation allowed, no tilting).
inline FeasibilityMatrix compile_feasibility(const ConstraintSpec& spec) {
  if (auto issue = spec.validate()) {
    throw std::invalid_argument(issue->message);
  }
  const int n = static_cast<int>(spec.capacities.size());
  const int m = static_cast<int>(spec.demands.size());
  const auto sorted = [](std::array<Rational, 3> d) {
    std::sort(d.begin(), d.end());
    return d;
  };
  FeasibilityMatrix f(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      bool ok = spec.demands[j] <= spec.capacities[i];
      if (ok && spec.bays) {
        const auto bay = sorted((*spec.bays)[i]);
        const auto pkg = sorted((*spec.packages)[j]);
        ok = pkg[0] <= bay[0] && pkg[1] <= bay[1] && pkg[2] <= bay[2];
      }
      f.set(i, j, ok);
    }
  }
  return f;
}

/// Disjoint bundles of request indices, one per vehicle. May be partial:
/// a request appearing in no bundle is unassigned.
struct Assignment {
  std::vector<RequestSet> bundles;

  static Assignment empty(int vehicle_count) {
    Assignment a;
    a.bundles.resize(static_cast<std::size_t>(vehicle_count));
    return a;
  }

  int vehicle_count() const { return static_cast<int>(bundles.size()); }

  /// Vehicle holding request j, if any.
  std::optional<int> assignee(int j) const {
    for (int i = 0; i < vehicle_count(); ++i) {
      if (bundles[static_cast<std::size_t>(i)].contains(j)) return i;
    }
    return std::nullopt;
  }

  ValidationResult validate(int vehicle_count, int request_count) const {
    if (static_cast<int>(bundles.size()) != vehicle_count) {
      return ValidationIssue{"assignment: expected one bundle per vehicle"};
    }
    std::vector<int> owner(static_cast<std::size_t>(request_count), -1);
    for (int i = 0; i < vehicle_count; ++i) {
      for (int j : bundles[static_cast<std::size_t>(i)]) {
        if (j < 0 || j >= request_count) {
          return ValidationIssue{"assignment: request index out of range", i, j};
        }
        if (owner[static_cast<std::size_t>(j)] >= 0) {
          return ValidationIssue{"assignment: request assigned twice",
                                 owner[static_cast<std::size_t>(j)], j};
        }
        owner[static_cast<std::size_t>(j)] = i;
      }
    }
    return std::nullopt;
  }

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// The full problem data: one monotone profit function per driver plus the
/// vehicle-by-request feasibility indicators. Immutable after construction;
/// share freely across threads.
class Instance {
 public:
  Instance() = default;
  Instance(std::vector<ProfitFunction> profits, FeasibilityMatrix feasibility,
           std::map<std::string, std::string> metadata = {})
      : profits_(std::move(profits)),
        feasibility_(std::move(feasibility)),
        metadata_(std::move(metadata)) {
    if (static_cast<int>(profits_.size()) != feasibility_.vehicle_count()) {
      throw std::invalid_argument("instance: one profit function per vehicle required");
    }
  }

  int vehicle_count() const { return feasibility_.vehicle_count(); }
  int request_count() const { return feasibility_.request_count(); }

  const ProfitFunction& profit(int i) const {
    return profits_.at(static_cast<std::size_t>(i));
  }
  const std::vector<ProfitFunction>& profits() const { return profits_; }
  const FeasibilityMatrix& feasibility() const { return feasibility_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }

  bool feasible(int i, int j) const { return feasibility_.at(i, j); }

  /// True iff some vehicle can service request j.
  bool servable(int j) const {
    for (int i = 0; i < vehicle_count(); ++i) {
      if (feasibility_.at(i, j)) return true;
    }
    return false;
  }

  RequestSet servable_requests() const {
    RequestSet s;
    for (int j = 0; j < request_count(); ++j) {
      if (servable(j)) s.insert(j);
    }
    return s;
  }

  /// {j ∈ S | f_ij = 1}: the part of S vehicle i can actually service.
  RequestSet feasible_subset(int i, const RequestSet& s) const {
    RequestSet out;
    for (int j : s) {
      if (feasibility_.at(i, j)) out.insert(j);
    }
    return out;
  }

  /// All requests vehicle i can service.
  RequestSet feasible_set(int i) const {
    RequestSet out;
    for (int j = 0; j < request_count(); ++j) {
      if (feasibility_.at(i, j)) out.insert(j);
    }
    return out;
  }

  /// p_i(S), with S range-checked against this instance.
  Rational value(int i, const RequestSet& s) const {
    check_set(s);
    return profit(i).value(s);
  }

  /// p_i(S ∪ {j}) − p_i(S). Requires j ∉ S.
  Rational marginal(int i, const RequestSet& s, int j) const {
    check_set(s);
    check_request(j);
    return profit(i).marginal(s, j);
  }

  ValidationResult validate() const {
    for (int i = 0; i < vehicle_count(); ++i) {
      if (auto issue = profits_[static_cast<std::size_t>(i)].validate(request_count())) {
        issue->vehicle = i;
        return issue;
      }
    }
    return std::nullopt;
  }

 private:
  void check_request(int j) const {
    if (j < 0 || j >= request_count()) {
      throw std::out_of_range("instance: request index out of range");
    }
  }
  void check_set(const RequestSet& s) const {
    if (!s.empty() &&
        (s.indices().front() < 0 || s.indices().back() >= request_count())) {
      throw std::out_of_range("instance: request index out of range");
    }
  }

  std::vector<ProfitFunction> profits_;
  FeasibilityMatrix feasibility_;
  std::map<std::string, std::string> metadata_;
};

inline ValidationResult ProfitFunction::validate(int request_count) const {
  const auto check_vector = [&](const std::vector<Rational>& values,
                                const char* what) -> ValidationResult {
    if (static_cast<int>(values.size()) != request_count) {
      return ValidationIssue{std::string(what) + ": need one value per request"};
    }
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (values[j].is_negative()) {
        return ValidationIssue{std::string(what) + ": negative per-request profit", -1,
                               static_cast<int>(j)};
      }
    }
    return std::nullopt;
  };

  switch (kind()) {
    case ProfitKind::additive:
      return check_vector(std::get<AdditiveProfit>(payload_).per_request, "additive profit");
    case ProfitKind::budget_additive: {
      const auto& p = std::get<BudgetAdditiveProfit>(payload_);
      if (auto issue = check_vector(p.per_request, "budget-additive profit")) return issue;
      if (p.cap.is_negative()) {
        return ValidationIssue{"budget-additive profit: negative cap"};
      }
      return std::nullopt;
    }
    case ProfitKind::pair_bonus: {
      const auto& p = std::get<PairBonusProfit>(payload_);
      if (auto issue = check_vector(p.per_request, "pair-bonus profit")) return issue;
      if (p.pair_bonus.is_negative()) {
        return ValidationIssue{"pair-bonus profit: negative pair bonus"};
      }
      return std::nullopt;
    }
    case ProfitKind::table: {
      const auto& p = std::get<TableProfit>(payload_);
      const auto& sup = p.support.indices();
      if (!sup.empty() && (sup.front() < 0 || sup.back() >= request_count)) {
        return ValidationIssue{"table profit: support index out of range", -1,
                               sup.empty() ? -1 : sup.back()};
      }
      if (!p.value_by_mask[0].is_zero()) {
        return ValidationIssue{"table profit: empty set must have value 0"};
      }
      const auto subset_of = [&](std::uint32_t mask) {
        RequestSet s;
        for (std::size_t t = 0; t < sup.size(); ++t) {
          if (mask & (std::uint32_t{1} << t)) s.insert(sup[t]);
        }
        return s;
      };
      const std::uint32_t masks = std::uint32_t{1} << sup.size();
      for (std::uint32_t mask = 0; mask < masks; ++mask) {
        if (p.value_by_mask[mask].is_negative()) {
          return ValidationIssue{"table profit: negative value", -1, -1, subset_of(mask)};
        }
        for (std::size_t t = 0; t < sup.size(); ++t) {
          const std::uint32_t bit = std::uint32_t{1} << t;
          if (mask & bit) continue;
          if (p.value_by_mask[mask | bit] < p.value_by_mask[mask]) {
            return ValidationIssue{"table profit: not monotone", -1, sup[t],
                                   subset_of(mask)};
          }
        }
      }
      return std::nullopt;
    }
  }
  throw std::logic_error("unknown profit kind");
}

}  // namespace fairfleet
