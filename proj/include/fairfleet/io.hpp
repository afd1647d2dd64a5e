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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fairfleet/algorithms.hpp"
#include "fairfleet/fairness.hpp"
#include "fairfleet/model.hpp"

namespace fairfleet {

// All documents share one canonical text form: JSON with keys sorted
// (nlohmann's default object ordering) and no insignificant whitespace.
// Serializing any parsed canonical document reproduces it byte for byte,
// which keeps golden files and diffs stable.

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationIssue issue)
      : std::runtime_error(issue.message), issue_(std::move(issue)) {}
  const ValidationIssue& issue() const { return issue_; }

 private:
  ValidationIssue issue_;
};

namespace io_detail {

inline json parse_json(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ParseError("malformed JSON document");
  return doc;
}

inline const json& field(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  return *it;
}

inline int int_field(const json& doc, const char* key) {
  const json& v = field(doc, key);
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw ParseError(std::string("field '") + key + "' must be an integer");
  }
  return v.get<int>();
}

}  // namespace io_detail

/// Canonical rational encoding: a bare integer when the denominator is 1,
/// otherwise the string "numerator/denominator". Floats are rejected — the
/// formats are exact end to end.
inline json rational_to_json(const Rational& r) {
  if (r.is_integer()) return json(r.numerator());
  return json(r.str());
}

inline Rational rational_from_json(const json& v) {
  if (v.is_number_integer() || v.is_number_unsigned()) {
    return Rational(v.get<std::int64_t>());
  }
  if (v.is_string()) {
    try {
      return Rational::parse(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }
  throw ParseError("rational values must be integers or \"a/b\" strings");
}

inline json request_set_to_json(const RequestSet& s) {
  return json(s.indices());
}

inline RequestSet request_set_from_json(const json& v) {
  if (!v.is_array()) throw ParseError("request set must be an array of indices");
  std::vector<int> indices;
  for (const json& e : v) {
    if (!e.is_number_integer() && !e.is_number_unsigned()) {
      throw ParseError("request indices must be integers");
    }
    indices.push_back(e.get<int>());
  }
  return RequestSet(std::move(indices));
}

inline json profit_to_json(const ProfitFunction& pf) {
  json out;
  out["type"] = to_string(pf.kind());
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AdditiveProfit>) {
          json values = json::array();
          for (const auto& r : p.per_request) values.push_back(rational_to_json(r));
          out["values"] = std::move(values);
        } else if constexpr (std::is_same_v<T, BudgetAdditiveProfit>) {
          json values = json::array();
          for (const auto& r : p.per_request) values.push_back(rational_to_json(r));
          out["values"] = std::move(values);
          out["cap"] = rational_to_json(p.cap);
        } else if constexpr (std::is_same_v<T, PairBonusProfit>) {
          json values = json::array();
          for (const auto& r : p.per_request) values.push_back(rational_to_json(r));
          out["values"] = std::move(values);
          out["pair_bonus"] = rational_to_json(p.pair_bonus);
        } else {
          out["support"] = json(p.support.indices());
          json entries = json::array();
          const auto& sup = p.support.indices();
          for (std::uint32_t mask = 0; mask < p.value_by_mask.size(); ++mask) {
            std::vector<int> subset;
            for (std::size_t t = 0; t < sup.size(); ++t) {
              if (mask & (std::uint32_t{1} << t)) subset.push_back(sup[t]);
            }
            json entry;
            entry["set"] = json(subset);
            entry["value"] = rational_to_json(p.value_by_mask[mask]);
            entries.push_back(std::move(entry));
          }
          out["entries"] = std::move(entries);
        }
      },
      pf.payload());
  return out;
}

inline ProfitFunction profit_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("profit block must be an object");
  const json& type = io_detail::field(doc, "type");
  if (!type.is_string()) throw ParseError("profit 'type' must be a string");
  const std::string kind = type.get<std::string>();

  const auto values_of = [&](const json& d) {
    const json& values = io_detail::field(d, "values");
    if (!values.is_array()) throw ParseError("profit 'values' must be an array");
    std::vector<Rational> out;
    out.reserve(values.size());
    for (const json& v : values) out.push_back(rational_from_json(v));
    return out;
  };

  if (kind == "additive") {
    return ProfitFunction::additive(values_of(doc));
  }
  if (kind == "budget_additive") {
    return ProfitFunction::budget_additive(
        values_of(doc), rational_from_json(io_detail::field(doc, "cap")));
  }
  if (kind == "pair_bonus") {
    return ProfitFunction::pair_bonus(
        values_of(doc), rational_from_json(io_detail::field(doc, "pair_bonus")));
  }
  if (kind == "table") {
    const RequestSet support = request_set_from_json(io_detail::field(doc, "support"));
    if (support.size() > kMaxTableSupport) {
      throw ParseError("table profit: support larger than 16 requests");
    }
    const json& entries = io_detail::field(doc, "entries");
    if (!entries.is_array()) throw ParseError("table profit 'entries' must be an array");
    const std::size_t masks = std::size_t{1} << support.size();
    std::vector<Rational> value_by_mask(masks);
    std::vector<char> seen(masks, 0);
    const auto& sup = support.indices();
    for (const json& entry : entries) {
      const RequestSet subset = request_set_from_json(io_detail::field(entry, "set"));
      std::uint32_t mask = 0;
      for (int j : subset) {
        const auto it = std::lower_bound(sup.begin(), sup.end(), j);
        if (it == sup.end() || *it != j) {
          throw ParseError("table profit: entry set outside the support");
        }
        mask |= std::uint32_t{1} << (it - sup.begin());
      }
      if (seen[mask]) throw ParseError("table profit: duplicate entry for a subset");
      seen[mask] = 1;
      value_by_mask[mask] = rational_from_json(io_detail::field(entry, "value"));
    }
    for (std::size_t mask = 0; mask < masks; ++mask) {
      if (!seen[mask]) {
        throw ParseError("table profit: missing entry for a support subset");
      }
    }
    return ProfitFunction::table(support, std::move(value_by_mask));
  }
  throw ParseError("unknown profit type '" + kind + "'");
}

inline json constraint_spec_to_json(const ConstraintSpec& spec) {
  json out;
  json capacities = json::array();
  for (const auto& c : spec.capacities) capacities.push_back(rational_to_json(c));
  out["capacities"] = std::move(capacities);
  json demands = json::array();
  for (const auto& d : spec.demands) demands.push_back(rational_to_json(d));
  out["demands"] = std::move(demands);
  const auto triples_to_json = [](const std::vector<std::array<Rational, 3>>& triples) {
    json arr = json::array();
    for (const auto& t : triples) {
      arr.push_back(json::array(
          {rational_to_json(t[0]), rational_to_json(t[1]), rational_to_json(t[2])}));
    }
    return arr;
  };
  if (spec.bays) out["bays"] = triples_to_json(*spec.bays);
  if (spec.packages) out["packages"] = triples_to_json(*spec.packages);
  return out;
}

inline ConstraintSpec constraint_spec_from_json(const json& doc) {
  ConstraintSpec spec;
  const auto rationals_of = [&](const json& arr, const char* what) {
    if (!arr.is_array()) throw ParseError(std::string(what) + " must be an array");
    std::vector<Rational> out;
    for (const json& v : arr) out.push_back(rational_from_json(v));
    return out;
  };
  spec.capacities = rationals_of(io_detail::field(doc, "capacities"), "'capacities'");
  spec.demands = rationals_of(io_detail::field(doc, "demands"), "'demands'");
  const auto triples_of = [&](const json& arr, const char* what) {
    if (!arr.is_array()) throw ParseError(std::string(what) + " must be an array");
    std::vector<std::array<Rational, 3>> out;
    for (const json& t : arr) {
      if (!t.is_array() || t.size() != 3) {
        throw ParseError(std::string(what) + " entries must be triples");
      }
      out.push_back({rational_from_json(t[0]), rational_from_json(t[1]),
                     rational_from_json(t[2])});
    }
    return out;
  };
  if (doc.contains("bays")) spec.bays = triples_of(doc["bays"], "'bays'");
  if (doc.contains("packages")) spec.packages = triples_of(doc["packages"], "'packages'");
  return spec;
}

inline json instance_to_json(const Instance& inst) {
  json out;
  out["schema"] = kSchemaVersion;
  out["n"] = inst.vehicle_count();
  out["m"] = inst.request_count();
  json profits = json::array();
  for (int i = 0; i < inst.vehicle_count(); ++i) {
    profits.push_back(profit_to_json(inst.profit(i)));
  }
  out["profits"] = std::move(profits);
  json matrix = json::array();
  for (int i = 0; i < inst.vehicle_count(); ++i) {
    json row = json::array();
    for (int j = 0; j < inst.request_count(); ++j) {
      row.push_back(inst.feasible(i, j) ? 1 : 0);
    }
    matrix.push_back(std::move(row));
  }
  out["feasibility"] = json{{"matrix", std::move(matrix)}};
  if (!inst.metadata().empty()) out["metadata"] = json(inst.metadata());
  return out;
}

/// Builds and validates an Instance from its document. A "constraints"
/// feasibility block is compiled to the explicit matrix, which is also what
/// serialization emits: the canonical form always carries the matrix.
inline Instance instance_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("instance document must be an object");
  const int n = io_detail::int_field(doc, "n");
  const int m = io_detail::int_field(doc, "m");
  if (n < 0 || m < 0) throw ParseError("instance dimensions must be non-negative");

  const json& profit_blocks = io_detail::field(doc, "profits");
  if (!profit_blocks.is_array() || static_cast<int>(profit_blocks.size()) != n) {
    throw ParseError("'profits' must list exactly n profit blocks");
  }
  std::vector<ProfitFunction> profits;
  profits.reserve(profit_blocks.size());
  for (const json& block : profit_blocks) profits.push_back(profit_from_json(block));

  const json& feas = io_detail::field(doc, "feasibility");
  FeasibilityMatrix matrix;
  if (feas.contains("matrix")) {
    const json& rows = feas["matrix"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
      throw ParseError("feasibility matrix must have one row per vehicle");
    }
    std::vector<std::vector<int>> raw;
    raw.reserve(rows.size());
    for (const json& row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != m) {
        throw ParseError("feasibility matrix rows must have one entry per request");
      }
      std::vector<int> r;
      for (const json& cell : row) {
        if (!cell.is_number_integer() && !cell.is_number_unsigned()) {
          throw ParseError("feasibility entries must be integers");
        }
        r.push_back(cell.get<int>());
      }
      raw.push_back(std::move(r));
    }
    try {
      matrix = FeasibilityMatrix::from_rows(raw, m);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  } else if (feas.contains("constraints")) {
    const ConstraintSpec spec = constraint_spec_from_json(feas["constraints"]);
    if (static_cast<int>(spec.capacities.size()) != n ||
        static_cast<int>(spec.demands.size()) != m) {
      throw ParseError("constraint spec dimensions must match n and m");
    }
    if (auto issue = spec.validate()) throw ValidationError(*issue);
    matrix = compile_feasibility(spec);
  } else {
    throw ParseError("feasibility block needs 'matrix' or 'constraints'");
  }

  std::map<std::string, std::string> metadata;
  if (doc.contains("metadata")) {
    const json& meta = doc["metadata"];
    if (!meta.is_object()) throw ParseError("'metadata' must be an object");
    for (const auto& [key, value] : meta.items()) {
      if (!value.is_string()) throw ParseError("metadata values must be strings");
      metadata.emplace(key, value.get<std::string>());
    }
  }

  Instance inst;
  try {
    inst = Instance(std::move(profits), std::move(matrix), std::move(metadata));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  if (auto issue = inst.validate()) throw ValidationError(*issue);
  return inst;
}

inline json assignment_to_json(const Assignment& asg) {
  json out;
  out["schema"] = kSchemaVersion;
  json bundles = json::array();
  for (const RequestSet& bundle : asg.bundles) {
    bundles.push_back(request_set_to_json(bundle));
  }
  out["bundles"] = std::move(bundles);
  return out;
}

inline Assignment assignment_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("assignment document must be an object");
  const json& bundles = io_detail::field(doc, "bundles");
  if (!bundles.is_array()) throw ParseError("'bundles' must be an array of index arrays");
  Assignment asg;
  for (const json& bundle : bundles) {
    asg.bundles.push_back(request_set_from_json(bundle));
  }
  return asg;
}

inline json pair_witness_to_json(const PairWitness& w) {
  json out;
  out["viewer"] = w.viewer;
  out["owner"] = w.owner;
  out["viewer_value"] = rational_to_json(w.viewer_value);
  out["owner_value"] = rational_to_json(w.owner_bundle_value);
  out["best_removal_value"] = rational_to_json(w.best_removal_value);
  return out;
}

inline PairWitness pair_witness_from_json(const json& doc) {
  PairWitness w;
  w.viewer = io_detail::int_field(doc, "viewer");
  w.owner = io_detail::int_field(doc, "owner");
  w.viewer_value = rational_from_json(io_detail::field(doc, "viewer_value"));
  w.owner_bundle_value = rational_from_json(io_detail::field(doc, "owner_value"));
  w.best_removal_value = rational_from_json(io_detail::field(doc, "best_removal_value"));
  return w;
}

inline json fairness_report_to_json(const FairnessReport& report) {
  json out;
  out["feasible"] = report.feasible;
  out["complete"] = report.complete;
  out["eq1"] = report.eq1;
  out["ef1"] = report.ef1;
  out["feq1"] = report.feq1;
  out["fef1"] = report.fef1;

  json witnesses;
  json feas = json::array();
  for (const auto& w : report.feasibility_witnesses) {
    feas.push_back(json{{"vehicle", w.vehicle}, {"request", w.request}});
  }
  witnesses["feasible"] = std::move(feas);
  json comp = json::array();
  for (const auto& w : report.completeness_witnesses) {
    comp.push_back(json{{"request", w.request}, {"assigned_to", w.assigned_to}});
  }
  witnesses["complete"] = std::move(comp);
  const auto pack = [](const std::vector<PairWitness>& ws) {
    json arr = json::array();
    for (const auto& w : ws) arr.push_back(pair_witness_to_json(w));
    return arr;
  };
  witnesses["eq1"] = pack(report.eq1_witnesses);
  witnesses["ef1"] = pack(report.ef1_witnesses);
  witnesses["feq1"] = pack(report.feq1_witnesses);
  witnesses["fef1"] = pack(report.fef1_witnesses);
  out["witnesses"] = std::move(witnesses);
  return out;
}

inline FairnessReport fairness_report_from_json(const json& doc) {
  FairnessReport report;
  const auto bool_field = [&](const char* key) {
    const json& v = io_detail::field(doc, key);
    if (!v.is_boolean()) throw ParseError(std::string("field '") + key + "' must be a bool");
    return v.get<bool>();
  };
  report.feasible = bool_field("feasible");
  report.complete = bool_field("complete");
  report.eq1 = bool_field("eq1");
  report.ef1 = bool_field("ef1");
  report.feq1 = bool_field("feq1");
  report.fef1 = bool_field("fef1");

  const json& witnesses = io_detail::field(doc, "witnesses");
  for (const json& w : io_detail::field(witnesses, "feasible")) {
    report.feasibility_witnesses.push_back(
        {io_detail::int_field(w, "vehicle"), io_detail::int_field(w, "request")});
  }
  for (const json& w : io_detail::field(witnesses, "complete")) {
    report.completeness_witnesses.push_back(
        {io_detail::int_field(w, "request"), io_detail::int_field(w, "assigned_to")});
  }
  const auto unpack = [&](const char* key, std::vector<PairWitness>& out) {
    for (const json& w : io_detail::field(witnesses, key)) {
      out.push_back(pair_witness_from_json(w));
    }
  };
  unpack("eq1", report.eq1_witnesses);
  unpack("ef1", report.ef1_witnesses);
  unpack("feq1", report.feq1_witnesses);
  unpack("fef1", report.fef1_witnesses);
  return report;
}

/// The serializable slice of a RoundTrace: everything except the bundle
/// snapshot, which exists for in-process invariant audits only.
struct RoundSummary {
  int round = 0;
  std::optional<int> request;
  int driver = -1;
  bool retired = false;
  std::vector<std::vector<int>> pre_pick_cycles;
  std::vector<std::vector<int>> cycles;
  RequestSet returned;
  Rational welfare;

  static RoundSummary from_trace(const RoundTrace& t) {
    return {t.round, t.request, t.driver, t.retired, t.pre_pick_cycles,
            t.cycles, t.returned, t.welfare};
  }

  friend bool operator==(const RoundSummary&, const RoundSummary&) = default;
};

/// Self-contained run record: the assignment, its full fairness report and
/// the instance hash make every claim re-verifiable offline.
struct RunReport {
  std::string algorithm;  // "feq1" or "fef1"
  Assignment assignment;
  FairnessReport fairness;
  std::vector<RoundSummary> rounds;
  std::uint64_t round_count = 0;
  std::uint64_t wall_micros = 0;
  std::string instance_hash;
};

inline json round_summary_to_json(const RoundSummary& r) {
  json out;
  out["round"] = r.round;
  out["request"] = r.request ? json(*r.request) : json(nullptr);
  out["driver"] = r.driver;
  out["retired"] = r.retired;
  out["pre_pick_cycles"] = json(r.pre_pick_cycles);
  out["cycles"] = json(r.cycles);
  out["returned"] = request_set_to_json(r.returned);
  out["welfare"] = rational_to_json(r.welfare);
  return out;
}

inline RoundSummary round_summary_from_json(const json& doc) {
  RoundSummary r;
  r.round = io_detail::int_field(doc, "round");
  const json& request = io_detail::field(doc, "request");
  if (!request.is_null()) r.request = request.get<int>();
  r.driver = io_detail::int_field(doc, "driver");
  r.retired = io_detail::field(doc, "retired").get<bool>();
  r.pre_pick_cycles = io_detail::field(doc, "pre_pick_cycles")
                          .get<std::vector<std::vector<int>>>();
  r.cycles = io_detail::field(doc, "cycles").get<std::vector<std::vector<int>>>();
  r.returned = request_set_from_json(io_detail::field(doc, "returned"));
  r.welfare = rational_from_json(io_detail::field(doc, "welfare"));
  return r;
}

inline json run_report_to_json(const RunReport& report) {
  json out;
  out["schema"] = kSchemaVersion;
  out["algorithm"] = report.algorithm;
  out["assignment"] = assignment_to_json(report.assignment);
  out["fairness"] = fairness_report_to_json(report.fairness);
  json rounds = json::array();
  for (const auto& r : report.rounds) rounds.push_back(round_summary_to_json(r));
  out["rounds"] = std::move(rounds);
  out["round_count"] = report.round_count;
  out["wall_micros"] = report.wall_micros;
  out["instance_hash"] = report.instance_hash;
  return out;
}

inline RunReport run_report_from_json(const json& doc) {
  RunReport report;
  report.algorithm = io_detail::field(doc, "algorithm").get<std::string>();
  report.assignment = assignment_from_json(io_detail::field(doc, "assignment"));
  report.fairness = fairness_report_from_json(io_detail::field(doc, "fairness"));
  for (const json& r : io_detail::field(doc, "rounds")) {
    report.rounds.push_back(round_summary_from_json(r));
  }
  report.round_count = io_detail::field(doc, "round_count").get<std::uint64_t>();
  report.wall_micros = io_detail::field(doc, "wall_micros").get<std::uint64_t>();
  report.instance_hash = io_detail::field(doc, "instance_hash").get<std::string>();
  return report;
}

// --- canonical text forms ---

inline std::string serialize_instance(const Instance& inst) {
  return instance_to_json(inst).dump();
}
inline Instance parse_instance(const std::string& text) {
  return instance_from_json(io_detail::parse_json(text));
}

inline std::string serialize_assignment(const Assignment& asg) {
  return assignment_to_json(asg).dump();
}
inline Assignment parse_assignment(const std::string& text) {
  return assignment_from_json(io_detail::parse_json(text));
}

inline std::string serialize_fairness_report(const FairnessReport& report) {
  return fairness_report_to_json(report).dump();
}
inline FairnessReport parse_fairness_report(const std::string& text) {
  return fairness_report_from_json(io_detail::parse_json(text));
}

inline std::string serialize_run_report(const RunReport& report) {
  return run_report_to_json(report).dump();
}
inline RunReport parse_run_report(const std::string& text) {
  return run_report_from_json(io_detail::parse_json(text));
}

/// FNV-1a 64 over the canonical serialization, as 16 hex digits. Stable
/// across platforms, so reports can pin the instance they ran on.
inline std::string instance_hash(const Instance& inst) {
  const std::string text = serialize_instance(inst);
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int t = 15; t >= 0; --t) {
    out[static_cast<std::size_t>(t)] = hex[h & 0xF];
    h >>= 4;
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// Writes via a temp file plus rename so readers never see a torn file.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace fairfleet
