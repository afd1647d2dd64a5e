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

#include <chrono>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairfleet/algorithms.hpp"
#include "fairfleet/exact.hpp"
#include "fairfleet/fixtures.hpp"
#include "fairfleet/generator.hpp"
#include "fairfleet/io.hpp"

namespace fairfleet::cli {

// Exit codes: 0 success, 1 predicate failure, 2 usage/parse error,
// 3 enumeration budget breach. Machine-readable errors go to the error
// stream as one JSON object per line.
inline constexpr int kOk = 0;
inline constexpr int kPredicateFailure = 1;
inline constexpr int kUsageError = 2;
inline constexpr int kBudgetBreach = 3;

namespace cli_detail {

inline void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text << '\n';
  } else {
    atomic_write(out_path, text + "\n");
  }
}

inline void emit_error(std::ostream& err, int code, const std::string& message) {
  err << json{{"error", message}, {"exit_code", code}}.dump() << '\n';
}

inline Instance load_instance(const std::string& path) {
  return parse_instance(read_file(path));
}

inline std::vector<ProfitKind> parse_variants(const std::string& text) {
  std::vector<ProfitKind> kinds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "additive") {
      kinds.push_back(ProfitKind::additive);
    } else if (item == "budget_additive" || item == "budget") {
      kinds.push_back(ProfitKind::budget_additive);
    } else if (item == "pair_bonus" || item == "bonus") {
      kinds.push_back(ProfitKind::pair_bonus);
    } else if (item == "table") {
      kinds.push_back(ProfitKind::table);
    } else {
      throw std::invalid_argument("unknown profit variant '" + item + "'");
    }
  }
  if (kinds.empty()) throw std::invalid_argument("no profit variants given");
  return kinds;
}

struct SuiteSpec {
  int count = 200;
  int max_vehicles = 5;
  int max_requests = 12;
  std::uint64_t seed = 1;
  std::vector<double> densities = {0.3, 0.7, 1.0};
  std::vector<ProfitKind> variants = {ProfitKind::additive, ProfitKind::budget_additive,
                                      ProfitKind::pair_bonus, ProfitKind::table};
};

// "count=200;maxn=5;maxm=12;seed=1;densities=0.3,0.7,1.0;variants=additive,table"
inline SuiteSpec parse_suite_spec(const std::string& text) {
  SuiteSpec spec;
  std::stringstream ss(text);
  std::string pair;
  while (std::getline(ss, pair, ';')) {
    if (pair.empty()) continue;
    const auto eq = pair.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("suite spec entries must look like key=value");
    }
    const std::string key = pair.substr(0, eq);
    const std::string value = pair.substr(eq + 1);
    if (key == "count") {
      spec.count = std::stoi(value);
    } else if (key == "maxn") {
      spec.max_vehicles = std::stoi(value);
    } else if (key == "maxm") {
      spec.max_requests = std::stoi(value);
    } else if (key == "seed") {
      spec.seed = std::stoull(value);
    } else if (key == "densities") {
      spec.densities.clear();
      std::stringstream ds(value);
      std::string d;
      while (std::getline(ds, d, ',')) spec.densities.push_back(std::stod(d));
      if (spec.densities.empty()) throw std::invalid_argument("empty density list");
    } else if (key == "variants") {
      spec.variants = parse_variants(value);
    } else {
      throw std::invalid_argument("unknown suite spec key '" + key + "'");
    }
  }
  if (spec.count <= 0 || spec.max_vehicles <= 0 || spec.max_requests < 0) {
    throw std::invalid_argument("suite spec requires count>0, maxn>0, maxm>=0");
  }
  return spec;
}

inline Instance suite_instance(const SuiteSpec& spec, int index) {
  RandomSpec rnd;
  rnd.seed = spec.seed + static_cast<std::uint64_t>(index);
  rnd.vehicles = 1 + index % spec.max_vehicles;
  rnd.requests = index % (spec.max_requests + 1);
  rnd.density = spec.densities[static_cast<std::size_t>(index) % spec.densities.size()];
  rnd.variants = spec.variants;
  return generate_random(rnd);
}

inline int run_solve(const std::string& alg, const std::string& instance_path,
                     const std::string& order_text, const std::string& out_path,
                     std::ostream& out) {
  const Instance inst = load_instance(instance_path);

  std::optional<std::vector<int>> order;
  if (!order_text.empty()) {
    std::vector<int> parsed;
    std::stringstream ss(order_text);
    std::string item;
    while (std::getline(ss, item, ',')) parsed.push_back(std::stoi(item));
    order = std::move(parsed);
  }

  const auto started = std::chrono::steady_clock::now();
  const AlgorithmResult result = alg == "feq1" ? feasible_min_max(inst)
                                               : feasible_envy_graph(inst, order);
  const auto elapsed = std::chrono::steady_clock::now() - started;

  RunReport report;
  report.algorithm = alg;
  report.assignment = result.assignment;
  report.fairness = fairness_report(inst, result.assignment);
  for (const RoundTrace& t : result.rounds) {
    report.rounds.push_back(RoundSummary::from_trace(t));
  }
  report.round_count = result.rounds.size();
  report.wall_micros = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::microseconds>(elapsed).count());
  report.instance_hash = instance_hash(inst);

  emit(serialize_run_report(report), out_path, out);
  const bool guaranteed = alg == "feq1" ? report.fairness.feq1 : report.fairness.fef1;
  return (report.fairness.feasible && report.fairness.complete && guaranteed)
             ? kOk
             : kPredicateFailure;
}

inline int run_check(const std::string& instance_path, const std::string& assignment_path,
                     const std::string& out_path, std::ostream& out) {
  const Instance inst = load_instance(instance_path);
  const Assignment asg = parse_assignment(read_file(assignment_path));
  if (auto issue = asg.validate(inst.vehicle_count(), inst.request_count())) {
    throw ValidationError(*issue);
  }
  const FairnessReport report = fairness_report(inst, asg);
  emit(serialize_fairness_report(report), out_path, out);
  return report.all_pass() ? kOk : kPredicateFailure;
}

inline int run_exists(const std::string& notion, const std::string& instance_path,
                      bool allow_infeasible, bool allow_incomplete, std::uint64_t budget,
                      const std::string& out_path, std::ostream& out) {
  const Instance inst = load_instance(instance_path);
  ExistenceQuery query;
  query.notion = notion_from_string(notion);
  query.require_feasible = !allow_infeasible;
  query.require_complete = !allow_incomplete;
  query.max_leaves = budget;
  const auto witness = decide_existence(inst, query);

  json doc;
  doc["notion"] = notion;
  doc["require_feasible"] = query.require_feasible;
  doc["require_complete"] = query.require_complete;
  doc["exists"] = witness.has_value();
  doc["answer"] = witness ? "yes" : "no";
  doc["witness"] = witness ? assignment_to_json(*witness) : json(nullptr);
  emit(doc.dump(), out_path, out);
  return kOk;
}

inline int run_reduce(const std::vector<std::int64_t>& values, const std::string& out_path,
                      std::ostream& out) {
  const Fixture fx = fixture_partition(values);
  emit(serialize_instance(fx.instance), out_path, out);
  return kOk;
}

inline int run_verify_reduction(int max_size, int max_value, std::uint64_t budget,
                                std::ostream& out) {
  int checked = 0;
  int failed = 0;
  std::vector<std::int64_t> values;
  // All multisets as nondecreasing value sequences.
  const std::function<void()> sweep = [&]() {
    if (!values.empty()) {
      PartitionInstance pi{values};
      if (!pi.validate()) {
        const ReductionCheck check = verify_reduction(pi, budget);
        ++checked;
        if (!check.holds()) ++failed;
        std::string name;
        for (std::size_t t = 0; t < values.size(); ++t) {
          if (t) name += ',';
          name += std::to_string(values[t]);
        }
        out << "{" << name << "}: partition=" << (check.partition_exists ? "yes" : "no")
            << " feasible-complete-ef1=" << (check.ef1_exists ? "yes" : "no")
            << " eq1<=>ef1=" << (check.eq1_matches_ef1_pointwise ? "ok" : "BROKEN")
            << " -> " << (check.holds() ? "OK" : "FAIL") << '\n';
      }
    }
    if (static_cast<int>(values.size()) == max_size) return;
    const std::int64_t low = values.empty() ? 1 : values.back();
    for (std::int64_t v = low; v <= max_value; ++v) {
      values.push_back(v);
      sweep();
      values.pop_back();
    }
  };
  sweep();
  out << "verified " << (checked - failed) << "/" << checked << " reductions\n";
  return failed == 0 ? kOk : kPredicateFailure;
}

inline int run_gen_fixture(const std::string& name, const std::string& eps_text,
                           const std::vector<std::int64_t>& multiset,
                           const std::string& assignment_name, const std::string& out_path,
                           std::ostream& out) {
  std::optional<Rational> eps;
  if (!eps_text.empty()) eps = Rational::parse(eps_text);
  Fixture fx = generate_fixture(name, eps, multiset);

  if (!assignment_name.empty()) {
    const auto it = fx.assignments.find(assignment_name);
    if (it == fx.assignments.end()) {
      throw std::invalid_argument("fixture '" + name + "' has no assignment '" +
                                  assignment_name + "'");
    }
    emit(serialize_assignment(it->second), out_path, out);
    return kOk;
  }

  // Documentation values ride along in the instance metadata.
  if (!fx.notes.empty()) {
    auto metadata = fx.instance.metadata();
    metadata.insert(fx.notes.begin(), fx.notes.end());
    fx.instance = Instance(fx.instance.profits(), fx.instance.feasibility(),
                           std::move(metadata));
  }
  emit(serialize_instance(fx.instance), out_path, out);
  return kOk;
}

inline int run_gen_random(std::uint64_t seed, int vehicles, int requests, double density,
                          const std::string& variants_text, const std::string& out_path,
                          std::ostream& out) {
  RandomSpec spec;
  spec.seed = seed;
  spec.vehicles = vehicles;
  spec.requests = requests;
  spec.density = density;
  if (!variants_text.empty()) spec.variants = parse_variants(variants_text);
  emit(serialize_instance(generate_random(spec)), out_path, out);
  return kOk;
}

inline int run_bench(const std::string& suite_text, std::ostream& out) {
  const SuiteSpec spec = parse_suite_spec(suite_text);
  int min_max_failures = 0;
  int envy_graph_failures = 0;
  int trace_failures = 0;
  std::uint64_t max_rounds = 0;
  const auto started = std::chrono::steady_clock::now();

  for (int index = 0; index < spec.count; ++index) {
    const Instance inst = suite_instance(spec, index);

    const AlgorithmResult min_max = feasible_min_max(inst);
    if (!is_feasible(inst, min_max.assignment) || !is_complete(inst, min_max.assignment) ||
        !is_feq1(inst, min_max.assignment)) {
      ++min_max_failures;
    }

    const AlgorithmResult envy = feasible_envy_graph(inst);
    if (!is_feasible(inst, envy.assignment) || !is_complete(inst, envy.assignment) ||
        !is_fef1(inst, envy.assignment)) {
      ++envy_graph_failures;
    }
    max_rounds = std::max(max_rounds, static_cast<std::uint64_t>(envy.rounds.size()));

    Rational previous;
    for (const RoundTrace& t : envy.rounds) {
      const bool eliminated = !t.cycles.empty() || !t.pre_pick_cycles.empty();
      if (t.welfare < previous || (eliminated && !(t.welfare > previous))) {
        ++trace_failures;
        break;
      }
      previous = t.welfare;
    }
  }

  const auto elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - started)
                              .count();
  const int failures = min_max_failures + envy_graph_failures + trace_failures;
  out << "instances: " << spec.count << '\n'
      << "feasible-min-max guarantee failures: " << min_max_failures << '\n'
      << "feasible-envy-graph guarantee failures: " << envy_graph_failures << '\n'
      << "welfare trace failures: " << trace_failures << '\n'
      << "max envy-graph rounds: " << max_rounds << '\n'
      << "elapsed: " << elapsed_ms << " ms\n";
  return failures == 0 ? kOk : kPredicateFailure;
}

}  // namespace cli_detail

/// Full command surface. Streams are injectable so tests can run commands
/// in-process.
inline int run(std::vector<std::string> args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"fair assignment of customer requests to vehicle drivers"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "run an assignment algorithm on an instance");
  std::string solve_alg;
  std::string solve_instance;
  std::string solve_order;
  std::string solve_out;
  solve->add_option("--alg", solve_alg, "algorithm: feq1 (min-max) or fef1 (envy graph)")
      ->required()
      ->check(CLI::IsMember({"feq1", "fef1"}));
  solve->add_option("instance", solve_instance, "instance document")->required();
  solve->add_option("--order", solve_order, "fef1 pick order, e.g. 2,0,1");
  solve->add_option("--out", solve_out, "write the run report here");

  // check
  auto* check = app.add_subcommand("check", "fairness-check an assignment");
  std::string check_instance;
  std::string check_assignment;
  std::string check_out;
  check->add_option("instance", check_instance, "instance document")->required();
  check->add_option("assignment", check_assignment, "assignment document")->required();
  check->add_option("--out", check_out, "write the fairness report here");

  // exists
  auto* exists = app.add_subcommand("exists", "decide existence by exhaustive search");
  std::string exists_notion;
  std::string exists_instance;
  std::string exists_out;
  bool exists_allow_infeasible = false;
  bool exists_allow_incomplete = false;
  std::uint64_t exists_budget = kDefaultEnumerationBudget;
  exists->add_option("--notion", exists_notion, "one of eq1, ef1, feq1, fef1")
      ->required()
      ->check(CLI::IsMember({"eq1", "ef1", "feq1", "fef1"}));
  exists->add_option("instance", exists_instance, "instance document")->required();
  exists->add_flag("--allow-infeasible", exists_allow_infeasible,
                   "search non-feasible assignments too");
  exists->add_flag("--allow-incomplete", exists_allow_incomplete,
                   "search partial assignments too");
  exists->add_option("--budget", exists_budget, "max enumeration leaves");
  exists->add_option("--out", exists_out, "write the answer here");

  // reduce
  auto* reduce = app.add_subcommand("reduce", "emit the partition reduction instance");
  std::vector<std::int64_t> reduce_values;
  std::string reduce_out;
  reduce->add_option("values", reduce_values, "partition multiset, e.g. 2 2")
      ->required()
      ->expected(-1);
  reduce->add_option("--out", reduce_out, "write the instance here");

  // verify-reduction
  auto* verify = app.add_subcommand("verify-reduction",
                                    "sweep the reduction over small multisets");
  int verify_max_size = 4;
  int verify_max_value = 5;
  std::uint64_t verify_budget = kDefaultEnumerationBudget;
  verify->add_option("--max-size", verify_max_size, "largest multiset size")->required();
  verify->add_option("--max-value", verify_max_value, "largest value")->required();
  verify->add_option("--budget", verify_budget, "max enumeration leaves per reduction");

  // gen
  auto* gen = app.add_subcommand("gen", "emit instances");
  gen->require_subcommand(1);
  auto* gen_fixture = gen->add_subcommand("fixture", "a named study instance");
  std::string fixture_name;
  std::string fixture_eps;
  std::vector<std::int64_t> fixture_multiset;
  std::string fixture_assignment;
  std::string fixture_out;
  gen_fixture
      ->add_option("name", fixture_name,
                   "example1, example2, theorem1, theorem3 or partition")
      ->required();
  gen_fixture->add_option("--eps", fixture_eps, "example1 epsilon, e.g. 1/10");
  gen_fixture->add_option("--multiset", fixture_multiset, "partition values");
  gen_fixture->add_option("--assignment", fixture_assignment,
                          "emit this reference assignment instead of the instance");
  gen_fixture->add_option("--out", fixture_out, "write the document here");

  auto* gen_random = gen->add_subcommand("random", "a seeded random instance");
  std::uint64_t random_seed = 0;
  int random_vehicles = 2;
  int random_requests = 4;
  double random_density = 1.0;
  std::string random_variants;
  std::string random_out;
  gen_random->add_option("--seed", random_seed, "rng seed");
  gen_random->add_option("--n", random_vehicles, "vehicle count");
  gen_random->add_option("--m", random_requests, "request count");
  gen_random->add_option("--density", random_density, "feasibility density in [0,1]");
  gen_random->add_option("--variants", random_variants,
                         "comma list of additive, budget_additive, pair_bonus, table");
  gen_random->add_option("--out", random_out, "write the instance here");

  // bench
  auto* bench = app.add_subcommand("bench", "run the randomized guarantee suite");
  std::string bench_suite;
  bench->add_option("--suite", bench_suite,
                    "e.g. count=200;maxn=5;maxm=12;seed=1;densities=0.3,0.7,1.0")
      ->required();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("fairfleet");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    cli_detail::emit_error(err, kUsageError, e.what());
    return kUsageError;
  }

  try {
    if (*solve) {
      return cli_detail::run_solve(solve_alg, solve_instance, solve_order, solve_out, out);
    }
    if (*check) {
      return cli_detail::run_check(check_instance, check_assignment, check_out, out);
    }
    if (*exists) {
      return cli_detail::run_exists(exists_notion, exists_instance, exists_allow_infeasible,
                                    exists_allow_incomplete, exists_budget, exists_out, out);
    }
    if (*reduce) {
      return cli_detail::run_reduce(reduce_values, reduce_out, out);
    }
    if (*verify) {
      return cli_detail::run_verify_reduction(verify_max_size, verify_max_value,
                                              verify_budget, out);
    }
    if (*gen_fixture) {
      return cli_detail::run_gen_fixture(fixture_name, fixture_eps, fixture_multiset,
                                         fixture_assignment, fixture_out, out);
    }
    if (*gen_random) {
      return cli_detail::run_gen_random(random_seed, random_vehicles, random_requests,
                                        random_density, random_variants, random_out, out);
    }
    if (*bench) {
      return cli_detail::run_bench(bench_suite, out);
    }
    cli_detail::emit_error(err, kUsageError, "no subcommand given");
    return kUsageError;
  } catch (const BudgetExceeded& e) {
    cli_detail::emit_error(err, kBudgetBreach, e.what());
    return kBudgetBreach;
  } catch (const ParseError& e) {
    cli_detail::emit_error(err, kUsageError, e.what());
    return kUsageError;
  } catch (const ValidationError& e) {
    cli_detail::emit_error(err, kUsageError, e.what());
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    cli_detail::emit_error(err, kUsageError, e.what());
    return kUsageError;
  } catch (const std::out_of_range& e) {
    cli_detail::emit_error(err, kUsageError, e.what());
    return kUsageError;
  } catch (const std::exception& e) {
    cli_detail::emit_error(err, kPredicateFailure, e.what());
    return kPredicateFailure;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
  for (int t = 1; t < argc; ++t) args.emplace_back(argv[t]);
  return run(std::move(args), out, err);
}

}  // namespace fairfleet::cli
