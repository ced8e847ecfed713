// Copyright 2026 The evcs Authors
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

// evcs: generate instances, solve them, export models, compare with the
// growth-function baseline and summarize runs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evcs/bounds.hpp"
#include "evcs/coverage.hpp"
#include "evcs/coverage_cache.hpp"
#include "evcs/datasets.hpp"
#include "evcs/error.hpp"
#include "evcs/evaluate.hpp"
#include "evcs/exact.hpp"
#include "evcs/external_solver.hpp"
#include "evcs/formulations.hpp"
#include "evcs/gf.hpp"
#include "evcs/growth_function.hpp"
#include "evcs/heuristics.hpp"
#include "evcs/instance_io.hpp"
#include "evcs/lp_format.hpp"
#include "evcs/parallel.hpp"
#include "evcs/report.hpp"
#include "evcs/synthetic_network.hpp"

namespace fs = std::filesystem;
using namespace evcs;

namespace {

struct Common {
  std::uint64_t seed = 1;
  double time_limit = 7200.0;
  std::string solver_cmd;
  int threads = 1;
  double alpha = 0.85;
  std::string mode = "first";
  std::string allocation = "even";
};

ExternalSolver make_solver(const Common& c) {
  return c.solver_cmd.empty() ? ExternalSolver::from_env() : ExternalSolver(c.solver_cmd);
}

std::string slurp_stream(const std::function<void(std::ostream&)>& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

struct Loaded {
  std::string name;
  Instance instance;
  CoverageTensor coverage;
};

std::vector<Loaded> load_manifest_instances(const fs::path& manifest_path, int threads) {
  const Manifest m = load_manifest(manifest_path);
  const fs::path dir = manifest_path.parent_path();
  std::vector<Loaded> out(m.instances.size());
  parallel_for(out.size(), threads, [&](std::size_t k) {
    const fs::path p = dir / m.instances[k].path;
    out[k].name = fs::path(m.instances[k].path).stem().string();
    out[k].instance = load_instance(p);
    fs::path cache = p;
    cache.replace_extension(".cov");
    out[k].coverage = cached_coverage(out[k].instance, cache, 1);
  });
  return out;
}

// ---- generate ---------------------------------------------------------------

int cmd_generate(const std::string& kind, int count, const std::string& out_dir, const Common& c,
                 const std::string& nodes_csv, const std::string& edges_csv, int stations, int horizon) {
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  Manifest manifest;
  manifest.dataset_kind = kind;
  manifest.base_seed = c.seed;
  std::vector<Instance> instances;
  if (kind == "Tiny") {
    for (int k = 0; k < count; ++k) instances.push_back(generate_tiny_instance(c.seed, {}, k));
  } else {
    DatasetParams params = dataset_params(dataset_kind_from_string(kind));
    if (stations > 0) params.num_stations = stations;
    if (horizon > 0) params.horizon = horizon;
    Network network;
    if (!nodes_csv.empty()) {
      network = read_network_csv(nodes_csv, edges_csv);
    } else {
      SyntheticNetworkConfig net;
      net.with_income_mix = params.kind == DatasetKind::kPrice;
      network = generate_network(net, c.seed);
    }
    write_network_csv(network, dir / "nodes.csv", dir / "edges.csv");
    instances = generate_dataset(network, params, count, c.seed, c.threads);
  }
  for (int k = 0; k < count; ++k) {
    char name[64];
    std::snprintf(name, sizeof name, "instance_%03d.json", k);
    save_instance(instances[k], dir / name);
    manifest.instances.push_back({name, instances[k].metadata.seed, k});
  }
  save_manifest(manifest, dir / "manifest.json");
  std::cout << "wrote " << count << " instances to " << dir.string() << "\n";
  return 0;
}

// ---- solve ------------------------------------------------------------------

struct MethodRun {
  RunRow row;
  OutletSchedule schedule;
  std::vector<TraceEntry> trace;
};

MethodRun run_method(const std::string& method, const Loaded& l, const Common& c, const ExternalSolver& solver) {
  MethodRun run;
  run.row.instance = l.name;
  run.row.method = method;
  const auto start = std::chrono::steady_clock::now();
  const Instance& in = l.instance;
  const CoverageTensor& cov = l.coverage;
  auto skip = [&](const std::string& why) {
    run.row.skipped = true;
    run.row.reason = why;
    run.row.termination = "skipped";
    run.schedule = OutletSchedule::initial(in);
  };
  auto from_result = [&](HeuristicResult r) {
    run.schedule = std::move(r.schedule);
    run.trace = std::move(r.trace);
    run.row.termination = r.termination;
  };
  const ImprovementMode improvement = c.mode == "best" ? ImprovementMode::kBest : ImprovementMode::kFirst;
  if (method == "exact-enum") {
    try {
      const ExactResult r = brute_force_optimum(in, cov, {}, 1);
      run.schedule = r.schedule;
      run.row.termination = "optimal";
    } catch (const DomainError& e) {
      skip(e.what());
    }
  } else if (method == "mc-external" || method == "sl-external") {
    if (!solver.configured()) {
      skip("external solver not configured");
    } else {
      const MilpModel model = method == "mc-external" ? build_mc(in, cov) : build_sl(in, compute_bounds(in));
      const SolveResult r = solver.solve(model, c.time_limit);
      run.row.termination = to_string(r.status);
      if (r.has_solution()) {
        run.schedule = schedule_from_values(in, r.values);
      } else {
        skip("solver status " + to_string(r.status) + ": " + r.message);
      }
    }
  } else if (method == "greedy-m" || method == "greedy-h") {
    from_result(greedy(in, cov, {method == "greedy-m" ? ScoreMode::kMyopic : ScoreMode::kHyperoptic}));
  } else if (method == "grasp-m" || method == "grasp-h") {
    GraspConfig g;
    g.alpha = c.alpha;
    g.mode = method == "grasp-m" ? ScoreMode::kMyopic : ScoreMode::kHyperoptic;
    g.time_limit_s = c.time_limit;
    g.improvement = improvement;
    g.seed = c.seed;
    from_result(grasp(in, cov, g));
  } else if (method == "rh-even" || method == "rh-geom") {
    RollingHorizonConfig rh;
    rh.allocation = method == "rh-even" ? Allocation::kEven : Allocation::kGeometric;
    rh.total_time_limit_s = c.time_limit;
    try {
      HeuristicResult r = rolling_horizon(in, cov, rh, solver);
      from_result(std::move(r));
    } catch (const DomainError& e) {
      skip(e.what());
    }
  } else {
    throw ConfigError("unknown method '" + method + "'");
  }
  run.row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!run.row.skipped) {
    const auto report = validate_schedule(in, run.schedule);
    if (!report.feasible()) throw Error(method + " produced an infeasible schedule on " + l.name);
    run.row.value = evaluate(cov, run.schedule).total;
  }
  return run;
}

int cmd_solve(const std::string& manifest, const std::string& method, const std::string& out_dir, const Common& c) {
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const auto loaded = load_manifest_instances(manifest, c.threads);
  const ExternalSolver solver = make_solver(c);
  std::vector<MethodRun> runs(loaded.size());
  // External solves manage their own threads; keep them sequential.
  const int workers = solver.configured() && (method.find("external") != std::string::npos ||
                                               method.rfind("rh-", 0) == 0)
                          ? 1
                          : c.threads;
  parallel_for(loaded.size(), workers, [&](std::size_t k) {
    runs[k] = run_method(method, loaded[k], c, solver);
    const std::string stem = loaded[k].name + "." + method;
    if (!runs[k].row.skipped) save_schedule(runs[k].schedule, dir / (stem + ".solution.json"));
    write_file_atomic(dir / (stem + ".trace.csv"),
                      slurp_stream([&](std::ostream& os) { write_trace_csv(os, runs[k].trace); }));
  });
  std::vector<RunRow> rows;
  bool any_skipped = false;
  for (const auto& r : runs) {
    rows.push_back(r.row);
    any_skipped = any_skipped || r.row.skipped;
  }
  assign_gaps(rows);
  write_file_atomic(dir / ("runs-" + method + ".csv"),
                    slurp_stream([&](std::ostream& os) { write_rows_csv(os, rows); }));
  for (const auto& r : rows) {
    std::cout << r.instance << ' ' << r.method << ' '
              << (r.skipped ? "skipped (" + r.reason + ")" : std::to_string(r.value)) << ' '
              << r.wall_seconds << "s\n";
  }
  return any_skipped ? 2 : 0;
}

// ---- report -----------------------------------------------------------------

int cmd_report(const std::vector<std::string>& inputs, const std::string& out) {
  std::vector<RunRow> rows;
  for (const auto& path : inputs) {
    std::istringstream in(read_file(path));
    auto part = read_rows_csv(in);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  if (rows.empty()) throw DomainError("no rows to report");
  assign_gaps(rows);
  const auto aggregates = summarize(rows);
  const std::string summary = slurp_stream([&](std::ostream& os) { write_summary_csv(os, aggregates); });
  std::cout << summary;
  if (!out.empty()) {
    write_file_atomic(out, summary);
    fs::path rows_path(out);
    rows_path.replace_extension(".rows.csv");
    write_file_atomic(rows_path, slurp_stream([&](std::ostream& os) { write_rows_csv(os, rows); }));
  }
  return 0;
}

// ---- compare-gf ---------------------------------------------------------------

OutletSchedule mc_solution(const Loaded& l, const ExternalSolver& solver, const Common& c, std::string& how) {
  if (solver.configured()) {
    const SolveResult r = solver.solve(build_mc(l.instance, l.coverage), c.time_limit);
    if (r.has_solution()) {
      how = "mc-external";
      return schedule_from_values(l.instance, r.values);
    }
  }
  try {
    how = "exact-enum";
    return brute_force_optimum(l.instance, l.coverage).schedule;
  } catch (const DomainError&) {
    how = "grasp-m";
    GraspConfig g;
    g.time_limit_s = c.time_limit;
    g.seed = c.seed;
    return grasp(l.instance, l.coverage, g).schedule;
  }
}

int cmd_compare_gf(const std::string& manifest, const std::string& out_dir, const Common& c, const GfParams& params) {
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const auto loaded = load_manifest_instances(manifest, c.threads);
  if (loaded.empty()) throw DomainError("manifest lists no instances");
  for (const auto& l : loaded) {
    if (l.instance.stations != loaded.front().instance.stations ||
        l.instance.classes != loaded.front().instance.classes || l.instance.horizon != loaded.front().instance.horizon) {
      throw ConfigError("compare-gf needs instances of one dataset (same stations, classes and horizon); " +
                        l.name + " differs from " + loaded.front().name);
    }
  }
  const ExternalSolver solver = make_solver(c);

  std::vector<OutletSchedule> mc(loaded.size());
  std::vector<std::string> mc_how(loaded.size());
  for (std::size_t k = 0; k < loaded.size(); ++k) mc[k] = mc_solution(loaded[k], solver, c, mc_how[k]);

  // The first instance's MC solution drives the growth function.
  std::vector<std::vector<double>> yearly;
  for (const auto& l : loaded) yearly.push_back(evaluate(l.coverage, mc.front()).per_period);
  const Instance& base = loaded.front().instance;
  double population = 0.0;
  for (double p : node_population(base)) population += p;
  const GrowthFunction g = generate_growth_function(average_yearly(yearly), population);
  write_file_atomic(dir / "growth_function.csv", slurp_stream([&](std::ostream& os) { write_growth_function(os, g); }));

  const GfInstance gf = make_gf_instance(base, g, params);
  OutletSchedule gf_x;
  std::string gf_how;
  if (solver.configured()) {
    const SolveResult r = solver.solve(build_gf(gf), c.time_limit);
    if (!r.has_solution()) throw Error("GF solve failed: " + to_string(r.status) + " " + r.message);
    gf_x = gf_schedule_from_values(gf, r.values);
    gf_how = "gf-external";
  } else {
    gf_x = gf_enumerate(gf).outlets;
    gf_how = "gf-enum";
  }
  save_schedule(gf_x, dir / "gf.solution.json");
  const OutletSchedule adjusted = adjust_solution_max_outlets(base, gf_x);

  std::vector<RunRow> rows;
  std::vector<double> col_gf, col_adj, col_mc;
  for (std::size_t k = 0; k < loaded.size(); ++k) {
    const double v_gf = evaluate_under_mc(loaded[k].coverage, gf_x);
    const double v_adj = evaluate_under_mc(loaded[k].coverage, adjusted);
    const double v_mc = evaluate_under_mc(loaded[k].coverage, mc[k]);
    col_gf.push_back(v_gf);
    col_adj.push_back(v_adj);
    col_mc.push_back(v_mc);
    rows.push_back({loaded[k].name, "GF", v_gf, 0.0, 0.0, gf_how, false, ""});
    rows.push_back({loaded[k].name, "GF (Adjusted)", v_adj, 0.0, 0.0, "budget-infeasible by design", false, ""});
    rows.push_back({loaded[k].name, "MC", v_mc, 0.0, 0.0, mc_how[k], false, ""});
  }
  write_file_atomic(dir / "comparison_rows.csv", slurp_stream([&](std::ostream& os) { write_rows_csv(os, rows); }));
  std::ostringstream table;
  table.precision(12);
  table << "statistic,GF,GF (Adjusted),MC\n";
  for (auto [label, p] : {std::pair{"5th percentile", 5.0}, {"Median", 50.0}, {"95th percentile", 95.0}}) {
    table << label << ',' << nearest_rank_percentile(col_gf, p) << ',' << nearest_rank_percentile(col_adj, p)
          << ',' << nearest_rank_percentile(col_mc, p) << '\n';
  }
  write_file_atomic(dir / "comparison.csv", table.str());
  std::cout << table.str();

  const GfEvaluation ev = gf_recursion(gf, gf_x);
  const std::vector<NodeColumn> columns{
      {"mc_ev_pct", mc_node_ev_percent(base, loaded.front().coverage, mc.front())},
      {"gf_ev_pct", gf_node_ev_percent(gf, ev)},
      {"gf_under_mc_ev_pct", mc_node_ev_percent(base, loaded.front().coverage, gf_x)}};
  write_file_atomic(dir / "nodes.csv", slurp_stream([&](std::ostream& os) { write_node_table_csv(os, base, columns); }));
  write_file_atomic(dir / "nodes.geojson",
                    slurp_stream([&](std::ostream& os) { write_node_geojson(os, base, columns); }));
  return 0;
}

// ---- export -----------------------------------------------------------------

int cmd_export(const std::string& instance_path, const std::string& formulation, const std::string& out,
               const std::string& growth_path, const GfParams& params, int threads) {
  const Instance in = load_instance(instance_path);
  MilpModel model;
  if (formulation == "mc") {
    model = build_mc(in, build_coverage(in, threads));
  } else if (formulation == "sl") {
    model = build_sl(in, compute_bounds(in));
  } else if (formulation == "gf") {
    if (growth_path.empty()) throw ConfigError("the gf formulation needs --growth <growth_function.csv>");
    std::istringstream gs(read_file(growth_path));
    model = build_gf(make_gf_instance(in, read_growth_function(gs), params));
  } else {
    throw ConfigError("unknown formulation '" + formulation + "' (expected mc, sl or gf)");
  }
  export_lp(model, out);
  std::cout << "variables " << model.num_variables() << " (binary " << model.count(VarType::kBinary)
            << ", integer " << model.count(VarType::kInteger) << ")\nconstraints " << model.num_constraints()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EV charging station placement under discrete-choice demand"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "Base seed");
    sub->add_option("--time-limit", c.time_limit, "Time limit in seconds")->capture_default_str();
    sub->add_option("--solver-cmd", c.solver_cmd,
                    "Solver command template ({lp_path} {sol_path} {time_limit} {start_path}); "
                    "defaults to $EVCS_SOLVER_CMD");
    sub->add_option("--threads", c.threads, "Worker threads (0: all cores)")->capture_default_str();
    sub->add_option("--alpha", c.alpha, "GRASP RCL parameter")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    sub->add_option("--mode", c.mode, "Local search improvement: first or best")
        ->check(CLI::IsMember({"first", "best"}))
        ->capture_default_str();
    sub->add_option("--allocation", c.allocation, "Rolling horizon time split: even or geometric")
        ->check(CLI::IsMember({"even", "geometric"}))
        ->capture_default_str();
  };

  std::string kind = "Simple", out, nodes_csv, edges_csv;
  int count = 20, stations = 0, horizon = 0;
  auto* gen = app.add_subcommand("generate", "Generate a dataset and its manifest");
  gen->add_option("--kind", kind, "Simple, Distance, HomeCharging, Price, LongSpan or Tiny")
      ->check(CLI::IsMember({"Simple", "Distance", "HomeCharging", "Price", "LongSpan", "Tiny"}));
  gen->add_option("--count", count, "Number of instances")->check(CLI::NonNegativeNumber);
  gen->add_option("--out", out, "Output directory")->required();
  gen->add_option("--nodes", nodes_csv, "Network nodes CSV (default: synthetic network)");
  gen->add_option("--edges", edges_csv, "Network edges CSV");
  gen->add_option("--stations", stations, "Override the number of candidate stations");
  gen->add_option("--horizon", horizon, "Override the number of periods");
  add_common(gen);

  std::string manifest, method;
  auto* solve = app.add_subcommand("solve", "Solve every instance of a manifest with one method");
  solve->add_option("--manifest", manifest, "Manifest JSON")->required()->check(CLI::ExistingFile);
  solve->add_option("--method", method, "Solution method")
      ->required()
      ->check(CLI::IsMember({"exact-enum", "mc-external", "sl-external", "greedy-m", "greedy-h", "grasp-m",
                             "grasp-h", "rh-even", "rh-geom"}));
  solve->add_option("--out", out, "Output directory")->required();
  add_common(solve);

  std::vector<std::string> runs;
  auto* report = app.add_subcommand("report", "Aggregate run CSVs (gaps against the best method per instance)");
  report->add_option("runs", runs, "runs-*.csv files")->required()->check(CLI::ExistingFile);
  report->add_option("--out", out, "Summary CSV path");

  GfParams gfp;
  double gf_budget = -1.0;
  auto add_gf = [&](CLI::App* sub) {
    sub->add_option("--gf-budget", gf_budget, "GF yearly budget (default: instance budgets)");
    sub->add_option("--gf-unit-cost", gfp.unit_cost, "GF cost per outlet")->capture_default_str();
    sub->add_option("--gf-fixed-cost", gfp.fixed_cost, "GF station opening cost")->capture_default_str();
    sub->add_option("--gf-capacity", gfp.capacity, "GF capacity per outlet and year (default unlimited)");
  };
  auto* cmp = app.add_subcommand("compare-gf", "Compare MC and growth-function solutions under f");
  cmp->add_option("--manifest", manifest, "Manifest JSON")->required()->check(CLI::ExistingFile);
  cmp->add_option("--out", out, "Output directory")->required();
  add_common(cmp);
  add_gf(cmp);

  std::string instance_path, formulation, growth;
  auto* exp = app.add_subcommand("export", "Write a formulation as an LP file");
  exp->add_option("--instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
  exp->add_option("--formulation", formulation, "mc, sl or gf")->required()->check(CLI::IsMember({"mc", "sl", "gf"}));
  exp->add_option("--out", out, "LP file")->required();
  exp->add_option("--growth", growth, "Growth function CSV (gf only)");
  add_common(exp);
  add_gf(exp);

  CLI11_PARSE(app, argc, argv);
  try {
    if (gf_budget >= 0.0) gfp.budgets.assign(1, gf_budget);
    auto expand_budget = [&](int T) {
      if (gfp.budgets.size() == 1) gfp.budgets.assign(T, gfp.budgets.front());
    };
    if (*gen) return cmd_generate(kind, count, out, c, nodes_csv, edges_csv, stations, horizon);
    if (*solve) {
      if (method.rfind("rh-", 0) != 0 && c.allocation != "even") {
        std::cerr << "note: --allocation only affects rh-* methods\n";
      }
      return cmd_solve(manifest, method, out, c);
    }
    if (*report) return cmd_report(runs, out);
    if (*cmp) {
      if (!gfp.budgets.empty()) {
        const Manifest m = load_manifest(manifest);
        if (!m.instances.empty()) {
          expand_budget(load_instance(fs::path(manifest).parent_path() / m.instances.front().path).horizon);
        }
      }
      return cmd_compare_gf(manifest, out, c, gfp);
    }
    if (*exp) {
      if (!gfp.budgets.empty()) expand_budget(load_instance(instance_path).horizon);
      return cmd_export(instance_path, formulation, out, growth, gfp, c.threads);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
