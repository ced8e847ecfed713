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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <sstream>

#include "evcs/coverage.hpp"
#include "evcs/datasets.hpp"
#include "evcs/error.hpp"
#include "evcs/evaluate.hpp"
#include "evcs/exact.hpp"
#include "evcs/external_solver.hpp"
#include "evcs/heuristics.hpp"
#include "evcs/synthetic_network.hpp"
#include "support.hpp"

using namespace evcs;

namespace {

// Station 0 covers every triplet with one outlet, the others cover nothing.
Instance dominant_station() {
  Instance in = test::handmade(3, 3, 2, 2, 6, 400.0);
  test::randomize(in, 31, 0.5);
  for (int i = 0; i < 3; ++i) {
    for (int t = 0; t < 2; ++t) {
      in.utility.asc(kOptOutAlt, i, t) = 0.0;
      in.utility.asc(in.station_alt(0), i, t) = 10.0;
      in.utility.asc(in.station_alt(1), i, t) = -10.0;
      in.utility.asc(in.station_alt(2), i, t) = -10.0;
    }
  }
  return in;
}

// Class c is covered only by station c. Populations per period are given.
Instance split_classes(std::vector<std::vector<double>> populations, std::vector<double> budgets) {
  const int n = static_cast<int>(populations.size());
  const int T = static_cast<int>(budgets.size());
  Instance in = test::handmade(n, n, T, 1, 1, 0.0);
  for (int t = 0; t < T; ++t) in.costs.budget(t) = budgets[t];
  for (int i = 0; i < n; ++i) {
    in.classes[i].population = populations[i];
    for (int t = 0; t < T; ++t) {
      for (int j = 0; j < n; ++j) in.utility.asc(in.station_alt(j), i, t) = i == j ? 10.0 : -10.0;
    }
  }
  return in;
}

bool same_trace(const std::vector<TraceEntry>& a, const std::vector<TraceEntry>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t q = 0; q < a.size(); ++q) {
    if (a[q].period != b[q].period || a[q].station != b[q].station || a[q].outlets != b[q].outlets ||
        a[q].move != b[q].move || a[q].score != b[q].score || a[q].value != b[q].value) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("greedy with no budget keeps the initial state") {
  Instance in = generate_tiny_instance(2);
  for (int t = 0; t < in.horizon; ++t) in.costs.budget(t) = 0.0;
  const CoverageTensor cov = build_coverage(in);
  for (auto mode : {ScoreMode::kMyopic, ScoreMode::kHyperoptic}) {
    const auto res = greedy(in, cov, {mode});
    CHECK(res.schedule == OutletSchedule::initial(in));
    CHECK(res.trace.empty());
  }
}

TEST_CASE("greedy opens a dominant station first") {
  const Instance in = dominant_station();
  const CoverageTensor cov = build_coverage(in);
  for (auto mode : {ScoreMode::kMyopic, ScoreMode::kHyperoptic}) {
    const auto res = greedy(in, cov, {mode});
    REQUIRE_FALSE(res.trace.empty());
    CHECK(res.trace.front().period == 0);
    CHECK(res.trace.front().station == 0);
    CHECK(res.trace.front().outlets == 1);
    CHECK(res.value == doctest::Approx(cov.total_mass()));
  }
}

TEST_CASE("greedy never beats the enumerated optimum") {
  double worst_gap = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Instance in = generate_tiny_instance(seed);
    const CoverageTensor cov = build_coverage(in);
    const double best = brute_force_optimum(in, cov).value;
    for (auto mode : {ScoreMode::kMyopic, ScoreMode::kHyperoptic}) {
      const auto res = greedy(in, cov, {mode});
      CHECK(validate_schedule(in, res.schedule).feasible());
      CHECK(res.value == evaluate(cov, res.schedule).total);
      CHECK(res.value <= best + 1e-9);
      if (best > 0) worst_gap = std::max(worst_gap, gap(best, res.value));
    }
  }
  MESSAGE("largest greedy gap on tiny instances: " << worst_gap << "%");
}

TEST_CASE("greedy is deterministic and hyperoptic scores dominate myopic ones") {
  const Instance in = generate_tiny_instance(17);
  const CoverageTensor cov = build_coverage(in);
  for (auto mode : {ScoreMode::kMyopic, ScoreMode::kHyperoptic}) {
    const auto a = greedy(in, cov, {mode});
    const auto b = greedy(in, cov, {mode});
    CHECK(a.schedule == b.schedule);
    CHECK(same_trace(a.trace, b.trace));
    OutletSchedule x = OutletSchedule::initial(in);
    for (const auto& step : a.trace) {
      CHECK(score_hyperoptic(cov, x, step.period) >= score_myopic(cov, x, step.period) - 1e-12);
      for (int u = step.period; u < in.horizon; ++u) {
        x.at(u, step.station) = std::max(x.at(u, step.station), step.outlets);
      }
      CHECK(validate_schedule(in, x).feasible());
      CHECK(evaluate(cov, x).total == doctest::Approx(step.value));
    }
    CHECK(x == a.schedule);
  }
}

TEST_CASE("construction with alpha one is greedy") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance in = generate_tiny_instance(seed);
    const CoverageTensor cov = build_coverage(in);
    for (auto mode : {ScoreMode::kMyopic, ScoreMode::kHyperoptic}) {
      const OutletSchedule g = greedy(in, cov, {mode}).schedule;
      for (std::uint32_t s = 0; s < 5; ++s) {
        CounterRng rng(seed, s);
        CHECK(grasp_construct(in, cov, 1.0, mode, rng) == g);
      }
    }
  }
}

TEST_CASE("random construction is feasible and covers something") {
  const Instance in = generate_tiny_instance(6);
  const CoverageTensor cov = build_coverage(in);
  REQUIRE(brute_force_optimum(in, cov).value > 0.0);
  std::set<OutletSchedule> distinct;
  for (std::uint32_t s = 0; s < 100; ++s) {
    for (bool subtractive : {false, true}) {
      CounterRng rng(6, s);
      const OutletSchedule x = grasp_construct(in, cov, 0.0, ScoreMode::kMyopic, rng, subtractive);
      CHECK(validate_schedule(in, x).feasible());
      CHECK(evaluate(cov, x).total > 0.0);
      distinct.insert(x);
    }
  }
  CHECK(distinct.size() > 1);
}

TEST_CASE("filter rule") {
  CHECK(grasp_filter(100.0, 120.0, 1.10) == FilterDecision::kFilter);
  CHECK(grasp_filter(120.0, 120.0, 1.10) == FilterDecision::kKeep);
  CHECK(grasp_filter(100.0, 111.0, 1.10) == FilterDecision::kFilter);
  CHECK(grasp_filter(100.0, 109.0, 1.10) == FilterDecision::kKeep);
}

TEST_CASE("local search keeps an optimal schedule") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance in = generate_tiny_instance(seed);
    const CoverageTensor cov = build_coverage(in);
    const OutletSchedule best = brute_force_optimum(in, cov).schedule;
    for (auto mode : {ImprovementMode::kFirst, ImprovementMode::kBest}) {
      LocalSearchOptions opts;
      opts.improvement = mode;
      std::vector<TraceEntry> trace;
      CHECK(local_search(in, cov, best, opts, &trace) == best);
      CHECK(trace.empty());
    }
  }
}

TEST_CASE("transfer moves spending off a useless station") {
  // Class 1 is only covered by station 1, but station 0 holds the budget.
  const Instance in = split_classes({{10, 10}, {10, 10}}, {150, 0});
  const CoverageTensor cov = build_coverage(in);
  OutletSchedule start(2, 2);
  start.at(0, 0) = 1;
  start.at(1, 0) = 1;
  // Make station 0 useless.
  Instance useless = in;
  for (int t = 0; t < 2; ++t) useless.utility.asc(useless.station_alt(0), 0, t) = -10.0;
  const CoverageTensor ucov = build_coverage(useless);
  REQUIRE(evaluate(ucov, start).total == 0.0);
  for (auto mode : {ImprovementMode::kFirst, ImprovementMode::kBest}) {
    LocalSearchOptions opts;
    opts.improvement = mode;
    std::vector<TraceEntry> trace;
    const OutletSchedule out = local_search(useless, ucov, start, opts, &trace);
    CHECK(evaluate(ucov, out).total == doctest::Approx(20.0));
    CHECK(out.at(0, 1) == 1);
    CHECK(out.at(0, 0) == 0);
    REQUIRE_FALSE(trace.empty());
    CHECK(trace.front().move == "transfer");
  }
  CHECK(evaluate(cov, start).total > 0.0);
}

TEST_CASE("local search accepts only feasible improving moves") {
  SyntheticNetworkConfig cfg;
  cfg.num_nodes = 30;
  DatasetParams p = dataset_params(DatasetKind::kSimple);
  p.num_stations = 6;
  p.horizon = 3;
  p.max_outlets = 3;
  p.scenarios_per_alternative = 3;
  const Instance in = generate_instance(generate_network(cfg, 8), p, 8, 0);
  const CoverageTensor cov = build_coverage(in);
  for (std::uint32_t s = 0; s < 20; ++s) {
    CounterRng rng(8, s);
    const OutletSchedule start = test::random_feasible(in, rng);
    for (auto mode : {ImprovementMode::kFirst, ImprovementMode::kBest}) {
      double last = evaluate(cov, start).total;
      int accepted = 0;
      LocalSearchOptions opts;
      opts.improvement = mode;
      opts.on_accept = [&](const OutletSchedule& x) {
        ++accepted;
        CHECK(validate_solution(in, SolutionX::from_schedule(in, x)).feasible());
        const double v = evaluate(cov, x).total;
        CHECK(v > last);
        last = v;
      };
      std::vector<TraceEntry> trace;
      const OutletSchedule out = local_search(in, cov, start, opts, &trace);
      CHECK(static_cast<int>(trace.size()) == accepted);
      CHECK(evaluate(cov, out).total >= evaluate(cov, start).total);
      CHECK(evaluate(cov, out).total == doctest::Approx(last));
      for (std::size_t q = 1; q < trace.size(); ++q) CHECK(trace[q].value >= trace[q - 1].value);
    }
  }
}

TEST_CASE("one GRASP iteration with alpha one is greedy plus local search") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance in = generate_tiny_instance(seed);
    const CoverageTensor cov = build_coverage(in);
    GraspConfig cfg;
    cfg.alpha = 1.0;
    cfg.max_solutions = 1;
    const auto g = greedy(in, cov);
    const auto res = grasp(in, cov, cfg);
    CHECK(res.schedule == local_search(in, cov, g.schedule, {}));
    CHECK(res.value >= g.value);
    CHECK(res.termination == "max-solutions");
    CHECK(res.examined == 1);
  }
}

TEST_CASE("GRASP stays below the optimum and is reproducible") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Instance in = generate_tiny_instance(seed);
    const CoverageTensor cov = build_coverage(in);
    const double best = brute_force_optimum(in, cov).value;
    GraspConfig cfg;
    cfg.max_solutions = 30;
    cfg.seed = seed;
    for (auto mode : {ScoreMode::kMyopic, ScoreMode::kHyperoptic}) {
      cfg.mode = mode;
      const auto a = grasp(in, cov, cfg);
      const auto b = grasp(in, cov, cfg);
      CHECK(validate_schedule(in, a.schedule).feasible());
      CHECK(a.value == evaluate(cov, a.schedule).total);
      CHECK(a.value <= best + 1e-9);
      CHECK(a.schedule == b.schedule);
      CHECK(same_trace(a.trace, b.trace));
    }
  }
}

TEST_CASE("GRASP termination reasons") {
  const Instance in = generate_tiny_instance(9);
  const CoverageTensor cov = build_coverage(in);
  GraspConfig cfg;
  cfg.max_solutions = 3;
  auto res = grasp(in, cov, cfg);
  CHECK(res.termination == "max-solutions");
  CHECK(res.examined == 3);

  // Deterministic construction: after the first search every candidate is
  // the same and cannot beat the incumbent.
  cfg = {};
  cfg.alpha = 1.0;
  cfg.filter_warmup = 0;
  cfg.max_filtered = 5;
  res = grasp(in, cov, cfg);
  CHECK(res.termination == "max-filtered");
  CHECK(res.filtered == 5);
  CHECK(res.examined == 1);

  cfg.filter_warmup = 1000;
  cfg.max_solutions = 20;
  res = grasp(in, cov, cfg);
  CHECK(res.termination == "max-solutions");
  CHECK(res.filtered == 0);

  cfg = {};
  cfg.time_limit_s = 0.0;
  res = grasp(in, cov, cfg);
  CHECK(res.termination == "time-limit");
  CHECK(res.examined == 0);
  CHECK(res.schedule == OutletSchedule::initial(in));
  CHECK(res.value == evaluate(cov, res.schedule).total);

  cfg.alpha = 1.5;
  CHECK_THROWS_AS(grasp(in, cov, cfg), ConfigError);
}

TEST_CASE("rolling horizon time allocation") {
  RollingHorizonConfig cfg;
  CHECK(period_time_limits(cfg, 4) == std::vector<double>{1800, 1800, 1800, 1800});
  cfg.allocation = Allocation::kGeometric;
  CHECK(period_time_limits(cfg, 4) == std::vector<double>{3600, 1800, 900, 450});
  const auto ten = period_time_limits(cfg, 10);
  double sum = 0.0;
  for (double l : ten) sum += l;
  CHECK(sum <= 7200.0);
  cfg.total_time_limit_s = 60.0;
  const auto small = period_time_limits(cfg, 3);
  CHECK(small == std::vector<double>{30, 15, 7.5});
}

TEST_CASE("rolling horizon without a solver enumerates each period") {
  const ExternalSolver none;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance in = generate_tiny_instance(seed);
    const CoverageTensor cov = build_coverage(in);
    const auto res = rolling_horizon(in, cov, {}, none);
    const double best = brute_force_optimum(in, cov).value;
    CHECK(validate_schedule(in, res.schedule).feasible());
    CHECK(res.value <= best + 1e-9);
    CHECK(res.termination == "complete");
    if (in.horizon == 1) CHECK(res.value == doctest::Approx(best));
  }
}

TEST_CASE("rolling horizon is myopic") {
  // Period 1 favours station 0 slightly; all of period 2 belongs to station 1.
  const Instance in = split_classes({{11, 0}, {10, 100}}, {150, 0});
  const CoverageTensor cov = build_coverage(in);
  const auto rh = rolling_horizon(in, cov, {}, ExternalSolver());
  const auto best = brute_force_optimum(in, cov);
  CHECK(rh.value == doctest::Approx(11.0));
  CHECK(best.value == doctest::Approx(110.0));
  CHECK(gap(best.value, rh.value) == doctest::Approx(90.0));
}

TEST_CASE("rolling horizon refuses oversized enumeration") {
  const Instance in = generate_tiny_instance(3);
  RollingHorizonConfig cfg;
  cfg.fallback_budget.max_configurations = 1;
  Instance rich = in;
  for (int t = 0; t < rich.horizon; ++t) rich.costs.budget(t) = 1000.0;
  CHECK_THROWS_AS(rolling_horizon(rich, build_coverage(rich), cfg, ExternalSolver()), DomainError);
}

TEST_CASE("rolling horizon through the external solver") {
  const ExternalSolver solver = ExternalSolver::from_env();
  if (!solver.configured()) {
    MESSAGE("EVCS_SOLVER_CMD not set; solver checks skipped");
    return;
  }
  RollingHorizonConfig cfg;
  cfg.total_time_limit_s = 120.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Instance in = generate_tiny_instance(seed);
    const CoverageTensor cov = build_coverage(in);
    const auto res = rolling_horizon(in, cov, cfg, solver);
    const auto enumerated = rolling_horizon(in, cov, cfg, ExternalSolver());
    CHECK(res.termination == "complete");
    CHECK(validate_schedule(in, res.schedule).feasible());
    CHECK(res.trace.front().value == doctest::Approx(enumerated.trace.front().value));
    CHECK(res.value <= brute_force_optimum(in, cov).value + 1e-9);
  }
}

TEST_CASE("trace CSV") {
  std::ostringstream out;
  write_trace_csv(out, {{0, 2, 1, "add", 1.5, 3.0, 0.25}});
  CHECK(out.str().rfind("period,station,outlets,move,score,value,elapsed_s\n", 0) == 0);
  CHECK(out.str().find("1,2,1,add,1.5,3,0.25") != std::string::npos);
}
