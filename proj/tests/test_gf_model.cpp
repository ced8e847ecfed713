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

#include <sstream>

#include "evcs/coverage.hpp"
#include "evcs/datasets.hpp"
#include "evcs/error.hpp"
#include "evcs/evaluate.hpp"
#include "evcs/exact.hpp"
#include "evcs/external_solver.hpp"
#include "evcs/gf.hpp"
#include "evcs/growth_function.hpp"
#include "evcs/lp_format.hpp"
#include "evcs/synthetic_network.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace evcs;

namespace {

GrowthFunction shifted(double c) { return GrowthFunction({{0.0, 1.0, 1.0, c}}); }

OutletSchedule open_all(const Instance& in, int level = 1) {
  OutletSchedule x(in.num_stations(), in.horizon);
  for (int t = 0; t < in.horizon; ++t) {
    for (int j = 0; j < in.num_stations(); ++j) x.at(t, j) = level;
  }
  return x;
}

}  // namespace

TEST_CASE("growth function from yearly coverage") {
  const GrowthFunction g = generate_growth_function({100, 150, 180, 200}, 1000);
  REQUIRE(g.size() == 5);
  const double bps[] = {0.0, 0.1, 0.25, 0.43, 0.63, 1.0};
  for (int s = 0; s < 5; ++s) {
    CHECK(g.segments()[s].q_lo == doctest::Approx(bps[s]));
    CHECK(g.segments()[s].q_hi == doctest::Approx(bps[s + 1]));
  }
  CHECK(g(0.0) == doctest::Approx(0.1));
  CHECK(g(0.1) == doctest::Approx(0.25));
  CHECK(g(0.25) == doctest::Approx(0.43));
  CHECK(g(0.43) == doctest::Approx(0.63));
  // Last data slope (0.63 - 0.43) / (0.43 - 0.25) carried one step further.
  CHECK(g(0.63) == doctest::Approx(0.63 + 0.2 / 0.18 * 0.2));
  CHECK(g(1.0) == doctest::Approx(1.0));
  CHECK(g(0.05) == doctest::Approx(0.175));
  for (double z = 0.0; z <= 1.0; z += 0.01) {
    CHECK(g(z) >= z - 1e-12);
    CHECK(g(z) <= 1.0 + 1e-12);
    CHECK(g(std::min(1.0, z + 0.01)) >= g(z) - 1e-12);
  }
}

TEST_CASE("growth function edge cases") {
  CHECK(generate_growth_function({0, 0, 0}, 500) == GrowthFunction::identity());
  CHECK(GrowthFunction::identity()(0.37) == doctest::Approx(0.37));
  CHECK_THROWS_AS(generate_growth_function({600, 600}, 1000), DomainError);
  CHECK_THROWS_AS(generate_growth_function({100, -50, 80}, 1000), DomainError);
  CHECK_THROWS_AS(GrowthFunction({{0.0, 0.5, 1.0, 0.0}}), DomainError);
  CHECK_THROWS_AS(GrowthFunction({{0.0, 0.5, 1.0, 0.0}, {0.5, 1.0, 1.0, 0.1}}), DomainError);
  CHECK_THROWS_AS(GrowthFunction({{0.0, 1.0, -0.5, 0.5}}), DomainError);
  const GrowthFunction one = generate_growth_function({250}, 1000);
  CHECK(one.size() == 1);
  CHECK(one(0.0) == doctest::Approx(0.25));
  CHECK(average_yearly({{1, 2, 3}, {3, 4, 5}}) == std::vector<double>{2, 3, 4});
}

TEST_CASE("growth function file round trip") {
  const GrowthFunction g = generate_growth_function({100, 150, 180, 200}, 1000);
  std::stringstream io;
  write_growth_function(io, g);
  CHECK(io.str().rfind("q_lo,q_hi,slope,intercept\n", 0) == 0);
  const GrowthFunction back = read_growth_function(io);
  REQUIRE(back.size() == g.size());
  for (double z = 0.0; z <= 1.0; z += 0.05) CHECK(back(z) == doctest::Approx(g(z)).epsilon(1e-12));
  std::stringstream bad("q_lo,q_hi,slope,intercept\n0,0.5,1,0\n");
  CHECK_THROWS(read_growth_function(bad));
}

TEST_CASE("GF instance data") {
  const Instance in = test::handmade(2, 3, 2, 6, 1, 400.0);
  const GfInstance gf = make_gf_instance(in, GrowthFunction::identity());
  CHECK(gf.num_nodes() == 4);
  CHECK(gf.node_population == std::vector<double>{10, 10, 10, 0});
  CHECK(gf.population == 30.0);
  CHECK(gf.willing[0] == std::vector<int>{0, 1, 2, 3});
  CHECK(gf.budgets == std::vector<double>{400, 400});
  CHECK(gf.fixed_cost == std::vector<double>{100, 100});
  CHECK(gf.unit_cost == 50.0);
  CHECK(gf.home_fraction == 0.566);
  CHECK_FALSE(gf.capacitated());
  GfParams near;
  near.radius_km = 1.0;
  CHECK(make_gf_instance(in, GrowthFunction::identity(), near).willing[1] == std::vector<int>{0, 1, 2});
}

TEST_CASE("GF costs") {
  const Instance in = test::handmade(2, 1, 2, 6, 1, 400.0);
  const GfInstance gf = make_gf_instance(in, GrowthFunction::identity());
  OutletSchedule x(2, 2);
  x.at(0, 0) = 2;
  x.at(1, 0) = 3;
  x.at(1, 1) = 1;
  CHECK(gf_cost(gf, x, 0) == 100 + 2 * 50);
  CHECK(gf_cost(gf, x, 1) == 50 + 100 + 50);
  CHECK(gf_feasible(gf, x));
  x.at(1, 1) = 6;
  CHECK_FALSE(gf_feasible(gf, x));
}

TEST_CASE("single-segment growth adds a fixed share per year") {
  const Instance in = test::handmade(1, 3, 3, 2, 1, 400.0);
  GfParams far;
  far.radius_km = 1.0;  // station at n0 reaches n0 and n1 only
  const GfInstance gf = make_gf_instance(in, shifted(0.1), far);
  const auto ev = gf_recursion(gf, open_all(in));
  for (int t = 0; t < 3; ++t) {
    CHECK(ev.node_evs[t][0] == doctest::Approx(10 * 0.1 * (t + 1)));
    CHECK(ev.node_evs[t][1] == doctest::Approx(10 * 0.1 * (t + 1)));
    CHECK(ev.node_evs[t][2] == 0.0);
    CHECK(ev.yearly_total[t] == doctest::Approx(2.0 * (t + 1)));
  }
  CHECK(gf_node_ev_percent(gf, ev)[0] == doctest::Approx(30.0));
}

TEST_CASE("growth function fed back reproduces the yearly totals") {
  const Instance in = test::handmade(2, 3, 4, 2, 1, 400.0);
  const GfInstance base = make_gf_instance(in, GrowthFunction::identity());
  const std::vector<double> yearly{3.0, 4.5, 5.4, 6.0};
  const GfInstance gf = make_gf_instance(in, generate_growth_function(yearly, base.population));
  const auto ev = gf_recursion(gf, open_all(in));
  double cumulative = 0.0;
  for (int t = 0; t < 4; ++t) {
    cumulative += yearly[t];
    CHECK(ev.yearly_total[t] == doctest::Approx(cumulative).epsilon(1e-9));
  }
}

TEST_CASE("growth function from an MC optimum closes the loop") {
  // All classes live within reach of every station.
  Instance in = test::handmade(2, 3, 3, 2, 12, 200.0);
  test::randomize(in, 5, 1.0);
  for (int i = 0; i < 3; ++i) {
    for (int t = 0; t < 3; ++t) in.utility.asc(kOptOutAlt, i, t) = 2.5;
  }
  const CoverageTensor cov = build_coverage(in);
  const ExactResult best = brute_force_optimum(in, cov);
  const auto yearly = evaluate(cov, best.schedule).per_period;
  REQUIRE(best.value > 0.0);
  REQUIRE(best.value < 30.0);
  const GfInstance gf = make_gf_instance(in, GrowthFunction::identity());
  const GfInstance fed = make_gf_instance(in, generate_growth_function(yearly, gf.population));
  const auto ev = gf_recursion(fed, open_all(in));
  double cumulative = 0.0;
  for (int t = 0; t < 3; ++t) {
    cumulative += yearly[t];
    CHECK(ev.yearly_total[t] == doctest::Approx(cumulative).epsilon(1e-9));
  }
}

TEST_CASE("GF enumeration") {
  const Instance in = test::handmade(3, 3, 2, 2, 1, 200.0);
  SUBCASE("zero budget opens nothing") {
    GfParams p;
    p.budgets = {0.0, 0.0};
    const GfInstance gf = make_gf_instance(in, shifted(0.1), p);
    const GfResult res = gf_enumerate(gf);
    CHECK(res.final_evs == 0.0);
    CHECK(res.feasible_count == 1);
    CHECK(res.outlets == OutletSchedule(3, 2));
  }
  SUBCASE("best schedule beats every feasible one") {
    GfParams p;
    p.radius_km = 1.0;
    const GfInstance gf = make_gf_instance(in, shifted(0.2), p);
    const GfResult res = gf_enumerate(gf);
    CHECK(gf_feasible(gf, res.outlets));
    CHECK(res.final_evs == doctest::Approx(gf_recursion(gf, res.outlets).yearly_total.back()));
    CounterRng rng(3, 3);
    for (int rep = 0; rep < 200; ++rep) {
      OutletSchedule x(3, 2);
      for (int t = 0; t < 2; ++t) {
        for (int j = 0; j < 3; ++j) {
          x.at(t, j) = std::max(t > 0 ? x.at(t - 1, j) : 0, static_cast<int>(rng.below(3)));
        }
      }
      if (!gf_feasible(gf, x)) continue;
      CHECK(gf_recursion(gf, x).yearly_total.back() <= res.final_evs + 1e-9);
    }
  }
}

TEST_CASE("adjusted GF solutions") {
  Instance in = test::handmade(4, 2, 3, 6, 1, 400.0);
  OutletSchedule gf_x(4, 3);
  gf_x.at(1, 3) = 1;
  gf_x.at(2, 3) = 1;
  const OutletSchedule adj = adjust_solution_max_outlets(in, gf_x);
  CHECK(adj.at(0, 3) == 0);
  CHECK(adj.at(1, 3) == 6);
  CHECK(adj.at(2, 3) == 6);
  CHECK(adj.at(2, 0) == 0);
  CHECK(adjust_solution_max_outlets(in, OutletSchedule(4, 3)) == OutletSchedule(4, 3));

  gf_x.at(0, 0) = 1;
  gf_x.at(1, 0) = 1;
  gf_x.at(2, 0) = 1;
  gf_x.at(0, 1) = 2;
  gf_x.at(1, 1) = 2;
  gf_x.at(2, 1) = 2;
  const OutletSchedule two = adjust_solution_max_outlets(in, gf_x);
  CHECK(validate_solution(in, SolutionX::from_schedule(in, two)).has(ViolationKind::kBudget));
}

TEST_CASE("MC evaluation of GF solutions") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Instance in = generate_tiny_instance(seed);
    const CoverageTensor cov = build_coverage(in);
    const double mc_best = brute_force_optimum(in, cov).value;
    const GfInstance gf = make_gf_instance(in, shifted(0.1));
    const GfResult res = gf_enumerate(gf);
    const double gf_value = evaluate_under_mc(cov, res.outlets);
    CHECK(gf_value == evaluate(cov, res.outlets).total);
    CHECK(mc_best >= gf_value - 1e-9);
    CHECK(evaluate_under_mc(cov, adjust_solution_max_outlets(in, res.outlets)) >= gf_value - 1e-9);
  }
}

TEST_CASE("home charging baseline under MC") {
  SyntheticNetworkConfig cfg;
  cfg.num_nodes = 20;
  DatasetParams p = dataset_params(DatasetKind::kHomeCharging);
  p.num_stations = 3;
  p.horizon = 2;
  p.scenarios_per_alternative = 2;
  const Instance in = generate_instance(generate_network(cfg, 2), p, 2, 0);
  const CoverageTensor cov = build_coverage(in);
  const double base = evaluate_under_mc(cov, OutletSchedule::initial(in));
  CHECK(base == doctest::Approx(cov.forced_mass()));
  CHECK(base > 0.0);
}

TEST_CASE("GF model rows") {
  const Instance in = generate_tiny_instance(7);
  const GfInstance gf = make_gf_instance(in, generate_growth_function({2, 3}, 100));
  const MilpModel m = build_gf(gf);
  CHECK(m.num_constraints() == gf_expected_rows(gf));
  CHECK(m.objective_sense() == ObjectiveSense::kMaximize);
  const MilpModel back = parse_lp(write_lp(m));
  CHECK(back.num_constraints() == m.num_constraints());
  CHECK(back.num_variables() == m.num_variables());

  GfParams capped;
  capped.capacity = 5.0;
  const GfInstance gc = make_gf_instance(in, GrowthFunction::identity(), capped);
  CHECK(gc.capacitated());
  CHECK(build_gf(gc).num_constraints() == gf_expected_rows(gc));
  CHECK(build_gf(gc).num_constraints() ==
        gf_expected_rows(gf) - gf.growth.size() * 2 * 2 + 1 * 2 * 2 + in.num_stations() * in.horizon);
  CHECK_THROWS_AS(gf_recursion(gc, open_all(in)), DomainError);
}

TEST_CASE("GF model solved externally matches enumeration") {
  const ExternalSolver solver = ExternalSolver::from_env();
  if (!solver.configured()) {
    MESSAGE("EVCS_SOLVER_CMD not set; solver checks skipped");
    return;
  }
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Instance in = generate_tiny_instance(seed);
    const GfInstance gf = make_gf_instance(in, generate_growth_function({3, 2}, 100));
    const GfResult enumerated = gf_enumerate(gf);
    const auto res = solver.solve(build_gf(gf), 120);
    REQUIRE(res.status == SolveStatus::kOptimal);
    CHECK(res.objective == doctest::Approx(enumerated.final_evs).epsilon(1e-6));
    const OutletSchedule x = gf_schedule_from_values(gf, res.values);
    CHECK(gf_feasible(gf, x));
    CHECK(gf_recursion(gf, x).yearly_total.back() == doctest::Approx(res.objective).epsilon(1e-6));

    GfParams broke;
    broke.budgets.assign(in.horizon, 0.0);
    const auto zero = solver.solve(build_gf(make_gf_instance(in, generate_growth_function({3, 2}, 100), broke)), 60);
    REQUIRE(zero.status == SolveStatus::kOptimal);
    CHECK(zero.objective == doctest::Approx(0.0));
  }
}

TEST_CASE("per-node tables") {
  const Instance in = test::handmade(1, 2, 1, 1, 1, 400.0);
  const std::vector<NodeColumn> cols{{"mc_percent", {50.0, 25.0, 0.0}}};
  std::ostringstream csv;
  write_node_table_csv(csv, in, cols);
  CHECK(csv.str().rfind("node_id,population,mc_percent\n", 0) == 0);
  CHECK(csv.str().find("n1,10,25") != std::string::npos);
  std::ostringstream geo;
  write_node_geojson(geo, in, cols);
  const auto doc = nlohmann::json::parse(geo.str());
  CHECK(doc["type"] == "FeatureCollection");
  REQUIRE(doc["features"].size() == 3);
  CHECK(doc["features"][1]["properties"]["mc_percent"] == 25.0);
  CHECK(doc["features"][1]["geometry"]["type"] == "Point");

  const CoverageTensor cov = build_coverage(in);
  const auto pct = mc_node_ev_percent(in, cov, open_all(in));
  REQUIRE(pct.size() == 3);
  CHECK(pct[0] == doctest::Approx(100.0));
  CHECK(pct[2] == 0.0);
}
