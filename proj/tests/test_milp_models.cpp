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

#include <algorithm>
#include <cmath>
#include <limits>

#include "evcs/bounds.hpp"
#include "evcs/coverage.hpp"
#include "evcs/datasets.hpp"
#include "evcs/error.hpp"
#include "evcs/evaluate.hpp"
#include "evcs/exact.hpp"
#include "evcs/external_solver.hpp"
#include "evcs/formulations.hpp"
#include "evcs/lp_format.hpp"
#include "evcs/milp_model.hpp"
#include "evcs/synthetic_network.hpp"
#include "support.hpp"

using namespace evcs;

namespace {

bool satisfies(const MilpModel& m, const std::vector<double>& v, double tol = 1e-7) {
  for (std::size_t q = 0; q < m.num_variables(); ++q) {
    const auto& var = m.variables()[q];
    if (v[q] < var.lower - tol || v[q] > var.upper + tol) return false;
  }
  for (const auto& row : m.constraints()) {
    double lhs = 0.0;
    for (const auto& term : row.terms) lhs += term.coef * v[term.var];
    const bool ok = row.sense == RowSense::kLessEqual      ? lhs <= row.rhs + tol
                    : row.sense == RowSense::kGreaterEqual ? lhs >= row.rhs - tol
                                                           : std::abs(lhs - row.rhs) <= tol;
    if (!ok) return false;
  }
  return true;
}

void put(const MilpModel& m, std::vector<double>& v, const std::string& name, double value) {
  const auto q = m.find(name);
  REQUIRE(q.has_value());
  v[*q] = value;
}

void put_x(const Instance& in, const MilpModel& m, std::vector<double>& v, const OutletSchedule& x) {
  for (int t = 0; t < in.horizon; ++t) {
    for (int j = 0; j < in.num_stations(); ++j) {
      for (int k = 1; k <= in.stations[j].max_outlets; ++k) {
        put(m, v, x_name(j, k, t), k <= x.at(t, j) ? 1.0 : 0.0);
      }
    }
  }
}

std::string sfx(int t, int i, int r) {
  return std::to_string(t + 1) + "_" + std::to_string(i) + "_" + std::to_string(r);
}

/// SL variable values induced by x: closed-form utilities, alpha at the best
/// one and the selection on a station whenever one ties or beats the opt-out.
std::vector<double> sl_point(const Instance& in, const BigMBounds& bounds, const MilpModel& m,
                             const OutletSchedule& x) {
  std::vector<double> v(m.num_variables(), 0.0);
  put_x(in, m, v, x);
  for (int t = 0; t < in.horizon; ++t) {
    for (int i = 0; i < in.num_classes(); ++i) {
      for (int r = 0; r < in.classes[i].scenario_count; ++r) {
        const std::string s = sfx(t, i, r);
        const double u0 = optout_utility(in, t, i, r);
        put(m, v, "u_" + s + "_o", u0);
        double best = u0;
        std::string pick = "o";
        for (int j : in.choice(i, t).stations) {
          const int level = x.at(t, j);
          const double u = level == 0 ? bounds.a_lower(t, i, r)
                                      : station_utility_at_k(in, t, i, r, j, level);
          put(m, v, "u_" + s + "_s" + std::to_string(j), u);
          if (u > best || (u == best && pick == "o")) {
            best = u;
            pick = "s" + std::to_string(j);
          }
        }
        put(m, v, "alpha_" + s, best);
        put(m, v, "w_" + s + "_" + pick, 1.0);
      }
    }
  }
  return v;
}

ExternalSolver solver_or_skip() {
  const ExternalSolver solver = ExternalSolver::from_env();
  if (!solver.configured()) MESSAGE("EVCS_SOLVER_CMD not set; solver checks skipped");
  return solver;
}

}  // namespace

TEST_CASE("bounds on a single station and scenario") {
  Instance in = test::handmade(1, 1, 1, 2, 1, 400.0);
  in.utility.asc(kOptOutAlt, 0, 0) = 5.0;
  in.utility.asc(in.station_alt(0), 0, 0) = 1.5;
  in.errors.row(0, 0, 0)[1] = 0.25;
  in.utility.beta(0, 0, 1, 0) = 0.5;
  in.utility.beta(0, 0, 2, 0) = 0.75;
  const BigMBounds b = compute_bounds(in);
  CHECK(b.sound());
  CHECK(b.a_lower(0, 0, 0) == 1.75);
  CHECK(b.b(0, 0, 0, 0) == 3.0);
  CHECK(b.nu(0, 0, 0, 0) == 1.25);
  // The opt-out is the largest utility here.
  CHECK(b.mu(0, 0, 0, 0) == 0.0);
  CHECK(b.mu(0, 0, 0, 1) == 5.0 - 1.75);
}

TEST_CASE("bounds agree with a full scan") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Instance in = test::handmade(3, 2, 2, 2, 6, 400.0);
    test::randomize(in, seed);
    for (int i = 0; i < 2; ++i) {
      for (int t = 0; t < 2; ++t) in.utility.asc(kOptOutAlt, i, t) = 3.0;
    }
    const BigMBounds b = compute_bounds(in);
    REQUIRE(b.sound());
    CHECK(b.violations.empty());
    for (int i = 0; i < 2; ++i) {
      for (int t = 0; t < 2; ++t) {
        double a = std::numeric_limits<double>::infinity();
        for (int r = 0; r < 6; ++r) {
          for (int j = 0; j < 3; ++j) {
            a = std::min(a, in.utility.asc(in.station_alt(j), i, t) + in.errors.row(i, t, r)[1 + j]);
          }
        }
        for (int r = 0; r < 6; ++r) {
          CHECK(b.a_lower(t, i, r) == a);
          const double u0 = optout_utility(in, t, i, r);
          CHECK(a < u0);
          double top = u0;
          for (int j = 0; j < 3; ++j) {
            const double bj = station_utility_at_k(in, t, i, r, j, 2);
            CHECK(b.b(t, i, r, j) == doctest::Approx(bj));
            CHECK(b.nu(t, i, r, j) == doctest::Approx(bj - a));
            CHECK(b.nu(t, i, r, j) >= 0.0);
            top = std::max(top, bj);
          }
          CHECK(b.mu(t, i, r, 0) == doctest::Approx(top - u0));
          for (int j = 0; j < 3; ++j) CHECK(b.mu(t, i, r, 1 + j) == doctest::Approx(top - a));
        }
      }
    }
  }
}

TEST_CASE("lower bound reaching the opt-out is repaired or refused") {
  Instance in = test::handmade(1, 1, 1, 1, 2, 400.0);
  in.utility.asc(in.station_alt(0), 0, 0) = 1.0;  // opt-out constant 0
  const BigMBounds repaired = compute_bounds(in);
  CHECK(repaired.repaired);
  CHECK(repaired.sound());
  CHECK_FALSE(repaired.warnings.empty());
  CHECK(repaired.a_lower(0, 0, 0) < optout_utility(in, 0, 0, 0));
  BoundsOptions strict;
  strict.repair = false;
  const BigMBounds refused = compute_bounds(in, strict);
  CHECK_FALSE(refused.sound());
  CHECK(refused.violations.size() == 2);
  CHECK_THROWS_AS(build_sl(in, refused), ValidationError);
}

TEST_CASE("single-level model of the smallest instance has eleven rows") {
  Instance in = test::handmade(1, 1, 1, 1, 1, 400.0);
  in.utility.asc(kOptOutAlt, 0, 0) = 2.0;
  const MilpModel sl = build_sl(in, compute_bounds(in));
  // budget; u0 fix; 4 discount rows; 2 + 1 + 2 lower-level rows.
  CHECK(sl.num_constraints() == 11);
  CHECK(sl.num_variables() == 6);  // x, alpha, u and w for two alternatives
  CHECK(sl.count(VarType::kBinary) == 3);
  CHECK(sl.objective_sense() == ObjectiveSense::kMinimize);
  const MilpModel back = parse_lp(write_lp(sl));
  CHECK(back.num_constraints() == 11);
  CHECK(back.num_variables() == 6);
  CHECK(back.objective_sense() == ObjectiveSense::kMinimize);
  CHECK(write_lp(back) == write_lp(sl));

  SlOptions relaxed;
  relaxed.relax_w = true;
  CHECK(build_sl(in, compute_bounds(in), relaxed).count(VarType::kBinary) == 1);
}

TEST_CASE("maximum covering model shape") {
  const Instance in = generate_tiny_instance(12);
  const CoverageTensor cov = build_coverage(in);
  const MilpModel mc = build_mc(in, cov);
  std::size_t cov_rows = 0;
  for (const auto& row : mc.constraints()) cov_rows += row.name.rfind("cov_", 0) == 0;
  CHECK(cov_rows == cov.triplet_count() - cov.forced_count());
  CHECK(mc.objective_sense() == ObjectiveSense::kMaximize);
  const MilpModel back = parse_lp(write_lp(mc));
  CHECK(back.num_constraints() == mc.num_constraints());
  CHECK(back.num_variables() == mc.num_variables());
  CHECK(back.count(VarType::kBinary) == mc.count(VarType::kBinary));
}

TEST_CASE("substituting a schedule satisfies both models") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Instance in = generate_tiny_instance(seed);
    const CoverageTensor cov = build_coverage(in);
    const BigMBounds bounds = compute_bounds(in);
    const MilpModel sl = build_sl(in, bounds);
    const MilpModel mc = build_mc(in, cov);
    CounterRng rng(seed, 99);
    for (int rep = 0; rep < 20; ++rep) {
      const OutletSchedule x = test::random_feasible(in, rng);
      const double f = evaluate(cov, x).total;

      const auto v = sl_point(in, bounds, sl, x);
      CHECK(satisfies(sl, v));
      CHECK(sl.objective_value(v) + f == doctest::Approx(cov.total_mass()).epsilon(1e-9));

      std::vector<double> w(mc.num_variables(), 0.0);
      put_x(in, mc, w, x);
      for (int t = 0; t < in.horizon; ++t) {
        for (int i = 0; i < in.num_classes(); ++i) {
          for (int r = 0; r < in.classes[i].scenario_count; ++r) {
            bool covered = false;
            for (int j = 0; j < in.num_stations(); ++j) covered = covered || cov.covers(j, x.at(t, j), t, i, r);
            if (auto q = mc.find("w_" + sfx(t, i, r))) w[*q] = covered ? 1.0 : 0.0;
          }
        }
      }
      CHECK(satisfies(mc, w));
      CHECK(mc.objective_value(w) == doctest::Approx(f));
    }
  }
}

TEST_CASE("LP writer matches a hand-written file") {
  MilpModel m;
  const int y = m.add_variable("y", 0, 4, VarType::kInteger);
  const int x = m.add_binary("x");
  m.add_constraint("cap", {{y, 2.0}, {x, 3.0}}, RowSense::kLessEqual, 7.5);
  m.add_constraint("link", {{x, 1.0}, {y, -1.0}}, RowSense::kGreaterEqual, -2);
  m.set_objective(ObjectiveSense::kMaximize, {{x, 1.0}, {y, 0.1}}, 2.0);
  const std::string golden = R"(Maximize
 obj: 1 x + 0.1 y + 2
Subject To
 cap: 3 x + 2 y <= 7.5
 link: 1 x - 1 y >= -2
Bounds
 0 <= x <= 1
 0 <= y <= 4
Binaries
 x
Generals
 y
End
)";
  auto tokens = [](const std::string& text) {
    std::vector<std::string> out;
    std::string tok;
    bool comment = false;
    for (char c : text) {
      if (c == '\\') comment = true;
      if (c == '\n') comment = false;
      if (comment) continue;
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!tok.empty()) out.push_back(tok);
        tok.clear();
      } else {
        tok += c;
      }
    }
    if (!tok.empty()) out.push_back(tok);
    return out;
  };
  CHECK(tokens(write_lp(m)) == tokens(golden));
  const MilpModel back = parse_lp(golden);
  CHECK(back.num_variables() == 2);
  CHECK(back.objective_constant() == 2.0);
  CHECK(back.variables()[*back.find("y")].type == VarType::kInteger);
}

TEST_CASE("LP numbers keep twelve significant digits") {
  MilpModel m;
  const int x = m.add_variable("x", 0, 1, VarType::kContinuous);
  m.add_constraint("r", {{x, 1.0 / 3.0}}, RowSense::kLessEqual, 123456.789012345);
  m.set_objective(ObjectiveSense::kMinimize, {{x, 1.0}});
  const std::string lp = write_lp(m);
  CHECK(lp.find("0.333333333333 x") != std::string::npos);
  CHECK(lp.find("123456.789012") != std::string::npos);
}

TEST_CASE("duplicate names and malformed files are rejected") {
  MilpModel m;
  const int a = m.add_binary("x_0_1_1");
  m.add_binary("x_0_1_1");
  m.set_objective(ObjectiveSense::kMaximize, {{a, 1.0}});
  CHECK_THROWS_AS(m.validate(), ValidationError);
  CHECK_THROWS_AS(write_lp(m), ValidationError);

  MilpModel n;
  n.add_binary("bad name");
  CHECK_THROWS_AS(n.validate(), ValidationError);

  CHECK_THROWS_AS(parse_lp("Maximize\n obj: 1 x\nSubject To\n c: 1 x <=\nEnd\n"), ParseError);
}

TEST_CASE("solution files in both styles") {
  const auto plain = parse_solution("Optimal - objective value 12\n  0 x_0_1_1  1  0\n  1 w_1_0_0 0.5 0\n");
  CHECK(plain.status == SolveStatus::kOptimal);
  CHECK(plain.objective == 12.0);
  CHECK(plain.value("x_0_1_1") == 1.0);
  CHECK(plain.value("w_1_0_0") == 0.5);

  const auto pairs = parse_solution("status time limit\nobjective 3.25\nx_0_1_1 1\n");
  CHECK(pairs.status == SolveStatus::kFeasibleTimeout);
  CHECK(pairs.has_solution());

  const auto sectioned = parse_solution(
      "Model status\nOptimal\n\n# Primal solution values\nFeasible\nObjective 7.5\n# Columns 2\nx 1\ny 2.5\n");
  CHECK(sectioned.status == SolveStatus::kOptimal);
  CHECK(sectioned.objective == 7.5);
  CHECK(sectioned.value("y") == 2.5);
  CHECK_FALSE(sectioned.value("z").has_value());

  CHECK(parse_solution("status infeasible\n").status == SolveStatus::kInfeasible);
}

TEST_CASE("unconfigured solver reports its status") {
  const ExternalSolver none;
  CHECK_FALSE(none.configured());
  MilpModel m;
  m.set_objective(ObjectiveSense::kMaximize, {{m.add_binary("x"), 1.0}});
  const auto res = none.solve(m, 10);
  CHECK(res.status == SolveStatus::kNotConfigured);
  CHECK_FALSE(res.has_solution());
}

TEST_CASE("external solves match enumeration") {
  const ExternalSolver solver = solver_or_skip();
  if (!solver.configured()) return;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Instance in = generate_tiny_instance(seed);
    const CoverageTensor cov = build_coverage(in);
    const double best = brute_force_optimum(in, cov).value;

    const auto mc = solver.solve(build_mc(in, cov), 120);
    REQUIRE(mc.status == SolveStatus::kOptimal);
    CHECK(mc.objective == doctest::Approx(best).epsilon(1e-6));
    for (const auto& [name, value] : mc.values) {
      if (name.rfind("w_", 0) == 0) CHECK((std::abs(value) < 1e-9 || std::abs(value - 1.0) < 1e-9));
    }
    const OutletSchedule x = schedule_from_values(in, mc.values);
    CHECK(validate_schedule(in, x).feasible());
    CHECK(evaluate(cov, x).total == doctest::Approx(best).epsilon(1e-6));

    const auto sl = solver.solve(build_sl(in, compute_bounds(in)), 120);
    REQUIRE(sl.status == SolveStatus::kOptimal);
    CHECK(mc.objective + sl.objective + cov.forced_mass() ==
          doctest::Approx(cov.total_mass()).epsilon(1e-6));
    const OutletSchedule xs = schedule_from_values(in, sl.values);
    CHECK(evaluate(cov, xs).total == doctest::Approx(cov.total_mass() - sl.objective).epsilon(1e-6));
  }
}

TEST_CASE("zero budget keeps the initial state") {
  const ExternalSolver solver = solver_or_skip();
  if (!solver.configured()) return;
  Instance in = generate_tiny_instance(5);
  for (int t = 0; t < in.horizon; ++t) in.costs.budget(t) = 0.0;
  const CoverageTensor cov = build_coverage(in);
  const auto sl = solver.solve(build_sl(in, compute_bounds(in)), 60);
  REQUIRE(sl.status == SolveStatus::kOptimal);
  CHECK(sl.objective == doctest::Approx(cov.total_mass() - cov.forced_mass()));
  const auto mc = solver.solve(build_mc(in, cov), 60);
  REQUIRE(mc.status == SolveStatus::kOptimal);
  CHECK(mc.objective == doctest::Approx(cov.forced_mass()));
}

TEST_CASE("infeasible toy model") {
  const ExternalSolver solver = solver_or_skip();
  if (!solver.configured()) return;
  Instance in = test::handmade(2, 1, 1, 1, 2, 100.0);
  MilpModel mc = build_mc(in, build_coverage(in));
  mc.add_constraint("force_open", {{*mc.find(x_name(0, 1, 0)), 1.0}}, RowSense::kGreaterEqual, 1.0);
  CHECK(solver.solve(mc, 30).status == SolveStatus::kInfeasible);
}

TEST_CASE("time limit on a long-horizon model returns an incumbent") {
  const ExternalSolver solver = solver_or_skip();
  if (!solver.configured()) return;
  SyntheticNetworkConfig cfg;
  cfg.num_nodes = 40;
  DatasetParams p = dataset_params(DatasetKind::kLongSpan);
  p.scenarios_per_alternative = 1;
  const Instance in = generate_instance(generate_network(cfg, 3), p, 3, 0);
  const CoverageTensor cov = build_coverage(in);
  const auto res = solver.solve(build_mc(in, cov), 1.0);
  CHECK(res.status == SolveStatus::kFeasibleTimeout);
  REQUIRE(res.has_solution());
  const OutletSchedule x = schedule_from_values(in, res.values);
  CHECK(validate_schedule(in, x).feasible());
  CHECK(evaluate(cov, x).total == doctest::Approx(res.objective).epsilon(1e-6));
}
