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

#include "evcs/formulations.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "evcs/error.hpp"

namespace evcs {

namespace {

std::string triplet_suffix(int t, int i, int r) {
  return std::to_string(t + 1) + "_" + std::to_string(i) + "_" + std::to_string(r);
}

/// x variables for all periods, budget, ladder and persistence rows.
std::vector<std::vector<std::vector<int>>> add_outlet_ladder(const Instance& in, MilpModel& model) {
  const int M = in.num_stations();
  const int T = in.horizon;
  std::vector<std::vector<std::vector<int>>> x(M);
  for (int j = 0; j < M; ++j) {
    const int m = in.stations[j].max_outlets;
    x[j].assign(m + 1, std::vector<int>(T, -1));
    for (int k = 1; k <= m; ++k) {
      for (int t = 0; t < T; ++t) {
        // Persistence from the initial state is a bound in the first period.
        const double lo = (t == 0 && k <= in.stations[j].initial_outlets) ? 1.0 : 0.0;
        x[j][k][t] = model.add_variable(x_name(j, k, t), lo, 1.0, VarType::kBinary);
      }
    }
  }
  for (int t = 0; t < T; ++t) {
    std::vector<Term> terms;
    double rhs = in.costs.budget(t);
    for (int j = 0; j < M; ++j) {
      for (int k = 1; k <= in.stations[j].max_outlets; ++k) {
        const double c = in.costs.cost(j, k, t);
        terms.push_back({x[j][k][t], c});
        if (t > 0) {
          terms.push_back({x[j][k][t - 1], -c});
        } else if (k <= in.stations[j].initial_outlets) {
          rhs += c;
        }
      }
    }
    model.add_constraint("budget_" + std::to_string(t + 1), std::move(terms),
                         RowSense::kLessEqual, rhs);
  }
  // k = 1 is vacuous: x_{j0} is taken as 1.
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < M; ++j) {
      for (int k = 2; k <= in.stations[j].max_outlets; ++k) {
        model.add_constraint("ladder_" + std::to_string(j) + "_" + std::to_string(k) + "_" +
                                 std::to_string(t + 1),
                             {{x[j][k][t], 1.0}, {x[j][k - 1][t], -1.0}}, RowSense::kLessEqual,
                             0.0);
      }
    }
  }
  for (int t = 1; t < T; ++t) {
    for (int j = 0; j < M; ++j) {
      for (int k = 1; k <= in.stations[j].max_outlets; ++k) {
        model.add_constraint("keep_" + std::to_string(j) + "_" + std::to_string(k) + "_" +
                                 std::to_string(t + 1),
                             {{x[j][k][t], 1.0}, {x[j][k][t - 1], -1.0}},
                             RowSense::kGreaterEqual, 0.0);
      }
    }
  }
  return x;
}

}  // namespace

std::string x_name(int j, int k, int t) {
  return "x_" + std::to_string(j) + "_" + std::to_string(k) + "_" + std::to_string(t + 1);
}

MilpModel build_sl(const Instance& in, const BigMBounds& bounds, const SlOptions& options) {
  if (!bounds.sound()) {
    throw ValidationError(
        "Big-M bounds are unsound: a closed-station lower bound reaches the opt-out utility");
  }
  MilpModel model;
  const auto x = add_outlet_ladder(in, model);
  const int N = in.num_classes();
  const int T = in.horizon;
  const HomePreprocessing home = preprocess_home_charging(in);
  const VarType wtype = options.relax_w ? VarType::kContinuous : VarType::kBinary;

  std::vector<Term> objective;
  for (int t = 0; t < T; ++t) {
    for (int i = 0; i < N; ++i) {
      const auto& cs = in.choice(i, t);
      const std::size_t base = cs.exogenous.size();
      const double weight = in.classes[i].population[t] / in.classes[i].scenario_count;
      const auto& forced = home.forced[static_cast<std::size_t>(t) * N + i];
      for (int r = 0; r < in.classes[i].scenario_count; ++r) {
        if (forced[r]) continue;
        const std::string sfx = triplet_suffix(t, i, r);
        const auto row = in.errors.row(i, t, r);
        const int alpha = model.add_variable("alpha_" + sfx, -kInf, kInf, VarType::kContinuous);

        struct Alt {
          int u;
          int w;
          double mu;
          std::string tag;
        };
        std::vector<Alt> alts;
        const double u0 = in.utility.asc(kOptOutAlt, i, t) + row[0];
        {
          Alt a{model.add_variable("u_" + sfx + "_o", -kInf, kInf, VarType::kContinuous),
                model.add_variable("w_" + sfx + "_o", 0.0, 1.0, wtype), bounds.mu(t, i, r, 0), "o"};
          model.add_constraint("uexo_" + sfx + "_o", {{a.u, 1.0}}, RowSense::kEqual, u0);
          objective.push_back({a.w, weight});
          alts.push_back(std::move(a));
        }
        const double a_low = bounds.a_lower(t, i, r);
        for (std::size_t s = 0; s < cs.stations.size(); ++s) {
          const int j = cs.stations[s];
          const int si = static_cast<int>(s);
          const std::string tag = "s" + std::to_string(j);
          Alt a{model.add_variable("u_" + sfx + "_" + tag, -kInf, kInf, VarType::kContinuous),
                model.add_variable("w_" + sfx + "_" + tag, 0.0, 1.0, wtype),
                bounds.mu(t, i, r, 1 + si), tag};
          const double nu = bounds.nu(t, i, r, si);
          const double ke = in.utility.asc(in.station_alt(j), i, t) + row[base + s];
          const int x1 = x[j][1][t];
          model.add_constraint("dc1_" + sfx + "_" + tag, {{a.u, 1.0}}, RowSense::kGreaterEqual, a_low);
          model.add_constraint("dc2_" + sfx + "_" + tag, {{a.u, 1.0}, {x1, -nu}},
                               RowSense::kLessEqual, a_low);
          std::vector<Term> open1{{a.u, 1.0}};
          std::vector<Term> open2{{a.u, 1.0}};
          for (int k = 1; k <= in.stations[j].max_outlets; ++k) {
            const double beta = in.utility.beta(j, i, k, t);
            if (k == 1) {
              open1.push_back({x1, -beta - nu});
            } else {
              open1.push_back({x[j][k][t], -beta});
            }
            open2.push_back({x[j][k][t], -beta});
          }
          model.add_constraint("do1_" + sfx + "_" + tag, std::move(open1), RowSense::kGreaterEqual,
                               ke - nu);
          model.add_constraint("do2_" + sfx + "_" + tag, std::move(open2), RowSense::kLessEqual, ke);
          alts.push_back(std::move(a));
        }
        std::vector<Term> pick;
        for (const auto& a : alts) {
          model.add_constraint("ll1_" + sfx + "_" + a.tag, {{a.u, 1.0}, {alpha, -1.0}, {a.w, -a.mu}},
                               RowSense::kGreaterEqual, -a.mu);
          pick.push_back({a.w, 1.0});
        }
        model.add_constraint("ll2_" + sfx, std::move(pick), RowSense::kEqual, 1.0);
        for (const auto& a : alts) {
          model.add_constraint("ll3_" + sfx + "_" + a.tag, {{alpha, 1.0}, {a.u, -1.0}},
                               RowSense::kGreaterEqual, 0.0);
        }
      }
    }
  }
  model.set_objective(ObjectiveSense::kMinimize, std::move(objective));
  return model;
}

MilpModel build_mc(const Instance& in, const CoverageTensor& cov) {
  if (cov.num_stations() != in.num_stations() || cov.horizon() != in.horizon ||
      cov.num_classes() != in.num_classes()) {
    throw DomainError("coverage tensor does not match the instance");
  }
  MilpModel model;
  const auto x = add_outlet_ladder(in, model);
  std::vector<Term> objective;
  for (int t = 0; t < in.horizon; ++t) {
    for (int i = 0; i < in.num_classes(); ++i) {
      const auto& cs = in.choice(i, t);
      for (int r = 0; r < cov.scenarios(i); ++r) {
        if (cov.forced(t, i, r)) continue;
        const std::string sfx = triplet_suffix(t, i, r);
        const int w = model.add_variable("w_" + sfx, 0.0, 1.0, VarType::kContinuous);
        objective.push_back({w, cov.weight(t, i)});
        std::vector<Term> row{{w, 1.0}};
        for (int j : cs.stations) {
          for (int k = 1; k <= in.stations[j].max_outlets; ++k) {
            if (cov.covers(j, k, t, i, r)) row.push_back({x[j][k][t], -1.0});
          }
        }
        model.add_constraint("cov_" + sfx, std::move(row), RowSense::kLessEqual, 0.0);
      }
    }
  }
  model.set_objective(ObjectiveSense::kMaximize, std::move(objective), cov.forced_mass());
  return model;
}

MilpModel build_mc_period(const Instance& in, const CoverageTensor& cov, int t,
                          const std::vector<int>& previous_levels) {
  if (t < 0 || t >= in.horizon) throw DomainError("period out of range");
  if (static_cast<int>(previous_levels.size()) != in.num_stations()) {
    throw DomainError("previous levels must list every station");
  }
  MilpModel model;
  const int M = in.num_stations();
  std::vector<std::vector<int>> x(M);
  std::vector<Term> budget;
  double rhs = in.costs.budget(t);
  for (int j = 0; j < M; ++j) {
    const int m = in.stations[j].max_outlets;
    x[j].assign(m + 1, -1);
    for (int k = 1; k <= m; ++k) {
      const bool held = k <= previous_levels[j];
      x[j][k] = model.add_variable(x_name(j, k, t), held ? 1.0 : 0.0, 1.0, VarType::kBinary);
      budget.push_back({x[j][k], in.costs.cost(j, k, t)});
      if (held) rhs += in.costs.cost(j, k, t);
    }
  }
  model.add_constraint("budget_" + std::to_string(t + 1), std::move(budget), RowSense::kLessEqual,
                       rhs);
  for (int j = 0; j < M; ++j) {
    for (int k = 2; k <= in.stations[j].max_outlets; ++k) {
      model.add_constraint("ladder_" + std::to_string(j) + "_" + std::to_string(k) + "_" +
                               std::to_string(t + 1),
                           {{x[j][k], 1.0}, {x[j][k - 1], -1.0}}, RowSense::kLessEqual, 0.0);
    }
  }
  std::vector<Term> objective;
  double constant = 0.0;
  for (int i = 0; i < in.num_classes(); ++i) {
    const auto& cs = in.choice(i, t);
    for (int r = 0; r < cov.scenarios(i); ++r) {
      if (cov.forced(t, i, r)) {
        constant += cov.weight(t, i);
        continue;
      }
      const std::string sfx = triplet_suffix(t, i, r);
      const int w = model.add_variable("w_" + sfx, 0.0, 1.0, VarType::kContinuous);
      objective.push_back({w, cov.weight(t, i)});
      std::vector<Term> row{{w, 1.0}};
      for (int j : cs.stations) {
        for (int k = 1; k <= in.stations[j].max_outlets; ++k) {
          if (cov.covers(j, k, t, i, r)) row.push_back({x[j][k], -1.0});
        }
      }
      model.add_constraint("cov_" + sfx, std::move(row), RowSense::kLessEqual, 0.0);
    }
  }
  model.set_objective(ObjectiveSense::kMaximize, std::move(objective), constant);
  return model;
}

OutletSchedule schedule_from_values(const Instance& in,
                                    const std::vector<std::pair<std::string, double>>& values) {
  std::unordered_map<std::string, double> lookup(values.begin(), values.end());
  OutletSchedule s(in.num_stations(), in.horizon);
  for (int t = 0; t < in.horizon; ++t) {
    for (int j = 0; j < in.num_stations(); ++j) {
      int level = 0;
      for (int k = 1; k <= in.stations[j].max_outlets; ++k) {
        const auto it = lookup.find(x_name(j, k, t));
        if (it == lookup.end() || std::lround(it->second) != 1) break;
        level = k;
      }
      s.at(t, j) = level;
    }
  }
  return s;
}

}  // namespace evcs
