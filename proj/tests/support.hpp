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

// Helpers shared by the unit tests: small handmade instances and naive
// reference computations.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "evcs/coverage.hpp"
#include "evcs/instance.hpp"
#include "evcs/network.hpp"
#include "evcs/philox.hpp"
#include "evcs/solution.hpp"

namespace evcs::test {

/// Path network n0 - n1 - ... with 1 km edges.
inline Network line_network(int nodes, double population = 100.0) {
  std::vector<Node> ns;
  std::vector<Edge> es;
  for (int n = 0; n < nodes; ++n) {
    Node node;
    node.id = "n" + std::to_string(n);
    node.x_km = n;
    node.population = population;
    ns.push_back(node);
    if (n > 0) es.push_back({"n" + std::to_string(n - 1), node.id, 1.0});
  }
  return Network(std::move(ns), std::move(es));
}

/// Instance with every station considered by every class, all errors zero,
/// opt-out constant 0, station constants 0 and increments 1. Class i lives at
/// node i and has population 10 in every period. Costs 150 then 50.
inline Instance handmade(int stations, int classes, int horizon, int max_outlets, int scenarios,
                         double budget) {
  Instance in;
  in.network = line_network(std::max(stations, classes) + 1);
  in.horizon = horizon;
  for (int j = 0; j < stations; ++j) {
    Station s;
    s.id = "s" + std::to_string(j);
    s.node_id = "n" + std::to_string(j);
    s.max_outlets = max_outlets;
    in.stations.push_back(s);
  }
  for (int i = 0; i < classes; ++i) {
    UserClass c;
    c.id = "c" + std::to_string(i);
    c.home_node = "n" + std::to_string(i);
    c.population.assign(horizon, 10.0);
    c.scenario_count = scenarios;
    in.classes.push_back(c);
  }
  in.costs = CostBudget(in.max_outlets(), horizon);
  for (int j = 0; j < stations; ++j) {
    for (int k = 1; k <= max_outlets; ++k) {
      for (int t = 0; t < horizon; ++t) in.costs.cost(j, k, t) = k == 1 ? 150.0 : 50.0;
    }
  }
  for (int t = 0; t < horizon; ++t) in.costs.budget(t) = budget;
  in.utility = UtilityParams(stations, classes, horizon, in.max_outlets());
  for (int j = 0; j < stations; ++j) {
    for (int i = 0; i < classes; ++i) {
      for (int k = 1; k <= max_outlets; ++k) {
        for (int t = 0; t < horizon; ++t) in.utility.beta(j, i, k, t) = 1.0;
      }
    }
  }
  for (int i = 0; i < classes; ++i) {
    for (int t = 0; t < horizon; ++t) {
      ChoiceSet cs;
      cs.exogenous = {kOptOutAlt};
      for (int j = 0; j < stations; ++j) cs.stations.push_back(j);
      in.choice_sets.push_back(cs);
    }
  }
  std::vector<int> counts(classes, scenarios);
  in.errors = ErrorTensor(counts, horizon, in.choice_sets);
  return in;
}

/// Fills every error with N(0, sd) draws and randomizes constants.
inline void randomize(Instance& in, std::uint64_t seed, double sd = 1.0) {
  CounterRng rng(seed, 0xabcdu);
  for (double& e : in.errors.values()) e = sd * rng.normal();
  for (double& a : in.utility.raw_asc()) a = 2.0 * rng.uniform() - 1.0;
  for (double& b : in.utility.raw_beta()) b = 0.6 * rng.uniform();
}

/// Column of station j inside the error row of class i, period t.
inline int station_column(const Instance& in, int i, int t, int j) {
  const auto& cs = in.choice(i, t);
  for (std::size_t s = 0; s < cs.stations.size(); ++s) {
    if (cs.stations[s] == j) return static_cast<int>(cs.exogenous.size() + s);
  }
  return -1;
}

/// Covered indicator computed straight from the definition.
inline bool naive_covers(const Instance& in, int j, int k, int t, int i, int r) {
  if (k < 1) return false;
  const int col = station_column(in, i, t, j);
  if (col < 0) return false;
  const auto row = in.errors.row(i, t, r);
  double beta_sum = 0.0;
  for (int q = 1; q <= k; ++q) beta_sum += in.utility.beta(j, i, q, t);
  const double u = beta_sum + in.utility.asc(in.station_alt(j), i, t) + row[col];
  const double u0 = in.utility.asc(kOptOutAlt, i, t) + row[0];
  return u >= u0;
}

/// f(x) from the definition: sum over triplets of N/R * min(1, covered).
inline double naive_value(const Instance& in, const CoverageTensor& cov, const OutletSchedule& x) {
  double total = 0.0;
  for (int t = 0; t < in.horizon; ++t) {
    for (int i = 0; i < in.num_classes(); ++i) {
      const int R = in.classes[i].scenario_count;
      for (int r = 0; r < R; ++r) {
        bool covered = cov.forced(t, i, r);
        for (int j = 0; j < in.num_stations() && !covered; ++j) {
          covered = naive_covers(in, j, x.at(t, j), t, i, r);
        }
        if (covered) total += in.classes[i].population[t] / R;
      }
    }
  }
  return total;
}

/// Number of feasible schedules by plain recursion over (t, j).
inline std::uint64_t recursive_count(const Instance& in) {
  const int T = in.horizon;
  const int M = in.num_stations();
  std::vector<int> level(M);
  for (int j = 0; j < M; ++j) level[j] = in.stations[j].initial_outlets;
  std::function<std::uint64_t(int, int, double)> go = [&](int t, int j, double spent) -> std::uint64_t {
    if (t == T) return 1;
    if (j == M) return go(t + 1, 0, 0.0);
    const int start = level[j];
    std::uint64_t n = 0;
    double cost = 0.0;
    for (int k = start; k <= in.stations[j].max_outlets; ++k) {
      if (k > start) cost += in.costs.cost(j, k, t);
      if (spent + cost > in.costs.budget(t) + 1e-9) break;
      level[j] = k;
      n += go(t, j + 1, spent + cost);
    }
    level[j] = start;
    return n;
  };
  return go(0, 0, 0.0);
}

/// Uniformly drawn feasible schedule (random walk with budget checks).
inline OutletSchedule random_feasible(const Instance& in, CounterRng& rng) {
  OutletSchedule x = OutletSchedule::initial(in);
  for (int t = 0; t < in.horizon; ++t) {
    if (t > 0) {
      for (int j = 0; j < in.num_stations(); ++j) x.at(t, j) = x.at(t - 1, j);
    }
    double spent = 0.0;
    for (int attempt = 0; attempt < 4 * in.num_stations(); ++attempt) {
      const int j = static_cast<int>(rng.below(in.num_stations()));
      const int level = x.at(t, j);
      if (level >= in.stations[j].max_outlets || rng.uniform() < 0.3) continue;
      const double c = in.costs.cost(j, level + 1, t);
      if (spent + c > in.costs.budget(t)) continue;
      spent += c;
      for (int u = t; u < in.horizon; ++u) x.at(u, j) = std::max(x.at(u, j), level + 1);
    }
  }
  return x;
}

}  // namespace evcs::test
