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

#include "evcs/gf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"

#include "evcs/error.hpp"
#include "evcs/evaluate.hpp"
#include "evcs/network.hpp"

namespace evcs {

namespace {

std::string idx(int a, int b) { return std::to_string(a) + "_" + std::to_string(b); }

std::string h_name(int i, int j, int t) { return "h_" + idx(i, j) + "_" + std::to_string(t + 1); }

// (node, station) pairs with a positive population, grouped by node.
std::vector<std::vector<int>> stations_by_node(const GfInstance& gf) {
  std::vector<std::vector<int>> by_node(gf.num_nodes());
  for (int j = 0; j < gf.num_stations(); ++j) {
    for (int i : gf.willing[j]) {
      if (gf.node_population[i] > 0.0) by_node[i].push_back(j);
    }
  }
  return by_node;
}

int previous_level(const GfInstance& gf, const OutletSchedule& x, int t, int j) {
  return t == 0 ? gf.initial_outlets[j] : x.at(t - 1, j);
}

}  // namespace

bool GfInstance::capacitated() const {
  return std::any_of(capacity.begin(), capacity.end(), [](double a) { return std::isfinite(a); });
}

std::vector<double> node_population(const Instance& in) {
  std::vector<double> pop(in.network.size(), 0.0);
  for (const auto& c : in.classes) pop[in.network.index_of(c.home_node)] += c.population.at(0);
  return pop;
}

GfInstance make_gf_instance(const Instance& in, const GrowthFunction& growth, const GfParams& params) {
  GfInstance gf;
  gf.horizon = in.horizon;
  for (const auto& n : in.network.nodes()) gf.node_ids.push_back(n.id);
  gf.node_population = node_population(in);
  for (double p : gf.node_population) gf.population += p;
  if (!(gf.population > 0.0)) throw DomainError("instance has no population");
  std::vector<std::size_t> sources;
  for (const auto& s : in.stations) sources.push_back(in.network.index_of(s.node_id));
  const auto dist = distance_rows(in.network, sources);
  for (int j = 0; j < in.num_stations(); ++j) {
    std::vector<int> near;
    for (std::size_t i = 0; i < in.network.size(); ++i) {
      if (dist[j][i] <= params.radius_km) near.push_back(static_cast<int>(i));
    }
    gf.willing.push_back(std::move(near));
    gf.max_outlets.push_back(in.stations[j].max_outlets);
    gf.initial_outlets.push_back(in.stations[j].initial_outlets);
  }
  gf.unit_cost = params.unit_cost;
  gf.fixed_cost.assign(in.num_stations(), params.fixed_cost);
  gf.budgets = params.budgets.empty() ? in.costs.budgets() : params.budgets;
  if (static_cast<int>(gf.budgets.size()) != gf.horizon) throw ConfigError("GF budgets must list every year");
  gf.home_fraction = params.home_fraction;
  gf.capacity.assign(gf.horizon, params.capacity);
  gf.growth = growth;
  return gf;
}

std::size_t gf_expected_rows(const GfInstance& gf) {
  const std::size_t T = gf.horizon;
  const std::size_t J = gf.num_stations();
  const std::size_t S = gf.growth.size();
  const auto by_node = stations_by_node(gf);
  std::size_t covered = 0, pairs = 0;
  for (const auto& js : by_node) {
    covered += js.empty() ? 0 : 1;
    pairs += js.size();
  }
  std::size_t finite = 0;
  for (double a : gf.capacity) finite += std::isfinite(a) ? 1 : 0;
  return T + J * T + J * T + 2 * J * (T - 1) + T + 2 * S * T + T + covered * (2 * T - 1) + pairs * T +
         J * finite;
}

MilpModel build_gf(const GfInstance& gf) {
  if (gf.growth.size() == 0) throw DomainError("GF model needs a growth function");
  GrowthFunction checked(gf.growth.segments());  // re-validates the tiling
  const int T = gf.horizon;
  const int J = gf.num_stations();
  const int S = static_cast<int>(gf.growth.size());
  const auto& segs = gf.growth.segments();
  const auto by_node = stations_by_node(gf);
  MilpModel model;
  std::vector<std::vector<int>> x(J, std::vector<int>(T)), y(J, std::vector<int>(T));
  for (int j = 0; j < J; ++j) {
    const bool open0 = gf.initial_outlets[j] > 0;
    for (int t = 0; t < T; ++t) {
      x[j][t] = model.add_variable("x_" + idx(j, t + 1), t == 0 ? gf.initial_outlets[j] : 0.0,
                                   gf.max_outlets[j], VarType::kInteger);
      y[j][t] = model.add_variable("y_" + idx(j, t + 1), t == 0 && open0 ? 1.0 : 0.0, 1.0, VarType::kBinary);
    }
  }
  std::vector<std::vector<int>> w(S, std::vector<int>(T)), z(S, std::vector<int>(T));
  for (int s = 0; s < S; ++s) {
    for (int t = 0; t < T; ++t) {
      w[s][t] = model.add_variable("seg_" + idx(s + 1, t + 1), 0.0, 1.0, VarType::kBinary);
      z[s][t] = model.add_variable("z_" + idx(s + 1, t + 1), 0.0, 1.0, VarType::kContinuous);
    }
  }
  // h[i] lists (station, var per t).
  std::vector<std::vector<std::pair<int, std::vector<int>>>> h(gf.num_nodes());
  for (int i = 0; i < gf.num_nodes(); ++i) {
    for (int j : by_node[i]) {
      std::vector<int> vars(T);
      for (int t = 0; t < T; ++t) {
        vars[t] = model.add_variable(h_name(i, j, t), 0.0, gf.node_population[i], VarType::kContinuous);
      }
      h[i].emplace_back(j, std::move(vars));
    }
  }

  for (int t = 0; t < T; ++t) {
    std::vector<Term> row;
    double rhs = gf.budgets[t];
    for (int j = 0; j < J; ++j) {
      row.push_back({x[j][t], gf.unit_cost});
      row.push_back({y[j][t], gf.fixed_cost[j]});
      if (t > 0) {
        row.push_back({x[j][t - 1], -gf.unit_cost});
        row.push_back({y[j][t - 1], -gf.fixed_cost[j]});
      } else {
        rhs += gf.unit_cost * gf.initial_outlets[j] + (gf.initial_outlets[j] > 0 ? gf.fixed_cost[j] : 0.0);
      }
    }
    model.add_constraint("budget_" + std::to_string(t + 1), std::move(row), RowSense::kLessEqual, rhs);
  }
  for (int j = 0; j < J; ++j) {
    for (int t = 0; t < T; ++t) {
      model.add_constraint("ub_" + idx(j, t + 1), {{x[j][t], 1.0}, {y[j][t], -double(gf.max_outlets[j])}},
                           RowSense::kLessEqual, 0.0);
    }
  }
  for (int j = 0; j < J; ++j) {
    for (int t = 0; t < T; ++t) {
      model.add_constraint("open_" + idx(j, t + 1), {{y[j][t], 1.0}, {x[j][t], -1.0}}, RowSense::kLessEqual, 0.0);
    }
  }
  for (int j = 0; j < J; ++j) {
    for (int t = 1; t < T; ++t) {
      model.add_constraint("keepx_" + idx(j, t + 1), {{x[j][t], 1.0}, {x[j][t - 1], -1.0}},
                           RowSense::kGreaterEqual, 0.0);
    }
  }
  for (int j = 0; j < J; ++j) {
    for (int t = 1; t < T; ++t) {
      model.add_constraint("keepy_" + idx(j, t + 1), {{y[j][t], 1.0}, {y[j][t - 1], -1.0}},
                           RowSense::kGreaterEqual, 0.0);
    }
  }
  for (int t = 0; t < T; ++t) {
    std::vector<Term> row;
    for (int s = 0; s < S; ++s) row.push_back({z[s][t], 1.0});
    if (t > 0) {
      for (const auto& node : h) {
        for (const auto& [j, vars] : node) row.push_back({vars[t - 1], -1.0 / gf.population});
      }
    }
    model.add_constraint("setz_" + std::to_string(t + 1), std::move(row), RowSense::kEqual, 0.0);
  }
  for (int s = 0; s < S; ++s) {
    for (int t = 0; t < T; ++t) {
      model.add_constraint("seglo_" + idx(s + 1, t + 1), {{z[s][t], 1.0}, {w[s][t], -segs[s].q_lo}},
                           RowSense::kGreaterEqual, 0.0);
      model.add_constraint("seghi_" + idx(s + 1, t + 1), {{z[s][t], 1.0}, {w[s][t], -segs[s].q_hi}},
                           RowSense::kLessEqual, 0.0);
    }
  }
  for (int t = 0; t < T; ++t) {
    std::vector<Term> row;
    for (int s = 0; s < S; ++s) row.push_back({w[s][t], 1.0});
    model.add_constraint("oneseg_" + std::to_string(t + 1), std::move(row), RowSense::kLessEqual, 1.0);
  }
  for (int i = 0; i < gf.num_nodes(); ++i) {
    if (h[i].empty()) continue;
    const double r_i = gf.node_population[i];
    for (int t = 0; t < T; ++t) {
      std::vector<Term> row;
      for (const auto& [j, vars] : h[i]) {
        row.push_back({vars[t], 1.0});
        if (t > 0) row.push_back({vars[t - 1], -1.0});
      }
      for (int s = 0; s < S; ++s) {
        row.push_back({w[s][t], -r_i * segs[s].intercept});
        row.push_back({z[s][t], -r_i * (segs[s].slope - 1.0)});
      }
      model.add_constraint("grow_" + idx(i, t + 1), std::move(row), RowSense::kLessEqual, 0.0);
    }
  }
  for (int i = 0; i < gf.num_nodes(); ++i) {
    if (h[i].empty()) continue;
    for (int t = 1; t < T; ++t) {
      std::vector<Term> row;
      for (const auto& [j, vars] : h[i]) {
        row.push_back({vars[t], 1.0});
        row.push_back({vars[t - 1], -1.0});
      }
      model.add_constraint("keeph_" + idx(i, t + 1), std::move(row), RowSense::kGreaterEqual, 0.0);
    }
  }
  for (int i = 0; i < gf.num_nodes(); ++i) {
    for (const auto& [j, vars] : h[i]) {
      for (int t = 0; t < T; ++t) {
        model.add_constraint("gate_" + idx(i, j) + "_" + std::to_string(t + 1),
                             {{vars[t], 1.0}, {y[j][t], -gf.node_population[i]}}, RowSense::kLessEqual, 0.0);
      }
    }
  }
  for (int t = 0; t < T; ++t) {
    const double a = gf.capacity[t];
    if (!std::isfinite(a)) continue;
    for (int j = 0; j < J; ++j) {
      std::vector<Term> row;
      for (int i : gf.willing[j]) {
        for (const auto& [jj, vars] : h[i]) {
          if (jj == j) row.push_back({vars[t], gf.home_fraction});
        }
      }
      for (int u = 0; u <= t; ++u) row.push_back({x[j][u], -a});
      model.add_constraint("cap_" + idx(j, t + 1), std::move(row), RowSense::kLessEqual,
                           a * gf.initial_outlets[j]);
    }
  }
  std::vector<Term> objective;
  for (const auto& node : h) {
    for (const auto& [j, vars] : node) objective.push_back({vars[T - 1], 1.0});
  }
  model.set_objective(ObjectiveSense::kMaximize, std::move(objective));
  return model;
}

OutletSchedule gf_schedule_from_values(const GfInstance& gf,
                                       const std::vector<std::pair<std::string, double>>& values) {
  OutletSchedule x(gf.num_stations(), gf.horizon);
  for (const auto& [name, v] : values) {
    if (name.rfind("x_", 0) != 0) continue;
    int j = -1, t = -1;
    if (std::sscanf(name.c_str(), "x_%d_%d", &j, &t) != 2) continue;
    if (j < 0 || j >= gf.num_stations() || t < 1 || t > gf.horizon) continue;
    x.at(t - 1, j) = static_cast<int>(std::lround(v));
  }
  return x;
}

double gf_cost(const GfInstance& gf, const OutletSchedule& x, int t) {
  double cost = 0.0;
  for (int j = 0; j < gf.num_stations(); ++j) {
    const int prev = previous_level(gf, x, t, j);
    cost += gf.unit_cost * (x.at(t, j) - prev);
    if (prev == 0 && x.at(t, j) > 0) cost += gf.fixed_cost[j];
  }
  return cost;
}

bool gf_feasible(const GfInstance& gf, const OutletSchedule& x) {
  for (int t = 0; t < gf.horizon; ++t) {
    for (int j = 0; j < gf.num_stations(); ++j) {
      if (x.at(t, j) < previous_level(gf, x, t, j) || x.at(t, j) > gf.max_outlets[j]) return false;
    }
    if (gf_cost(gf, x, t) > gf.budgets[t] + 1e-9) return false;
  }
  return true;
}

GfEvaluation gf_recursion(const GfInstance& gf, const OutletSchedule& x) {
  if (gf.capacitated()) throw DomainError("the GF recursion assumes infinite capacity");
  const int N = gf.num_nodes();
  const auto by_node = stations_by_node(gf);
  GfEvaluation ev;
  std::vector<double> prev(N, 0.0);
  double prev_total = 0.0;
  for (int t = 0; t < gf.horizon; ++t) {
    const double z = std::clamp(prev_total / gf.population, 0.0, 1.0);
    const double growth = std::max(0.0, gf.growth(z) - z);
    std::vector<double> cur(N, 0.0);
    double total = 0.0;
    for (int i = 0; i < N; ++i) {
      int open = 0;
      for (int j : by_node[i]) open += x.at(t, j) > 0 ? 1 : 0;
      if (open == 0) continue;
      const double r_i = gf.node_population[i];
      cur[i] = std::min(prev[i] + r_i * growth, r_i * open);
      total += cur[i];
    }
    ev.yearly_total.push_back(total);
    ev.node_evs.push_back(cur);
    prev = std::move(cur);
    prev_total = total;
  }
  return ev;
}

GfResult gf_enumerate(const GfInstance& gf, const EnumerationBudget& budget) {
  const int T = gf.horizon;
  const int J = gf.num_stations();
  OutletSchedule x(J, T);
  GfResult best;
  best.final_evs = -1.0;
  auto rec = [&](auto&& self, int t, int j, double spent) -> void {
    if (j == J) {
      if (t + 1 < T) {
        self(self, t + 1, 0, 0.0);
        return;
      }
      if (++best.feasible_count > budget.max_configurations) {
        throw DomainError("GF enumeration exceeds " + std::to_string(budget.max_configurations) +
                          " schedules");
      }
      const GfEvaluation ev = gf_recursion(gf, x);
      const double v = T > 0 ? ev.yearly_total.back() : 0.0;
      if (v > best.final_evs) {
        best.final_evs = v;
        best.outlets = x;
      }
      return;
    }
    const int prev = previous_level(gf, x, t, j);
    for (int k = prev; k <= gf.max_outlets[j]; ++k) {
      double c = gf.unit_cost * (k - prev);
      if (prev == 0 && k > 0) c += gf.fixed_cost[j];
      if (spent + c > gf.budgets[t] + 1e-9) break;
      x.at(t, j) = k;
      self(self, t, j + 1, spent + c);
    }
    x.at(t, j) = 0;
  };
  rec(rec, 0, 0, 0.0);
  return best;
}

OutletSchedule adjust_solution_max_outlets(const Instance& in, const OutletSchedule& gf_outlets) {
  OutletSchedule out = gf_outlets;
  for (int j = 0; j < in.num_stations(); ++j) {
    bool open = in.stations[j].initial_outlets > 0;
    for (int t = 0; t < gf_outlets.horizon(); ++t) {
      open = open || gf_outlets.at(t, j) > 0;
      if (open) out.at(t, j) = in.stations[j].max_outlets;
    }
  }
  return out;
}

double evaluate_under_mc(const CoverageTensor& coverage, const OutletSchedule& outlets) {
  return evaluate(coverage, outlets).total;
}

std::vector<double> mc_node_ev_percent(const Instance& in, const CoverageTensor& cov, const OutletSchedule& x) {
  const auto pop = node_population(in);
  const auto mass = covered_mass_by_class(cov, x);
  std::vector<double> evs(in.network.size(), 0.0);
  for (const auto& per_class : mass) {
    for (int i = 0; i < in.num_classes(); ++i) evs[in.network.index_of(in.classes[i].home_node)] += per_class[i];
  }
  for (std::size_t n = 0; n < evs.size(); ++n) evs[n] = pop[n] > 0.0 ? 100.0 * evs[n] / pop[n] : 0.0;
  return evs;
}

std::vector<double> gf_node_ev_percent(const GfInstance& gf, const GfEvaluation& ev) {
  std::vector<double> pct(gf.num_nodes(), 0.0);
  if (ev.node_evs.empty()) return pct;
  for (int i = 0; i < gf.num_nodes(); ++i) {
    const double r_i = gf.node_population[i];
    pct[i] = r_i > 0.0 ? 100.0 * ev.node_evs.back()[i] / r_i : 0.0;
  }
  return pct;
}

void write_node_table_csv(std::ostream& out, const Instance& in, const std::vector<NodeColumn>& columns) {
  const auto pop = node_population(in);
  out << "node_id,population";
  for (const auto& [name, values] : columns) out << ',' << name;
  out << '\n';
  const auto old = out.precision(12);
  for (std::size_t n = 0; n < in.network.size(); ++n) {
    out << in.network.nodes()[n].id << ',' << pop[n];
    for (const auto& [name, values] : columns) out << ',' << values.at(n);
    out << '\n';
  }
  out.precision(old);
}

void write_node_geojson(std::ostream& out, const Instance& in, const std::vector<NodeColumn>& columns) {
  const auto pop = node_population(in);
  nlohmann::ordered_json features = nlohmann::ordered_json::array();
  for (std::size_t n = 0; n < in.network.size(); ++n) {
    const auto& node = in.network.nodes()[n];
    nlohmann::ordered_json props;
    props["id"] = node.id;
    props["population"] = pop[n];
    for (const auto& [name, values] : columns) props[name] = values.at(n);
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Point"}, {"coordinates", {node.x_km, node.y_km}}}},
                        {"properties", props}});
  }
  nlohmann::ordered_json doc{{"type", "FeatureCollection"}, {"features", features}};
  out << doc.dump(1) << '\n';
}

}  // namespace evcs
