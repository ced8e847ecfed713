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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "evcs/coverage.hpp"
#include "evcs/exact.hpp"
#include "evcs/growth_function.hpp"
#include "evcs/instance.hpp"
#include "evcs/milp_model.hpp"
#include "evcs/solution.hpp"

namespace evcs {

struct GfParams {
  double unit_cost = 50.0;    // c^U
  double fixed_cost = 100.0;  // c^F_j, all stations
  std::vector<double> budgets;  // B^t; empty: the instance budgets
  double home_fraction = 0.566;  // alpha
  double capacity = kInf;        // a^t, all years
  double radius_km = 10.0;
};

/// Intracity growth-function model data. Nodes follow the network order;
/// r_i is the period-1 population of the classes living at node i.
struct GfInstance {
  int horizon = 0;
  std::vector<std::string> node_ids;
  std::vector<double> node_population;  // r_i
  double population = 0.0;              // r
  std::vector<std::vector<int>> willing;  // N_j, sorted node indices
  std::vector<int> max_outlets;           // e_j
  std::vector<int> initial_outlets;       // l_j
  double unit_cost = 50.0;
  std::vector<double> fixed_cost;
  std::vector<double> budgets;
  double home_fraction = 0.566;
  std::vector<double> capacity;  // a^t
  GrowthFunction growth;

  int num_stations() const { return static_cast<int>(max_outlets.size()); }
  int num_nodes() const { return static_cast<int>(node_ids.size()); }
  bool capacitated() const;
};

GfInstance make_gf_instance(const Instance& instance, const GrowthFunction& growth,
                            const GfParams& params = {});

/// Rows build_gf produces: budget, upper bound, open-needs-outlet, outlet and
/// open persistence, EV carry-over, two segment bounds per segment, one
/// segment per year, growth and no-loss per covered node, station gates and
/// (finite capacity only) capacity rows.
std::size_t gf_expected_rows(const GfInstance& gf);

/// Variables x_<j>_<t> (outlets), y_<j>_<t> (open), seg_<s>_<t> and
/// z_<s>_<t> (segment choice and EV share at the start of year t),
/// h_<i>_<j>_<t> (EVs at node i charging at j). Maximizes final-year EVs.
MilpModel build_gf(const GfInstance& gf);

/// Outlet counts read from x_<j>_<t>.
OutletSchedule gf_schedule_from_values(const GfInstance& gf,
                                       const std::vector<std::pair<std::string, double>>& values);

/// Spend in year t with y = [x >= 1].
double gf_cost(const GfInstance& gf, const OutletSchedule& outlets, int t);
bool gf_feasible(const GfInstance& gf, const OutletSchedule& outlets);

struct GfEvaluation {
  std::vector<double> yearly_total;         // sum_i H_i^t
  std::vector<std::vector<double>> node_evs;  // [t][i]
};

/// EVs per node and year for fixed outlets and infinite capacity, taking
/// the largest value every constraint allows: H_i^t = min(H_i^{t-1} +
/// r_i (g(z) - z), r_i * open stations reaching i), z = sum H^{t-1} / r.
GfEvaluation gf_recursion(const GfInstance& gf, const OutletSchedule& outlets);

struct GfResult {
  OutletSchedule outlets;
  double final_evs = 0.0;
  std::uint64_t feasible_count = 0;
};

/// Best GF schedule by enumeration; first maximizer in lexicographic order.
GfResult gf_enumerate(const GfInstance& gf, const EnumerationBudget& budget = {});

/// Raises every opened station to m_j from its opening period on. The result
/// usually exceeds the budget; it is meant for evaluation only.
OutletSchedule adjust_solution_max_outlets(const Instance& instance, const OutletSchedule& gf_outlets);

/// f(x) for a schedule coming from either model.
double evaluate_under_mc(const CoverageTensor& coverage, const OutletSchedule& outlets);

/// Population per network node (period-1 class populations).
std::vector<double> node_population(const Instance& instance);

/// Percentage of each node's population covered under MC, summed over years.
std::vector<double> mc_node_ev_percent(const Instance& instance, const CoverageTensor& coverage,
                                       const OutletSchedule& outlets);

/// Final-year EVs per node as a percentage of r_i.
std::vector<double> gf_node_ev_percent(const GfInstance& gf, const GfEvaluation& evaluation);

using NodeColumn = std::pair<std::string, std::vector<double>>;

/// CSV keyed by node id: node_id,population,<column>...
void write_node_table_csv(std::ostream& out, const Instance& instance, const std::vector<NodeColumn>& columns);

/// GeoJSON FeatureCollection of node points with the columns as properties.
void write_node_geojson(std::ostream& out, const Instance& instance, const std::vector<NodeColumn>& columns);

}  // namespace evcs
