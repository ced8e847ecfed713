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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "evcs/error.hpp"
#include "evcs/evaluate.hpp"
#include "evcs/formulations.hpp"
#include "evcs/heuristics.hpp"

namespace evcs {

std::vector<double> period_time_limits(const RollingHorizonConfig& config, int horizon) {
  std::vector<double> limits(horizon, 0.0);
  if (horizon <= 0) return limits;
  if (config.allocation == Allocation::kEven) {
    std::fill(limits.begin(), limits.end(), config.total_time_limit_s / horizon);
    return limits;
  }
  double left = config.total_time_limit_s;
  const double first = std::min(config.geometric_first_s, config.total_time_limit_s / 2.0);
  for (int t = 0; t < horizon; ++t) {
    limits[t] = std::max(0.0, std::min(first * std::ldexp(1.0, -t), left));
    left -= limits[t];
  }
  return limits;
}

namespace {

// Best period-t levels given the previous levels, by depth-first enumeration
// over stations. The first maximizer in lexicographic order wins.
std::vector<int> enumerate_period(const Instance& in, const CoverageTensor& cov, int t,
                                  const std::vector<int>& previous, const EnumerationBudget& budget) {
  const int M = in.num_stations();
  std::vector<int> levels = previous;
  std::vector<int> best = previous;
  double best_value = -1.0;
  std::uint64_t visited = 0;
  auto rec = [&](auto&& self, int j, double spent) -> void {
    if (j == M) {
      if (++visited > budget.max_configurations) {
        throw DomainError("single-period enumeration exceeds " +
                          std::to_string(budget.max_configurations) +
                          " configurations and no external solver is configured");
      }
      const double v = period_value(cov, t, levels);
      if (v > best_value) {
        best_value = v;
        best = levels;
      }
      return;
    }
    levels[j] = previous[j];
    self(self, j + 1, spent);
    double s = spent;
    for (int k = previous[j] + 1; k <= in.stations[j].max_outlets; ++k) {
      s += in.costs.cost(j, k, t);
      if (s > in.costs.budget(t) + 1e-9) break;
      levels[j] = k;
      self(self, j + 1, s);
    }
    levels[j] = previous[j];
  };
  rec(rec, 0, 0.0);
  return best;
}

}  // namespace

HeuristicResult rolling_horizon(const Instance& in, const CoverageTensor& cov,
                                const RollingHorizonConfig& config, const ExternalSolver& solver) {
  const auto start = std::chrono::steady_clock::now();
  const int T = in.horizon;
  const int M = in.num_stations();
  HeuristicResult result;
  result.schedule = OutletSchedule::initial(in);
  result.period_limits = period_time_limits(config, T);
  std::vector<int> previous(M);
  for (int j = 0; j < M; ++j) previous[j] = in.stations[j].initial_outlets;
  std::string termination = "complete";
  for (int t = 0; t < T; ++t) {
    std::vector<int> levels = previous;
    std::string how;
    if (solver.configured()) {
      const MilpModel model = build_mc_period(in, cov, t, previous);
      std::vector<std::pair<std::string, double>> warm;
      for (int j = 0; j < M; ++j) {
        for (int k = 1; k <= in.stations[j].max_outlets; ++k) {
          warm.emplace_back(x_name(j, k, t), k <= previous[j] ? 1.0 : 0.0);
        }
      }
      const SolveResult res = solver.solve(model, result.period_limits[t], warm);
      how = to_string(res.status);
      if (res.has_solution()) {
        const OutletSchedule y = schedule_from_values(in, res.values);
        for (int j = 0; j < M; ++j) levels[j] = std::max(previous[j], y.at(t, j));
      }
      if (res.status != SolveStatus::kOptimal) termination = "period-" + std::to_string(t + 1) + "-" + how;
    } else {
      levels = enumerate_period(in, cov, t, previous, config.fallback_budget);
      how = "enumerated";
    }
    for (int u = t; u < T; ++u) {
      for (int j = 0; j < M; ++j) result.schedule.at(u, j) = levels[j];
    }
    if (schedule_cost(in, result.schedule, t) > in.costs.budget(t) + 1e-9) {
      throw Error("solver returned a period-" + std::to_string(t + 1) + " configuration over budget");
    }
    previous = levels;
    result.trace.push_back({t, -1, 0, how, result.period_limits[t], period_value(cov, t, levels),
                            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()});
  }
  result.value = evaluate(cov, result.schedule).total;
  result.termination = termination;
  result.examined = 1;
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace evcs
