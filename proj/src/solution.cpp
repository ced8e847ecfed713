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

#include "evcs/solution.hpp"

#include <sstream>

#include "evcs/error.hpp"

namespace evcs {

OutletSchedule OutletSchedule::initial(const Instance& instance) {
  OutletSchedule s(instance.num_stations(), instance.horizon);
  for (int t = 0; t < instance.horizon; ++t) {
    for (int j = 0; j < instance.num_stations(); ++j) {
      s.at(t, j) = instance.stations[j].initial_outlets;
    }
  }
  return s;
}

SolutionX::SolutionX(const std::vector<int>& max_outlets, int horizon)
    : horizon_(horizon), max_outlets_(max_outlets) {
  std::size_t offset = 0;
  for (int m : max_outlets_) {
    offset_.push_back(offset);
    offset += static_cast<std::size_t>(m) * horizon;
  }
  bits_.assign(offset, 0);
}

SolutionX SolutionX::from_schedule(const Instance& instance, const OutletSchedule& schedule) {
  SolutionX x(instance.max_outlets(), instance.horizon);
  for (int t = 0; t < instance.horizon; ++t) {
    for (int j = 0; j < instance.num_stations(); ++j) {
      const int level = schedule.at(t, j);
      if (level < 0 || level > instance.stations[j].max_outlets) {
        throw ValidationError("schedule outlet count out of range at station " +
                              std::to_string(j) + ", period " + std::to_string(t));
      }
      for (int k = 1; k <= level; ++k) x.set(j, k, t, true);
    }
  }
  return x;
}

int SolutionX::outlets(int j, int t) const {
  int k = 0;
  while (k < max_outlets_[j] && get(j, k + 1, t)) ++k;
  return k;
}

OutletSchedule SolutionX::to_schedule() const {
  OutletSchedule s(num_stations(), horizon_);
  for (int t = 0; t < horizon_; ++t) {
    for (int j = 0; j < num_stations(); ++j) {
      const int level = outlets(j, t);
      for (int k = level + 2; k <= max_outlets_[j]; ++k) {
        if (get(j, k, t)) {
          throw ValidationError("ladder violation at (j " + std::to_string(j) + ", k " +
                                std::to_string(k) + ", t " + std::to_string(t) + ")");
        }
      }
      s.at(t, j) = level;
    }
  }
  return s;
}

bool previous_bit(const Instance& instance, const SolutionX& x, int j, int k, int t) {
  if (t == 0) return k <= instance.stations[j].initial_outlets;
  return x.get(j, k, t - 1);
}

double solution_cost(const Instance& instance, const SolutionX& x, int t) {
  if (t < 0 || t >= instance.horizon) throw DomainError("solution_cost: period out of range");
  double total = 0.0;
  for (int j = 0; j < instance.num_stations(); ++j) {
    for (int k = 1; k <= instance.stations[j].max_outlets; ++k) {
      const bool now = x.get(j, k, t);
      if (k >= 2 && now && !x.get(j, k - 1, t)) {
        throw ValidationError("solution_cost: ladder violation at (j " + std::to_string(j) +
                              ", k " + std::to_string(k) + ", t " + std::to_string(t) + ")");
      }
      const bool before = previous_bit(instance, x, j, k, t);
      if (before && !now) {
        throw ValidationError("solution_cost: persistence violation at (j " +
                              std::to_string(j) + ", k " + std::to_string(k) + ", t " +
                              std::to_string(t) + ")");
      }
      if (now && !before) total += instance.costs.cost(j, k, t);
    }
  }
  return total;
}

double schedule_cost(const Instance& instance, const OutletSchedule& schedule, int t) {
  double total = 0.0;
  for (int j = 0; j < instance.num_stations(); ++j) {
    const int before = t == 0 ? instance.stations[j].initial_outlets : schedule.at(t - 1, j);
    for (int k = before + 1; k <= schedule.at(t, j); ++k) total += instance.costs.cost(j, k, t);
  }
  return total;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kDimension: return "dimension";
    case ViolationKind::kBudget: return "budget";
    case ViolationKind::kLadder: return "ladder";
    case ViolationKind::kPersistence: return "persistence";
    case ViolationKind::kBounds: return "bounds";
  }
  return "unknown";
}

bool FeasibilityReport::has(ViolationKind kind) const {
  for (const auto& v : violations) {
    if (v.kind == kind) return true;
  }
  return false;
}

FeasibilityReport validate_solution(const Instance& instance, const SolutionX& x) {
  FeasibilityReport report;
  const int T = instance.horizon;
  if (x.horizon() != T || x.num_stations() != instance.num_stations()) {
    report.violations.push_back({ViolationKind::kDimension, -1, -1, -1,
                                 "solution dimensions do not match the instance"});
    return report;
  }
  for (int j = 0; j < instance.num_stations(); ++j) {
    if (x.max_outlets(j) != instance.stations[j].max_outlets) {
      report.violations.push_back({ViolationKind::kDimension, j, -1, -1,
                                   "max outlets of station do not match the instance"});
      return report;
    }
  }
  for (int t = 0; t < T; ++t) {
    double spend = 0.0;
    for (int j = 0; j < instance.num_stations(); ++j) {
      for (int k = 1; k <= instance.stations[j].max_outlets; ++k) {
        const bool now = x.get(j, k, t);
        if (k >= 2 && now && !x.get(j, k - 1, t)) {
          std::ostringstream m;
          m << "ladder violated at (j " << j << ", k " << k << ", t " << t << ")";
          report.violations.push_back({ViolationKind::kLadder, j, k, t, m.str()});
        }
        const bool before = previous_bit(instance, x, j, k, t);
        if (before && !now) {
          std::ostringstream m;
          m << "persistence violated at (j " << j << ", k " << k << ", t " << t << ")";
          report.violations.push_back({ViolationKind::kPersistence, j, k, t, m.str()});
        }
        spend += instance.costs.cost(j, k, t) * ((now ? 1.0 : 0.0) - (before ? 1.0 : 0.0));
      }
    }
    if (spend > instance.costs.budget(t) + 1e-9) {
      std::ostringstream m;
      m << "budget exceeded in period " << t << ": spend " << spend << " > "
        << instance.costs.budget(t);
      report.violations.push_back({ViolationKind::kBudget, -1, -1, t, m.str()});
    }
  }
  return report;
}

FeasibilityReport validate_schedule(const Instance& instance, const OutletSchedule& schedule) {
  FeasibilityReport report;
  if (schedule.horizon() != instance.horizon ||
      schedule.num_stations() != instance.num_stations()) {
    report.violations.push_back({ViolationKind::kDimension, -1, -1, -1,
                                 "schedule dimensions do not match the instance"});
    return report;
  }
  for (int t = 0; t < instance.horizon; ++t) {
    for (int j = 0; j < instance.num_stations(); ++j) {
      const int level = schedule.at(t, j);
      if (level < 0 || level > instance.stations[j].max_outlets) {
        report.violations.push_back({ViolationKind::kBounds, j, level, t,
                                     "outlet count outside [0, m_j]"});
        return report;
      }
    }
  }
  return validate_solution(instance, SolutionX::from_schedule(instance, schedule));
}

}  // namespace evcs
