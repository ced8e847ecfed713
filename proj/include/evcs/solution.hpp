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
#include <string>
#include <vector>

#include "evcs/instance.hpp"

namespace evcs {

/// Outlet counts per (period, station). Period -1 (the initial state) comes
/// from Station::initial_outlets and is not stored.
class OutletSchedule {
 public:
  OutletSchedule() = default;
  OutletSchedule(int num_stations, int horizon)
      : num_stations_(num_stations),
        horizon_(horizon),
        levels_(static_cast<std::size_t>(num_stations) * horizon, 0) {}

  /// Schedule that keeps every station at its initial outlet count.
  static OutletSchedule initial(const Instance& instance);

  int at(int t, int j) const { return levels_[static_cast<std::size_t>(t) * num_stations_ + j]; }
  int& at(int t, int j) { return levels_[static_cast<std::size_t>(t) * num_stations_ + j]; }

  int num_stations() const { return num_stations_; }
  int horizon() const { return horizon_; }
  const std::vector<int>& raw() const { return levels_; }

  bool operator==(const OutletSchedule&) const = default;
  auto operator<=>(const OutletSchedule&) const = default;

 private:
  int num_stations_ = 0;
  int horizon_ = 0;
  std::vector<int> levels_;
};

/// Outlet ladder x[j][k][t] = 1 iff station j has at least k outlets in
/// period t. May hold ladder-violating values; validate_solution reports them.
class SolutionX {
 public:
  SolutionX() = default;
  SolutionX(const std::vector<int>& max_outlets, int horizon);

  static SolutionX from_schedule(const Instance& instance, const OutletSchedule& schedule);

  bool get(int j, int k, int t) const { return bits_[index(j, k, t)] != 0; }
  void set(int j, int k, int t, bool value) { bits_[index(j, k, t)] = value ? 1 : 0; }

  int num_stations() const { return static_cast<int>(max_outlets_.size()); }
  int max_outlets(int j) const { return max_outlets_[j]; }
  int horizon() const { return horizon_; }

  /// Number of leading ones of the ladder for (j, t).
  int outlets(int j, int t) const;

  /// Converts a ladder-valid solution to outlet counts; throws
  /// ValidationError on a ladder violation.
  OutletSchedule to_schedule() const;

  bool operator==(const SolutionX&) const = default;

 private:
  std::size_t index(int j, int k, int t) const {
    return offset_[j] + static_cast<std::size_t>(k - 1) * horizon_ + t;
  }

  int horizon_ = 0;
  std::vector<int> max_outlets_;
  std::vector<std::size_t> offset_;
  std::vector<std::uint8_t> bits_;
};

/// x[j][k][t-1] for the ladder, reading the initial state when t == 0.
bool previous_bit(const Instance& instance, const SolutionX& x, int j, int k, int t);

/// Spend in period t: sum_j sum_k c[j][k][t] * (x[j][k][t] - x[j][k][t-1]).
/// Throws ValidationError if the ladder or persistence is violated at t.
double solution_cost(const Instance& instance, const SolutionX& x, int t);

/// Spend in period t for an outlet schedule (no validation beyond bounds).
double schedule_cost(const Instance& instance, const OutletSchedule& schedule, int t);

enum class ViolationKind { kDimension, kBudget, kLadder, kPersistence, kBounds };

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  int station = -1;
  int outlet = -1;
  int period = -1;
  std::string message;
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  bool feasible() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
};

/// Reports every violated budget, ladder and persistence constraint.
FeasibilityReport validate_solution(const Instance& instance, const SolutionX& x);
FeasibilityReport validate_schedule(const Instance& instance, const OutletSchedule& schedule);

}  // namespace evcs
