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
#include <vector>

#include "evcs/coverage.hpp"
#include "evcs/solution.hpp"

namespace evcs {

/// Incremental evaluator of f for a schedule. For each period it keeps
/// bit-sliced saturating counts (at least 1, 2, 3 covering stations) so the
/// value with one or two stations changed costs one pass over the words.
class CoverState {
 public:
  CoverState(const CoverageTensor& coverage, const OutletSchedule& schedule);

  const OutletSchedule& schedule() const { return schedule_; }
  const CoverageTensor& coverage() const { return *coverage_; }

  double period_value(int t) const { return period_value_[t]; }
  double total() const;

  /// Period-t value with station j at level lj and, if j2 >= 0, station j2
  /// at level lj2.
  double period_value_with(int t, int j, int lj, int j2 = -1, int lj2 = 0) const;

  /// Replaces the schedule and refreshes the periods whose levels changed.
  void assign(const OutletSchedule& schedule);

 private:
  void rebuild(int t);
  double weighted(int t, const std::vector<std::uint64_t>& words) const;

  const CoverageTensor* coverage_;
  OutletSchedule schedule_;
  std::vector<std::vector<std::uint64_t>> ge1_, ge2_, ge3_;
  std::vector<double> period_value_;
  mutable std::vector<std::uint64_t> scratch_;
};

}  // namespace evcs
