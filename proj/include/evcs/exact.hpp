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
#include <functional>

#include "evcs/coverage.hpp"
#include "evcs/instance.hpp"
#include "evcs/solution.hpp"

namespace evcs {

struct EnumerationBudget {
  std::uint64_t max_configurations = 10'000'000;
};

/// Number of ladder/persistence-valid schedules ignoring budgets:
/// prod_j C(m_j - initial_j + T, T). Saturates at UINT64_MAX.
std::uint64_t unpruned_state_space(const Instance& instance);

/// Calls visit(schedule) for every feasible schedule exactly once, in
/// lexicographic order of (period 1 levels, period 2 levels, ...). Returns
/// the number visited. Throws DomainError naming the state-space size when
/// the feasible set exceeds the budget.
std::uint64_t enumerate_feasible(const Instance& instance, const EnumerationBudget& budget,
                                 const std::function<void(const OutletSchedule&)>& visit);

std::uint64_t count_feasible(const Instance& instance, const EnumerationBudget& budget = {});

struct ExactResult {
  OutletSchedule schedule;
  double value = 0.0;
  std::uint64_t feasible_count = 0;
};

/// Maximizer of f over all feasible schedules; the first in enumeration
/// order wins ties.
ExactResult brute_force_optimum(const Instance& instance, const CoverageTensor& coverage,
                                const EnumerationBudget& budget = {}, int threads = 1);

}  // namespace evcs
