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

#include <span>
#include <vector>

#include "evcs/coverage.hpp"
#include "evcs/instance.hpp"
#include "evcs/solution.hpp"

namespace evcs {

struct Evaluation {
  double total = 0.0;
  std::vector<double> per_period;
};

/// Covered mass of period t when station j has levels[j] outlets, including
/// forced triplets.
double period_value(const CoverageTensor& coverage, int t, std::span<const int> levels);

/// f(x) = sum over triplets of N/R * min(1, sum_j sum_k a x).
Evaluation evaluate(const CoverageTensor& coverage, const OutletSchedule& schedule);
Evaluation evaluate(const CoverageTensor& coverage, const SolutionX& x);

/// Period-t term of f.
double score_myopic(const CoverageTensor& coverage, const OutletSchedule& schedule, int t);

/// Terms t..T of f with the period-t levels held in every later period (a
/// later period keeps any larger level it already has).
double score_hyperoptic(const CoverageTensor& coverage, const OutletSchedule& schedule, int t);

/// 100 * (best - value) / best; best must be positive.
double gap(double best_value, double value);

/// Covered mass per class: [t][i].
std::vector<std::vector<double>> covered_mass_by_class(const CoverageTensor& coverage,
                                                       const OutletSchedule& schedule);

}  // namespace evcs
