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

#include "evcs/evaluate.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "evcs/error.hpp"

namespace evcs {

namespace {

void check_dims(const CoverageTensor& coverage, const OutletSchedule& schedule) {
  if (schedule.num_stations() != coverage.num_stations() ||
      schedule.horizon() != coverage.horizon()) {
    throw DomainError("schedule dimensions (" + std::to_string(schedule.num_stations()) + " x " +
                      std::to_string(schedule.horizon()) + ") do not match coverage (" +
                      std::to_string(coverage.num_stations()) + " x " +
                      std::to_string(coverage.horizon()) + ")");
  }
}

void covered_words(const CoverageTensor& coverage, int t, std::span<const int> levels,
                   std::vector<std::uint64_t>& acc) {
  const auto forced = coverage.forced_row(t);
  acc.assign(forced.begin(), forced.end());
  for (int j = 0; j < coverage.num_stations(); ++j) {
    const int k = levels[j];
    if (k <= 0) continue;
    if (k > coverage.max_outlets(j)) {
      throw DomainError("station " + std::to_string(j) + " level " + std::to_string(k) +
                        " exceeds its maximum");
    }
    const auto row = coverage.row(t, j, k);
    for (std::size_t w = 0; w < acc.size(); ++w) acc[w] |= row[w];
  }
}

double weighted_count(const CoverageTensor& coverage, int t,
                      const std::vector<std::uint64_t>& acc) {
  double total = 0.0;
  for (int i = 0; i < coverage.num_classes(); ++i) {
    const std::size_t off = coverage.block_word_offset(i);
    std::size_t count = 0;
    for (std::size_t w = 0; w < coverage.block_words(i); ++w) {
      count += static_cast<std::size_t>(std::popcount(acc[off + w]));
    }
    total += coverage.weight(t, i) * static_cast<double>(count);
  }
  return total;
}

std::vector<int> levels_at(const OutletSchedule& schedule, int t) {
  std::vector<int> out(schedule.num_stations());
  for (int j = 0; j < schedule.num_stations(); ++j) out[j] = schedule.at(t, j);
  return out;
}

}  // namespace

double period_value(const CoverageTensor& coverage, int t, std::span<const int> levels) {
  if (static_cast<int>(levels.size()) != coverage.num_stations()) {
    throw DomainError("level vector has wrong length");
  }
  thread_local std::vector<std::uint64_t> acc;
  covered_words(coverage, t, levels, acc);
  return weighted_count(coverage, t, acc);
}

Evaluation evaluate(const CoverageTensor& coverage, const OutletSchedule& schedule) {
  check_dims(coverage, schedule);
  Evaluation e;
  for (int t = 0; t < coverage.horizon(); ++t) {
    const auto levels = levels_at(schedule, t);
    e.per_period.push_back(period_value(coverage, t, levels));
    e.total += e.per_period.back();
  }
  return e;
}

Evaluation evaluate(const CoverageTensor& coverage, const SolutionX& x) {
  return evaluate(coverage, x.to_schedule());
}

double score_myopic(const CoverageTensor& coverage, const OutletSchedule& schedule, int t) {
  check_dims(coverage, schedule);
  if (t < 0 || t >= coverage.horizon()) throw DomainError("period out of range");
  return period_value(coverage, t, levels_at(schedule, t));
}

double score_hyperoptic(const CoverageTensor& coverage, const OutletSchedule& schedule, int t) {
  check_dims(coverage, schedule);
  if (t < 0 || t >= coverage.horizon()) throw DomainError("period out of range");
  const auto held = levels_at(schedule, t);
  double total = 0.0;
  std::vector<int> levels(held.size());
  for (int q = t; q < coverage.horizon(); ++q) {
    for (std::size_t j = 0; j < held.size(); ++j) levels[j] = std::max(held[j], schedule.at(q, j));
    total += period_value(coverage, q, levels);
  }
  return total;
}

double gap(double best_value, double value) {
  if (!(best_value > 0.0)) throw DomainError("gap is undefined for a non-positive best value");
  return 100.0 * (best_value - value) / best_value;
}

std::vector<std::vector<double>> covered_mass_by_class(const CoverageTensor& coverage,
                                                       const OutletSchedule& schedule) {
  check_dims(coverage, schedule);
  std::vector<std::vector<double>> out(coverage.horizon(),
                                       std::vector<double>(coverage.num_classes(), 0.0));
  std::vector<std::uint64_t> acc;
  for (int t = 0; t < coverage.horizon(); ++t) {
    covered_words(coverage, t, levels_at(schedule, t), acc);
    for (int i = 0; i < coverage.num_classes(); ++i) {
      std::size_t count = 0;
      for (std::size_t w = 0; w < coverage.block_words(i); ++w) {
        count += static_cast<std::size_t>(std::popcount(acc[coverage.block_word_offset(i) + w]));
      }
      out[t][i] = coverage.weight(t, i) * static_cast<double>(count);
    }
  }
  return out;
}

}  // namespace evcs
