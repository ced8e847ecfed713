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

#include "evcs/coverage.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "evcs/error.hpp"
#include "evcs/parallel.hpp"

namespace evcs {

int choice_column(const Instance& instance, int i, int t, AltId alt) {
  const auto& cs = instance.choice(i, t);
  for (std::size_t c = 0; c < cs.exogenous.size(); ++c) {
    if (cs.exogenous[c] == alt) return static_cast<int>(c);
  }
  if (alt >= 1 && alt <= instance.num_stations()) {
    const int j = alt - 1;
    const auto it = std::lower_bound(cs.stations.begin(), cs.stations.end(), j);
    if (it != cs.stations.end() && *it == j) {
      return static_cast<int>(cs.exogenous.size() + (it - cs.stations.begin()));
    }
  }
  return -1;
}

double optout_utility(const Instance& instance, int t, int i, int r) {
  return instance.utility.asc(kOptOutAlt, i, t) + instance.optout_error(t, i, r);
}

double station_utility_at_k(const Instance& instance, int t, int i, int r, int j, int k) {
  const int col = choice_column(instance, i, t, instance.station_alt(j));
  if (col < 0) {
    throw DomainError("station " + std::to_string(j) + " is not considered by class " +
                      std::to_string(i) + " in period " + std::to_string(t + 1));
  }
  if (k < 0 || k > instance.stations[j].max_outlets) {
    throw DomainError("outlet count " + std::to_string(k) + " out of range for station " +
                      std::to_string(j));
  }
  if (k == 0) return closed_lower_bound(instance, i, t);
  double sum = 0.0;
  for (int q = 1; q <= k; ++q) sum += instance.utility.beta(j, i, q, t);
  sum += instance.utility.asc(instance.station_alt(j), i, t);
  sum += instance.errors.row(i, t, r)[col];
  return sum;
}

std::vector<double> utility_ladder(const Instance& instance, int t, int i, int r, int j) {
  std::vector<double> out;
  for (int k = 0; k <= instance.stations[j].max_outlets; ++k) {
    out.push_back(station_utility_at_k(instance, t, i, r, j, k));
  }
  return out;
}

double closed_lower_bound(const Instance& instance, int i, int t) {
  const auto& cs = instance.choice(i, t);
  if (cs.stations.empty()) return std::numeric_limits<double>::quiet_NaN();
  double lo = std::numeric_limits<double>::infinity();
  const std::size_t base = cs.exogenous.size();
  for (int r = 0; r < instance.classes[i].scenario_count; ++r) {
    const auto row = instance.errors.row(i, t, r);
    for (std::size_t s = 0; s < cs.stations.size(); ++s) {
      const int j = cs.stations[s];
      lo = std::min(lo, instance.utility.asc(instance.station_alt(j), i, t) + row[base + s]);
    }
  }
  return lo;
}

HomePreprocessing preprocess_home_charging(const Instance& instance) {
  HomePreprocessing out;
  const int N = instance.num_classes();
  const int T = instance.horizon;
  const AltId home = instance.home_alt();
  out.forced.resize(static_cast<std::size_t>(N) * T);
  out.reduced_choice_sets = instance.choice_sets;
  for (int i = 0; i < N; ++i) {
    const int R = instance.classes[i].scenario_count;
    for (int t = 0; t < T; ++t) {
      auto& flags = out.forced[static_cast<std::size_t>(t) * N + i];
      flags.assign(R, 0);
      const int col = choice_column(instance, i, t, home);
      if (col < 0) continue;
      for (int r = 0; r < R; ++r) {
        const double u_home = instance.utility.asc(home, i, t) + instance.errors.row(i, t, r)[col];
        if (u_home >= optout_utility(instance, t, i, r)) {
          flags[r] = 1;
          ++out.forced_count;
        }
      }
      auto& exo = out.reduced_choice_sets[static_cast<std::size_t>(i) * T + t].exogenous;
      exo.erase(std::remove(exo.begin(), exo.end(), home), exo.end());
    }
  }
  return out;
}

CoverageTensor::CoverageTensor(const Instance& instance) : horizon_(instance.horizon) {
  max_outlets_ = instance.max_outlets();
  for (int m : max_outlets_) {
    if (m >= kNever) throw DomainError("coverage supports at most 254 outlets per station");
    station_row_.push_back(total_outlets_);
    total_outlets_ += m;
  }
  for (const auto& c : instance.classes) {
    class_offset_.push_back(triplets_per_period_);
    block_word_.push_back(words_);
    scenarios_.push_back(c.scenario_count);
    triplets_per_period_ += c.scenario_count;
    const std::size_t w = (c.scenario_count + 63) / 64;
    for (std::size_t q = 0; q < w; ++q) word_class_.push_back(static_cast<int>(scenarios_.size() - 1));
    words_ += w;
  }
  const int N = num_classes();
  weight_.resize(static_cast<std::size_t>(horizon_) * N);
  for (int t = 0; t < horizon_; ++t) {
    for (int i = 0; i < N; ++i) {
      weight_[static_cast<std::size_t>(t) * N + i] =
          instance.classes[i].population[t] / instance.classes[i].scenario_count;
    }
  }
  bits_.assign(static_cast<std::size_t>(horizon_) * total_outlets_ * words_, 0);
  forced_.assign(static_cast<std::size_t>(horizon_) * words_, 0);
  min_k_.assign(static_cast<std::size_t>(horizon_) * num_stations() * triplets_per_period_, kNever);
}

void CoverageTensor::set_min_k(int t, int j, int i, int r, std::uint8_t k) {
  min_k_[min_k_index(t, j, i, r)] = k;
  const std::size_t word = block_word_[i] + r / 64;
  const std::uint64_t mask = std::uint64_t{1} << (r % 64);
  for (int q = 1; q <= max_outlets_[j]; ++q) {
    auto& w = bits_[row_offset(t, j, q) + word];
    if (k != kNever && q >= k) {
      w |= mask;
    } else {
      w &= ~mask;
    }
  }
}

void CoverageTensor::set_forced(int t, int i, int r, bool value) {
  auto& w = forced_[static_cast<std::size_t>(t) * words_ + block_word_[i] + r / 64];
  const std::uint64_t mask = std::uint64_t{1} << (r % 64);
  w = value ? (w | mask) : (w & ~mask);
}

std::size_t CoverageTensor::triplet_count() const {
  return triplets_per_period_ * static_cast<std::size_t>(horizon_);
}

std::size_t CoverageTensor::forced_count() const {
  std::size_t n = 0;
  for (auto w : forced_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

double CoverageTensor::forced_mass() const {
  double total = 0.0;
  for (int t = 0; t < horizon_; ++t) {
    const auto f = forced_row(t);
    for (int i = 0; i < num_classes(); ++i) {
      std::size_t count = 0;
      for (std::size_t w = 0; w < block_words(i); ++w) {
        count += static_cast<std::size_t>(std::popcount(f[block_word_[i] + w]));
      }
      total += weight(t, i) * static_cast<double>(count);
    }
  }
  return total;
}

double CoverageTensor::period_mass(int t) const {
  double total = 0.0;
  for (int i = 0; i < num_classes(); ++i) total += weight(t, i) * scenarios_[i];
  return total;
}

double CoverageTensor::total_mass() const {
  double total = 0.0;
  for (int t = 0; t < horizon_; ++t) total += period_mass(t);
  return total;
}

CoverageTensor build_coverage(const Instance& instance, int threads) {
  CoverageTensor cov(instance);
  const HomePreprocessing home = preprocess_home_charging(instance);
  const int N = instance.num_classes();
  const int T = instance.horizon;
  // Class blocks are word aligned, so blocks can be filled concurrently.
  parallel_for(static_cast<std::size_t>(N) * T, threads, [&](std::size_t block) {
    const int i = static_cast<int>(block / T);
    const int t = static_cast<int>(block % T);
    const auto& cs = instance.choice(i, t);
    const std::size_t base = cs.exogenous.size();
    const auto& forced = home.forced[static_cast<std::size_t>(t) * N + i];
    std::vector<double> prefix;
    for (int r = 0; r < instance.classes[i].scenario_count; ++r) {
      if (forced[r]) cov.set_forced(t, i, r, true);
      const double u0 = optout_utility(instance, t, i, r);
      const auto row = instance.errors.row(i, t, r);
      for (std::size_t s = 0; s < cs.stations.size(); ++s) {
        const int j = cs.stations[s];
        const int m = instance.stations[j].max_outlets;
        const double kappa = instance.utility.asc(instance.station_alt(j), i, t);
        prefix.assign(m + 1, 0.0);
        double sum = 0.0;
        for (int k = 1; k <= m; ++k) {
          sum += instance.utility.beta(j, i, k, t);
          prefix[k] = (sum + kappa) + row[base + s];
        }
        // u is nondecreasing in k; find the first k with u >= u0.
        int lo = 1, hi = m + 1;
        while (lo < hi) {
          const int mid = (lo + hi) / 2;
          if (prefix[mid] >= u0) {
            hi = mid;
          } else {
            lo = mid + 1;
          }
        }
        if (lo <= m) cov.set_min_k(t, j, i, r, static_cast<std::uint8_t>(lo));
      }
    }
  });
  return cov;
}

}  // namespace evcs
