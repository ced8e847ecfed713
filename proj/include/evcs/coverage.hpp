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
#include <span>
#include <vector>

#include "evcs/instance.hpp"

namespace evcs {

double optout_utility(const Instance& instance, int t, int i, int r);

/// Utility of station j with k >= 1 outlets: (beta_1 + ... + beta_k) + kappa
/// + epsilon. For k = 0 the closed-station lower bound is returned. Throws
/// DomainError when j is not in the choice set of (i, t).
double station_utility_at_k(const Instance& instance, int t, int i, int r, int j, int k);

/// Utilities for k = 0..m_j of one station and triplet.
std::vector<double> utility_ladder(const Instance& instance, int t, int i, int r, int j);

/// Smallest kappa + epsilon over the stations considered by (i, t) and all
/// scenarios; NaN when the class considers no station.
double closed_lower_bound(const Instance& instance, int i, int t);

/// Column of an alternative in the error rows of (i, t), or -1.
int choice_column(const Instance& instance, int i, int t, AltId alt);

/// Triplets (t, i, r) with u_home >= u_optout are covered whatever the
/// station plan is; the rest drop the home alternative.
struct HomePreprocessing {
  std::vector<std::vector<std::uint8_t>> forced;  // [t * N + i][r]
  std::vector<ChoiceSet> reduced_choice_sets;     // [i * T + t]
  std::size_t forced_count = 0;
};

HomePreprocessing preprocess_home_charging(const Instance& instance);

/// a[j][k][(t, i, r)] as bitsets. Within one period triplets are laid out by
/// class; every class block starts on a 64-bit word boundary so one word
/// holds scenarios of a single class only.
class CoverageTensor {
 public:
  static constexpr std::uint8_t kNever = 0xFF;

  CoverageTensor() = default;
  explicit CoverageTensor(const Instance& instance);

  int horizon() const { return horizon_; }
  int num_stations() const { return static_cast<int>(max_outlets_.size()); }
  int num_classes() const { return static_cast<int>(scenarios_.size()); }
  int max_outlets(int j) const { return max_outlets_[j]; }
  const std::vector<int>& max_outlets() const { return max_outlets_; }
  int scenarios(int i) const { return scenarios_[i]; }

  std::size_t words() const { return words_; }
  std::size_t block_word_offset(int i) const { return block_word_[i]; }
  std::size_t block_words(int i) const { return (scenarios_[i] + 63) / 64; }
  /// Class owning word w of a period row.
  int class_of_word(std::size_t w) const { return word_class_[w]; }
  /// N_i^t / R_i.
  double weight(int t, int i) const { return weight_[static_cast<std::size_t>(t) * num_classes() + i]; }

  /// Bitset of triplets of period t covered by station j with k >= 1 outlets.
  std::span<const std::uint64_t> row(int t, int j, int k) const {
    return {bits_.data() + row_offset(t, j, k), words_};
  }
  std::span<const std::uint64_t> forced_row(int t) const {
    return {forced_.data() + static_cast<std::size_t>(t) * words_, words_};
  }

  std::uint8_t min_k(int t, int j, int i, int r) const {
    return min_k_[min_k_index(t, j, i, r)];
  }
  bool covers(int j, int k, int t, int i, int r) const {
    return k >= 1 && k >= min_k(t, j, i, r);
  }
  bool forced(int t, int i, int r) const {
    return (forced_row(t)[block_word_[i] + r / 64] >> (r % 64)) & 1u;
  }

  void set_min_k(int t, int j, int i, int r, std::uint8_t k);
  void set_forced(int t, int i, int r, bool value);

  std::size_t triplet_count() const;
  std::size_t forced_count() const;
  /// Sum of N/R over forced triplets.
  double forced_mass() const;
  /// Sum of N/R over all triplets.
  double total_mass() const;
  double period_mass(int t) const;

  const std::vector<std::uint8_t>& raw_min_k() const { return min_k_; }

  bool operator==(const CoverageTensor&) const = default;

 private:
  std::size_t row_offset(int t, int j, int k) const {
    return ((static_cast<std::size_t>(t) * total_outlets_) + station_row_[j] + (k - 1)) * words_;
  }
  std::size_t min_k_index(int t, int j, int i, int r) const {
    return (static_cast<std::size_t>(t) * num_stations() + j) * triplets_per_period_ +
           class_offset_[i] + r;
  }

  int horizon_ = 0;
  std::vector<int> max_outlets_;
  std::vector<std::size_t> station_row_;
  std::size_t total_outlets_ = 0;
  std::vector<int> scenarios_;
  std::vector<std::size_t> class_offset_;  // unpadded prefix sums of R_i
  std::size_t triplets_per_period_ = 0;
  std::vector<std::size_t> block_word_;
  std::vector<int> word_class_;
  std::size_t words_ = 0;
  std::vector<double> weight_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint64_t> forced_;
  std::vector<std::uint8_t> min_k_;
};

CoverageTensor build_coverage(const Instance& instance, int threads = 1);

}  // namespace evcs
