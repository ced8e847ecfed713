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

#include <string>
#include <vector>

#include "evcs/coverage.hpp"
#include "evcs/instance.hpp"

namespace evcs {

struct BoundsOptions {
  // Per-scenario lower bound min_j (kappa + epsilon) instead of the min over
  // all scenarios of the class.
  bool strengthened = false;
  // Lower a lower bound that reaches the opt-out utility instead of
  // reporting the bounds as unsound.
  bool repair = true;
};

struct BoundViolation {
  int t = 0;
  int i = 0;
  int r = 0;
  double a_lower = 0.0;
  double optout = 0.0;
};

/// Big-M constants of the single-level model. Values are stored per triplet
/// over the reduced choice sets (home alternative removed): column 0 is the
/// opt-out, column 1 + s the s-th station of the choice set.
class BigMBounds {
 public:
  BigMBounds() = default;
  BigMBounds(const Instance& instance, const std::vector<ChoiceSet>& reduced);

  /// Closed-station utility level for (t, i, r); NaN if no station considered.
  double a_lower(int t, int i, int r) const { return a_lower_[triplet(t, i, r)]; }
  double& a_lower(int t, int i, int r) { return a_lower_[triplet(t, i, r)]; }
  /// Upper bound sum_k beta + kappa + epsilon of the s-th station.
  double b(int t, int i, int r, int s) const { return b_[cell(t, i, r) + 1 + s]; }
  double& b(int t, int i, int r, int s) { return b_[cell(t, i, r) + 1 + s]; }
  double nu(int t, int i, int r, int s) const { return nu_[cell(t, i, r) + 1 + s]; }
  double& nu(int t, int i, int r, int s) { return nu_[cell(t, i, r) + 1 + s]; }
  /// Column 0: opt-out, 1 + s: station s.
  double mu(int t, int i, int r, int col) const { return mu_[cell(t, i, r) + col]; }
  double& mu(int t, int i, int r, int col) { return mu_[cell(t, i, r) + col]; }

  const std::vector<ChoiceSet>& choice_sets() const { return choice_sets_; }
  const ChoiceSet& choice(int i, int t) const {
    return choice_sets_[static_cast<std::size_t>(i) * horizon_ + t];
  }

  /// Triplets where the lower bound reached the opt-out utility before repair.
  std::vector<BoundViolation> violations;
  std::vector<std::string> warnings;
  bool repaired = false;

  /// True when every lower bound is strictly below the opt-out utility.
  bool sound() const { return sound_; }
  void set_sound(bool value) { sound_ = value; }

 private:
  std::size_t triplet(int t, int i, int r) const {
    return triplet_offset_[static_cast<std::size_t>(i) * horizon_ + t] + r;
  }
  std::size_t cell(int t, int i, int r) const {
    const std::size_t block = static_cast<std::size_t>(i) * horizon_ + t;
    return cell_offset_[block] + static_cast<std::size_t>(r) * width_[block];
  }

  int horizon_ = 0;
  std::vector<ChoiceSet> choice_sets_;
  std::vector<std::size_t> triplet_offset_;
  std::vector<std::size_t> cell_offset_;
  std::vector<std::size_t> width_;
  std::vector<double> a_lower_;
  std::vector<double> b_;
  std::vector<double> nu_;
  std::vector<double> mu_;
  bool sound_ = true;
};

BigMBounds compute_bounds(const Instance& instance, const BoundsOptions& options = {});

}  // namespace evcs
