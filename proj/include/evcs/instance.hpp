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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evcs/network.hpp"

namespace evcs {

// Index conventions used throughout the library:
//   j  station index in [0, |M|)
//   k  outlet count in [1, m_j] (k = 0 means closed)
//   i  user class index in [0, |N|)
//   t  period index in [0, T); model period 1 is t = 0
//   r  scenario index in [0, R_i)
// Alternatives are addressed by AltId: 0 is the opt-out, 1 + j is station j
// and |M| + 1 is home charging.
using AltId = int;
inline constexpr AltId kOptOutAlt = 0;

enum class DatasetKind { kSimple, kDistance, kHomeCharging, kLongSpan, kPrice, kCustom };

std::string to_string(DatasetKind kind);
DatasetKind dataset_kind_from_string(const std::string& name);

enum class IncomeBracket { kBelow25k, k25kTo50k, k50kTo75k, k75kTo100k, kAbove100k };

std::string to_string(IncomeBracket bracket);
IncomeBracket income_bracket_from_string(const std::string& name);
/// Income indicator used by the Price dataset: -2, -1, 0, 1, 2 by bracket.
int income_delta(IncomeBracket bracket);

struct Station {
  std::string id;
  std::string node_id;
  int max_outlets = 1;
  int initial_outlets = 0;
  bool level3 = true;

  bool operator==(const Station&) const = default;
};

struct UserClass {
  std::string id;
  std::string home_node;
  std::vector<double> population;  // per period
  bool has_home_charging = false;
  IncomeBracket income = IncomeBracket::k50kTo75k;
  int scenario_count = 1;
  std::optional<double> consideration_radius_km;  // nullopt: unbounded

  bool operator==(const UserClass&) const = default;
};

/// Outlet costs c[j][k][t] and per-period budgets B[t].
class CostBudget {
 public:
  CostBudget() = default;
  CostBudget(const std::vector<int>& max_outlets, int horizon);

  double cost(int j, int k, int t) const { return cost_[j][(k - 1) * horizon_ + t]; }
  double& cost(int j, int k, int t) { return cost_[j][(k - 1) * horizon_ + t]; }
  double budget(int t) const { return budget_[t]; }
  double& budget(int t) { return budget_[t]; }

  int horizon() const { return horizon_; }
  const std::vector<std::vector<double>>& raw_costs() const { return cost_; }
  const std::vector<double>& budgets() const { return budget_; }

  bool operator==(const CostBudget&) const = default;

 private:
  int horizon_ = 0;
  std::vector<std::vector<double>> cost_;  // [j][(k-1) * T + t]
  std::vector<double> budget_;
};

/// Alternative-specific constants and per-outlet utility increments.
class UtilityParams {
 public:
  UtilityParams() = default;
  UtilityParams(int num_stations, int num_classes, int horizon,
                const std::vector<int>& max_outlets);

  /// kappa for an alternative (see AltId).
  double asc(AltId alt, int i, int t) const { return asc_[asc_index(alt, i, t)]; }
  double& asc(AltId alt, int i, int t) { return asc_[asc_index(alt, i, t)]; }

  /// Increment of utility when going from k - 1 to k outlets at station j.
  double beta(int j, int i, int k, int t) const { return beta_[beta_index(j, i, k, t)]; }
  double& beta(int j, int i, int k, int t) { return beta_[beta_index(j, i, k, t)]; }

  const std::vector<double>& raw_asc() const { return asc_; }
  const std::vector<double>& raw_beta() const { return beta_; }
  std::vector<double>& raw_asc() { return asc_; }
  std::vector<double>& raw_beta() { return beta_; }

  bool operator==(const UtilityParams&) const = default;

 private:
  std::size_t asc_index(AltId alt, int i, int t) const {
    return (static_cast<std::size_t>(alt) * num_classes_ + i) * horizon_ + t;
  }
  std::size_t beta_index(int j, int i, int k, int t) const {
    return station_offset_[j] +
           (static_cast<std::size_t>(i) * max_outlets_[j] + (k - 1)) * horizon_ + t;
  }

  int num_stations_ = 0;
  int num_classes_ = 0;
  int horizon_ = 0;
  std::vector<int> max_outlets_;
  std::vector<std::size_t> station_offset_;
  std::vector<double> asc_;   // [alt][i][t]
  std::vector<double> beta_;  // [j][i][k-1][t]
};

/// C_i^{0t} (exogenous alternatives) and C_i^{1t} (considered stations).
struct ChoiceSet {
  std::vector<AltId> exogenous;  // opt-out first, then optional home
  std::vector<int> stations;     // ascending station indices

  std::size_t width() const { return exogenous.size() + stations.size(); }
  bool has_home(AltId home_alt) const;
  bool operator==(const ChoiceSet&) const = default;
};

/// Simulated error terms epsilon[j][i][r][t], stored per (i, t) block as R_i
/// rows of width |C_i^{0t}| + |C_i^{1t}|. Column order inside a row follows
/// the choice set: exogenous alternatives first, then stations.
class ErrorTensor {
 public:
  ErrorTensor() = default;
  ErrorTensor(const std::vector<int>& scenario_counts, int horizon,
              const std::vector<ChoiceSet>& choice_sets);

  std::span<const double> row(int i, int t, int r) const {
    const std::size_t b = block(i, t);
    return {values_.data() + offset_[b] + static_cast<std::size_t>(r) * width_[b],
            width_[b]};
  }
  std::span<double> row(int i, int t, int r) {
    const std::size_t b = block(i, t);
    return {values_.data() + offset_[b] + static_cast<std::size_t>(r) * width_[b],
            width_[b]};
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool operator==(const ErrorTensor&) const = default;

 private:
  std::size_t block(int i, int t) const {
    return static_cast<std::size_t>(i) * horizon_ + t;
  }

  int horizon_ = 0;
  std::vector<std::size_t> offset_;
  std::vector<std::uint32_t> width_;
  std::vector<double> values_;
};

struct InstanceMetadata {
  std::string dataset_kind = "Custom";
  std::uint64_t seed = 0;
  int instance_index = 0;

  bool operator==(const InstanceMetadata&) const = default;
};

/// The complete input to every solver. Treated as immutable once validated.
struct Instance {
  Network network;
  std::vector<Station> stations;
  std::vector<UserClass> classes;
  int horizon = 0;
  CostBudget costs;
  UtilityParams utility;
  std::vector<ChoiceSet> choice_sets;  // [i * T + t]
  ErrorTensor errors;
  InstanceMetadata metadata;

  int num_stations() const { return static_cast<int>(stations.size()); }
  int num_classes() const { return static_cast<int>(classes.size()); }
  AltId station_alt(int j) const { return 1 + j; }
  AltId home_alt() const { return num_stations() + 1; }
  int num_alternatives() const { return num_stations() + 2; }

  const ChoiceSet& choice(int i, int t) const {
    return choice_sets[static_cast<std::size_t>(i) * horizon + t];
  }
  std::vector<int> max_outlets() const;

  /// Epsilon of the opt-out (column 0) for the triplet.
  double optout_error(int t, int i, int r) const { return errors.row(i, t, r)[0]; }

  /// Number of triplets (t, i, r), i.e. sum_i R_i * T.
  std::size_t triplet_count() const;

  bool operator==(const Instance&) const = default;
};

/// Checks every documented invariant of an instance; throws ValidationError
/// naming the violated invariant and its indices.
void validate_instance(const Instance& instance);

}  // namespace evcs
