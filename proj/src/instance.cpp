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

#include "evcs/instance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "evcs/error.hpp"

namespace evcs {

std::string to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kSimple: return "Simple";
    case DatasetKind::kDistance: return "Distance";
    case DatasetKind::kHomeCharging: return "HomeCharging";
    case DatasetKind::kLongSpan: return "LongSpan";
    case DatasetKind::kPrice: return "Price";
    case DatasetKind::kCustom: return "Custom";
  }
  return "Custom";
}

DatasetKind dataset_kind_from_string(const std::string& name) {
  std::string lower;
  for (char c : name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "simple") return DatasetKind::kSimple;
  if (lower == "distance") return DatasetKind::kDistance;
  if (lower == "homecharging" || lower == "home-charging") return DatasetKind::kHomeCharging;
  if (lower == "longspan" || lower == "long-span") return DatasetKind::kLongSpan;
  if (lower == "price") return DatasetKind::kPrice;
  if (lower == "custom") return DatasetKind::kCustom;
  throw ConfigError("unknown dataset kind '" + name + "'");
}

std::string to_string(IncomeBracket bracket) {
  switch (bracket) {
    case IncomeBracket::kBelow25k: return "below-25k";
    case IncomeBracket::k25kTo50k: return "25k-50k";
    case IncomeBracket::k50kTo75k: return "50k-75k";
    case IncomeBracket::k75kTo100k: return "75k-100k";
    case IncomeBracket::kAbove100k: return "above-100k";
  }
  return "50k-75k";
}

IncomeBracket income_bracket_from_string(const std::string& name) {
  for (int b = 0; b < 5; ++b) {
    const auto bracket = static_cast<IncomeBracket>(b);
    if (to_string(bracket) == name) return bracket;
  }
  throw ValidationError("unknown income bracket '" + name + "'");
}

int income_delta(IncomeBracket bracket) { return static_cast<int>(bracket) - 2; }

CostBudget::CostBudget(const std::vector<int>& max_outlets, int horizon)
    : horizon_(horizon), budget_(horizon, 0.0) {
  cost_.reserve(max_outlets.size());
  for (int m : max_outlets) cost_.emplace_back(static_cast<std::size_t>(m) * horizon, 0.0);
}

UtilityParams::UtilityParams(int num_stations, int num_classes, int horizon,
                             const std::vector<int>& max_outlets)
    : num_stations_(num_stations),
      num_classes_(num_classes),
      horizon_(horizon),
      max_outlets_(max_outlets) {
  asc_.assign(static_cast<std::size_t>(num_stations + 2) * num_classes * horizon, 0.0);
  std::size_t offset = 0;
  for (int m : max_outlets_) {
    station_offset_.push_back(offset);
    offset += static_cast<std::size_t>(num_classes) * m * horizon;
  }
  beta_.assign(offset, 0.0);
}

bool ChoiceSet::has_home(AltId home_alt) const {
  return std::find(exogenous.begin(), exogenous.end(), home_alt) != exogenous.end();
}

ErrorTensor::ErrorTensor(const std::vector<int>& scenario_counts, int horizon,
                         const std::vector<ChoiceSet>& choice_sets)
    : horizon_(horizon) {
  std::size_t offset = 0;
  for (std::size_t i = 0; i < scenario_counts.size(); ++i) {
    for (int t = 0; t < horizon; ++t) {
      const auto& cs = choice_sets[i * horizon + t];
      offset_.push_back(offset);
      width_.push_back(static_cast<std::uint32_t>(cs.width()));
      offset += static_cast<std::size_t>(scenario_counts[i]) * cs.width();
    }
  }
  values_.assign(offset, 0.0);
}

std::vector<int> Instance::max_outlets() const {
  std::vector<int> out;
  out.reserve(stations.size());
  for (const auto& s : stations) out.push_back(s.max_outlets);
  return out;
}

std::size_t Instance::triplet_count() const {
  std::size_t total = 0;
  for (const auto& c : classes) total += static_cast<std::size_t>(c.scenario_count) * horizon;
  return total;
}

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw ValidationError("instance invariant violated: " + what);
}

}  // namespace

void validate_instance(const Instance& in) {
  in.network.validate();
  const int T = in.horizon;
  const int M = in.num_stations();
  const int N = in.num_classes();
  if (T < 1) fail("horizon must be >= 1");

  for (int j = 0; j < M; ++j) {
    const auto& s = in.stations[j];
    if (s.max_outlets < 1) fail("station " + s.id + ": max_outlets must be positive");
    if (s.initial_outlets < 0 || s.initial_outlets > s.max_outlets) {
      fail("station " + s.id + ": initial_outlets must lie in [0, max_outlets]");
    }
    if (!in.network.contains(s.node_id)) {
      fail("station " + s.id + ": node '" + s.node_id + "' not in network");
    }
  }
  for (int i = 0; i < N; ++i) {
    const auto& c = in.classes[i];
    if (static_cast<int>(c.population.size()) != T) {
      fail("class " + c.id + ": population length must equal horizon");
    }
    for (double p : c.population) {
      if (!(p >= 0.0) || !std::isfinite(p)) fail("class " + c.id + ": population must be >= 0");
    }
    if (c.scenario_count < 1) fail("class " + c.id + ": scenario_count must be >= 1");
    if (!in.network.contains(c.home_node)) {
      fail("class " + c.id + ": home node '" + c.home_node + "' not in network");
    }
  }

  // Costs and budgets.
  if (in.costs.horizon() != T ||
      static_cast<int>(in.costs.raw_costs().size()) != M ||
      static_cast<int>(in.costs.budgets().size()) != T) {
    fail("cost/budget dimensions do not match (|M|, m_j, T)");
  }
  for (int j = 0; j < M; ++j) {
    if (in.costs.raw_costs()[j].size() !=
        static_cast<std::size_t>(in.stations[j].max_outlets) * T) {
      fail("cost/budget dimensions do not match for station " + in.stations[j].id);
    }
    for (int k = 1; k <= in.stations[j].max_outlets; ++k) {
      for (int t = 0; t < T; ++t) {
        const double c = in.costs.cost(j, k, t);
        if (!(c > 0.0) || !std::isfinite(c)) {
          std::ostringstream m;
          m << "outlet cost must be > 0 (station " << j << ", k " << k << ", t " << t << ")";
          fail(m.str());
        }
      }
    }
  }
  for (int t = 0; t < T; ++t) {
    if (!(in.costs.budget(t) >= 0.0)) fail("budget must be >= 0 (t " + std::to_string(t) + ")");
  }

  // Utility parameters.
  const UtilityParams expected_shape(M, N, T, in.max_outlets());
  if (in.utility.raw_asc().size() != expected_shape.raw_asc().size() ||
      in.utility.raw_beta().size() != expected_shape.raw_beta().size()) {
    fail("utility parameter dimensions do not match instance");
  }
  for (double a : in.utility.raw_asc()) {
    if (!std::isfinite(a)) fail("asc (kappa) must be finite");
  }
  for (int j = 0; j < M; ++j) {
    for (int i = 0; i < N; ++i) {
      for (int k = 1; k <= in.stations[j].max_outlets; ++k) {
        for (int t = 0; t < T; ++t) {
          const double b = in.utility.beta(j, i, k, t);
          if (!(b >= 0.0) || !std::isfinite(b)) {
            std::ostringstream m;
            m << "beta must be non-negative (station " << j << ", class " << i << ", k " << k
              << ", t " << t << ")";
            fail(m.str());
          }
        }
      }
    }
  }

  // Choice sets.
  if (in.choice_sets.size() != static_cast<std::size_t>(N) * T) {
    fail("choice set count must equal |N| * T");
  }
  for (int i = 0; i < N; ++i) {
    for (int t = 0; t < T; ++t) {
      const auto& cs = in.choice(i, t);
      std::ostringstream where;
      where << " (class " << i << ", t " << t << ")";
      if (cs.exogenous.empty() || cs.exogenous.front() != kOptOutAlt) {
        fail("opt-out must be the first exogenous alternative" + where.str());
      }
      for (std::size_t e = 1; e < cs.exogenous.size(); ++e) {
        if (cs.exogenous[e] != in.home_alt()) {
          fail("only opt-out and home charging may be exogenous" + where.str());
        }
      }
      if (cs.exogenous.size() > 2) fail("duplicate exogenous alternative" + where.str());
      for (std::size_t p = 0; p < cs.stations.size(); ++p) {
        const int j = cs.stations[p];
        if (j < 0 || j >= M) fail("station index out of range in choice set" + where.str());
        if (p > 0 && cs.stations[p - 1] >= j) {
          fail("choice set stations must be strictly ascending" + where.str());
        }
      }
    }
  }

  // Errors.
  std::vector<int> counts;
  for (const auto& c : in.classes) counts.push_back(c.scenario_count);
  const ErrorTensor expected(counts, T, in.choice_sets);
  if (in.errors.size() != expected.size()) {
    fail("error tensor size does not match choice sets and scenario counts");
  }
  for (double e : in.errors.values()) {
    if (!std::isfinite(e)) fail("error tensor must be finite");
  }
}

}  // namespace evcs
