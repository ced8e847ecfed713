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

#include "evcs/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace evcs {

BigMBounds::BigMBounds(const Instance& instance, const std::vector<ChoiceSet>& reduced)
    : horizon_(instance.horizon), choice_sets_(reduced) {
  std::size_t triplets = 0, cells = 0;
  for (int i = 0; i < instance.num_classes(); ++i) {
    const std::size_t R = instance.classes[i].scenario_count;
    for (int t = 0; t < horizon_; ++t) {
      const std::size_t w = 1 + choice(i, t).stations.size();
      triplet_offset_.push_back(triplets);
      cell_offset_.push_back(cells);
      width_.push_back(w);
      triplets += R;
      cells += R * w;
    }
  }
  a_lower_.assign(triplets, std::numeric_limits<double>::quiet_NaN());
  b_.assign(cells, 0.0);
  nu_.assign(cells, 0.0);
  mu_.assign(cells, 0.0);
}

BigMBounds compute_bounds(const Instance& instance, const BoundsOptions& options) {
  const HomePreprocessing home = preprocess_home_charging(instance);
  BigMBounds bounds(instance, home.reduced_choice_sets);
  const int N = instance.num_classes();
  const int T = instance.horizon;
  constexpr double kMargin = 1e-6;

  for (int i = 0; i < N; ++i) {
    const int R = instance.classes[i].scenario_count;
    for (int t = 0; t < T; ++t) {
      const auto& cs = instance.choice(i, t);
      const std::size_t base = cs.exogenous.size();
      const std::size_t S = cs.stations.size();
      auto kappa_eps = [&](int r, std::size_t s) {
        return instance.utility.asc(instance.station_alt(cs.stations[s]), i, t) +
               instance.errors.row(i, t, r)[base + s];
      };
      if (S > 0) {
        double class_min = std::numeric_limits<double>::infinity();
        double min_optout = std::numeric_limits<double>::infinity();
        for (int r = 0; r < R; ++r) {
          double scen_min = std::numeric_limits<double>::infinity();
          for (std::size_t s = 0; s < S; ++s) scen_min = std::min(scen_min, kappa_eps(r, s));
          class_min = std::min(class_min, scen_min);
          bounds.a_lower(t, i, r) = scen_min;
          min_optout = std::min(min_optout, optout_utility(instance, t, i, r));
        }
        bool violated = false;
        for (int r = 0; r < R; ++r) {
          const double a = options.strengthened ? bounds.a_lower(t, i, r) : class_min;
          const double u0 = optout_utility(instance, t, i, r);
          if (a >= u0) {
            bounds.violations.push_back({t, i, r, a, u0});
            violated = true;
          }
        }
        for (int r = 0; r < R; ++r) {
          double& a = bounds.a_lower(t, i, r);
          if (!options.strengthened) a = class_min;
          if (!violated) continue;
          if (!options.repair) {
            bounds.set_sound(false);
          } else if (options.strengthened) {
            a = std::min(a, optout_utility(instance, t, i, r) - kMargin);
          } else {
            a = std::min(a, min_optout - kMargin);
          }
        }
        if (violated && options.repair) bounds.repaired = true;
      }
      for (int r = 0; r < R; ++r) {
        const double u0 = optout_utility(instance, t, i, r);
        double top = u0;
        for (std::size_t s = 0; s < S; ++s) {
          const int j = cs.stations[s];
          double sum = 0.0;
          for (int k = 1; k <= instance.stations[j].max_outlets; ++k) {
            sum += instance.utility.beta(j, i, k, t);
          }
          const double b = (sum + instance.utility.asc(instance.station_alt(j), i, t)) +
                           instance.errors.row(i, t, r)[base + s];
          bounds.b(t, i, r, static_cast<int>(s)) = b;
          bounds.nu(t, i, r, static_cast<int>(s)) = b - bounds.a_lower(t, i, r);
          top = std::max(top, b);
        }
        bounds.mu(t, i, r, 0) = top - u0;
        for (std::size_t s = 0; s < S; ++s) {
          bounds.mu(t, i, r, 1 + static_cast<int>(s)) = top - bounds.a_lower(t, i, r);
        }
      }
    }
  }
  if (!bounds.violations.empty()) {
    std::ostringstream msg;
    msg << bounds.violations.size()
        << " triplet(s) have a closed-station lower bound at or above the opt-out utility";
    if (options.repair) msg << "; lower bounds were reduced below the opt-out utility";
    bounds.warnings.push_back(msg.str());
  }
  return bounds;
}

}  // namespace evcs
