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

#include "evcs/error_sim.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "evcs/error.hpp"

namespace evcs {

namespace {

constexpr std::uint32_t kNormalComponent = 1;
constexpr std::uint32_t kGumbelComponent = 2;

Philox4x32::Counter draw_counter(int instance_index, int i, int t, int r, std::uint32_t slot,
                                 std::uint32_t component) {
  return {static_cast<std::uint32_t>(instance_index), static_cast<std::uint32_t>(i),
          (static_cast<std::uint32_t>(t) << 20) | static_cast<std::uint32_t>(r),
          (slot << 8) | component};
}

}  // namespace

NestSpec NestSpec::standard(int num_stations) {
  NestSpec spec;
  spec.nest_of_alternative.assign(num_stations + 2, 1);
  spec.nest_of_alternative[kOptOutAlt] = 0;
  spec.nest_of_alternative[num_stations + 1] = 2;
  spec.factor_sd = {1.0, 1.0, 1.0};
  return spec;
}

double gumbel_from_uniform(double u, double location, double scale) {
  return location - scale * std::log(-std::log(u));
}

double gumbel_draw(CounterRng& rng, double location, double scale) {
  return gumbel_from_uniform(rng.uniform(), location, scale);
}

ErrorTensor draw_errors(const Instance& skeleton, const NestSpec& nests, std::uint64_t seed,
                        int instance_index, const ErrorDrawOptions& options) {
  if (!(nests.gumbel_scale > 0.0) || !(nests.normal_scale > 0.0)) {
    throw ConfigError("nest spec scales must be positive");
  }
  for (double sd : nests.factor_sd) {
    if (!(sd > 0.0)) throw ConfigError("nest factor standard deviations must be positive");
  }
  const int T = skeleton.horizon;
  std::vector<int> counts;
  for (const auto& c : skeleton.classes) counts.push_back(c.scenario_count);
  ErrorTensor tensor(counts, T, skeleton.choice_sets);
  const auto key = Philox4x32::key_from_seed(seed);
  const int num_nests = static_cast<int>(nests.factor_sd.size());

  auto nest_of = [&](AltId alt) {
    const int n = alt < static_cast<int>(nests.nest_of_alternative.size())
                      ? nests.nest_of_alternative[alt]
                      : -1;
    if (n < 0 || n >= num_nests) {
      throw ConfigError("alternative " + std::to_string(alt) + " has no nest");
    }
    return n;
  };

  std::vector<double> xi(num_nests);
  std::vector<AltId> alts;
  for (int i = 0; i < skeleton.num_classes(); ++i) {
    for (int t = 0; t < T; ++t) {
      const auto& cs = skeleton.choice(i, t);
      alts.assign(cs.exogenous.begin(), cs.exogenous.end());
      for (int j : cs.stations) alts.push_back(skeleton.station_alt(j));
      std::vector<int> alt_nest;
      for (AltId a : alts) alt_nest.push_back(nest_of(a));

      for (int r = 0; r < counts[i]; ++r) {
        for (int n = 0; n < num_nests; ++n) {
          const auto b = Philox4x32::generate(
              draw_counter(instance_index, i, t, r, static_cast<std::uint32_t>(n), kNormalComponent),
              key);
          const double u1 = uniform_open(b[0], b[1]);
          const double u2 = uniform_open(b[2], b[3]);
          xi[n] = nests.normal_scale * std::sqrt(-2.0 * std::log(u1)) *
                  std::cos(2.0 * std::numbers::pi * u2);
        }
        auto row = tensor.row(i, t, r);
        for (std::size_t c = 0; c < alts.size(); ++c) {
          double eps = 0.0;
          if (options.include_normal) eps += nests.factor_sd[alt_nest[c]] * xi[alt_nest[c]];
          if (options.include_gumbel) {
            const auto b = Philox4x32::generate(
                draw_counter(instance_index, i, t, r, static_cast<std::uint32_t>(alts[c]),
                             kGumbelComponent),
                key);
            eps += gumbel_from_uniform(uniform_open(b[0], b[1]), nests.gumbel_location,
                                       nests.gumbel_scale);
          }
          row[c] = eps;
        }
      }
    }
  }
  return tensor;
}

}  // namespace evcs
