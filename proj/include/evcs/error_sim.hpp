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
#include <vector>

#include "evcs/instance.hpp"
#include "evcs/philox.hpp"

namespace evcs {

struct NestSpec {
  std::vector<int> nest_of_alternative;  // indexed by AltId; -1 means unassigned
  std::vector<double> factor_sd;         // per nest
  double gumbel_scale = 3.0;
  double gumbel_location = 0.0;
  double normal_scale = 1.0;

  /// Opt-out alone, every station in one nest, home (if any) alone.
  static NestSpec standard(int num_stations);
};

struct ErrorDrawOptions {
  bool include_normal = true;
  bool include_gumbel = true;
};

/// location - scale * ln(-ln(u)) for u in (0, 1).
double gumbel_from_uniform(double u, double location, double scale);
double gumbel_draw(CounterRng& rng, double location, double scale);

/// Draws the error tensor for the choice sets of `skeleton`. Every draw is
/// keyed by (seed, instance_index, i, t, r, alternative), so the result does
/// not depend on evaluation order.
ErrorTensor draw_errors(const Instance& skeleton, const NestSpec& nests, std::uint64_t seed,
                        int instance_index, const ErrorDrawOptions& options = {});

}  // namespace evcs
