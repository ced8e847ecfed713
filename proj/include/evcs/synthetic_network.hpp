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

#include "evcs/network.hpp"

namespace evcs {

struct SyntheticNetworkConfig {
  int num_nodes = 317;
  double width_km = 45.0;
  double height_km = 30.0;
  // Lognormal node population; the defaults give a mean near 573 residents.
  double population_log_mean = 6.031;
  double population_log_sd = 0.8;
  double city_center_fraction = 0.1;
  bool with_income_mix = true;
};

/// Uniform nodes in a rectangle joined by their Gabriel graph. The nodes
/// closest to the centroid are flagged as city center.
Network generate_network(const SyntheticNetworkConfig& config, std::uint64_t seed);

}  // namespace evcs
