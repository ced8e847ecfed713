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

#include "evcs/synthetic_network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "evcs/error.hpp"
#include "evcs/philox.hpp"

namespace evcs {

namespace {

constexpr std::uint32_t kNetworkStream = 0x4E455457u;  // "NETW"

template <std::size_t N>
std::array<double, N> random_mix(CounterRng& rng) {
  std::array<double, N> mix{};
  double total = 0.0;
  for (auto& v : mix) {
    v = -std::log(rng.uniform());  // Dirichlet(1, ..., 1)
    total += v;
  }
  for (auto& v : mix) v /= total;
  // Absorb rounding so the fractions sum to one as closely as possible.
  double rest = 1.0;
  for (std::size_t k = 0; k + 1 < N; ++k) rest -= mix[k];
  mix[N - 1] = rest;
  return mix;
}

}  // namespace

Network generate_network(const SyntheticNetworkConfig& config, std::uint64_t seed) {
  if (config.num_nodes < 2) throw ConfigError("synthetic network needs at least 2 nodes");
  if (!(config.width_km > 0.0) || !(config.height_km > 0.0)) {
    throw ConfigError("synthetic network extent must be positive");
  }
  CounterRng rng(seed, kNetworkStream);
  const int n = config.num_nodes;
  std::vector<Node> nodes(n);
  for (int v = 0; v < n; ++v) {
    Node& node = nodes[v];
    node.id = "n" + std::to_string(v);
    node.x_km = rng.uniform() * config.width_km;
    node.y_km = rng.uniform() * config.height_km;
    node.population =
        std::round(std::exp(config.population_log_mean + config.population_log_sd * rng.normal()));
    node.housing_mix = random_mix<3>(rng);
    if (config.with_income_mix) node.income_mix = random_mix<5>(rng);
  }

  double cx = 0.0, cy = 0.0;
  for (const auto& node : nodes) {
    cx += node.x_km;
    cy += node.y_km;
  }
  cx /= n;
  cy /= n;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto d2c = [&](int v) {
    return std::hypot(nodes[v].x_km - cx, nodes[v].y_km - cy);
  };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d2c(a) < d2c(b); });
  const int centers = std::max(1, static_cast<int>(std::lround(config.city_center_fraction * n)));
  for (int q = 0; q < centers && q < n; ++q) nodes[order[q]].city_center = true;

  std::vector<Edge> edges;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const double mx = 0.5 * (nodes[a].x_km + nodes[b].x_km);
      const double my = 0.5 * (nodes[a].y_km + nodes[b].y_km);
      const double radius2 = 0.25 * (std::pow(nodes[a].x_km - nodes[b].x_km, 2) +
                                     std::pow(nodes[a].y_km - nodes[b].y_km, 2));
      if (radius2 <= 0.0) continue;
      bool empty = true;
      for (int c = 0; c < n && empty; ++c) {
        if (c == a || c == b) continue;
        const double d2 = std::pow(nodes[c].x_km - mx, 2) + std::pow(nodes[c].y_km - my, 2);
        if (d2 < radius2) empty = false;
      }
      if (empty) edges.push_back({nodes[a].id, nodes[b].id, euclidean_km(nodes[a], nodes[b])});
    }
  }
  Network net(std::move(nodes), std::move(edges));
  net.validate();
  return net;
}

}  // namespace evcs
