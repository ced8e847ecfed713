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

#include "evcs/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "evcs/error.hpp"
#include "evcs/parallel.hpp"
#include "evcs/philox.hpp"
#include "evcs/synthetic_network.hpp"

namespace evcs {

namespace {

constexpr std::uint32_t kStationStream = 0x53544E53u;  // "STNS"
constexpr std::uint32_t kTinyStream = 0x54494E59u;     // "TINY"

constexpr std::array<double, 3> kHomeAccess = {0.9, 0.75, 0.4};

std::vector<std::string> pick_station_nodes(const Network& network, int count,
                                            std::uint64_t seed) {
  if (count > static_cast<int>(network.size())) {
    throw ConfigError("cannot place " + std::to_string(count) + " stations on " +
                      std::to_string(network.size()) + " nodes");
  }
  std::vector<std::size_t> idx(network.size());
  std::iota(idx.begin(), idx.end(), 0);
  CounterRng rng(seed, kStationStream);
  for (int q = 0; q < count; ++q) {
    const auto pick = q + rng.below(idx.size() - q);
    std::swap(idx[q], idx[pick]);
  }
  std::vector<std::size_t> chosen(idx.begin(), idx.begin() + count);
  std::sort(chosen.begin(), chosen.end());
  std::vector<std::string> out;
  for (auto v : chosen) out.push_back(network.nodes()[v].id);
  return out;
}

}  // namespace

DatasetParams dataset_params(DatasetKind kind) {
  DatasetParams p;
  p.kind = kind;
  switch (kind) {
    case DatasetKind::kSimple:
      break;
    case DatasetKind::kDistance:
    case DatasetKind::kHomeCharging:
      p.max_outlets = 6;
      break;
    case DatasetKind::kLongSpan:
      p.horizon = 10;
      p.num_stations = 30;
      p.max_outlets = 6;
      p.radius_km.reset();
      break;
    case DatasetKind::kPrice:
      p.num_stations = 30;
      p.max_outlets = 6;
      p.radius_km.reset();
      break;
    case DatasetKind::kCustom:
      break;
  }
  return p;
}

double compute_asc(DatasetKind kind, bool level3, bool city_center, IncomeBracket income, int t,
                   double distance_km) {
  const double d1 = level3 ? 1.0 : 0.0;
  const double d3 = city_center ? 1.0 : 0.0;
  switch (kind) {
    case DatasetKind::kSimple:
    case DatasetKind::kHomeCharging:
    case DatasetKind::kLongSpan:
    case DatasetKind::kCustom:
      return 1.464 * d1 - 0.063 * distance_km + 0.174 * d3;
    case DatasetKind::kDistance:
      return 1.464 * d1 - 0.63 * distance_km + 0.174 * d3;
    case DatasetKind::kPrice: {
      const double d4 = income_delta(income);
      return 1.464 * d1 - 0.063 * distance_km + 0.174 * d3 + 0.443 * d4 +
             0.443 * (t - 1) * ((2.0 - d4) / 4.0);
    }
  }
  throw ConfigError("unknown dataset kind");
}

Instance build_skeleton(const Network& network, const DatasetParams& params,
                        std::uint64_t base_seed) {
  if (params.horizon < 1) throw ConfigError("horizon must be >= 1");
  if (params.num_stations < 1) throw ConfigError("a dataset needs at least one station");
  if (params.max_outlets < 1) throw ConfigError("max_outlets must be >= 1");
  if (!params.budgets.empty() && static_cast<int>(params.budgets.size()) != params.horizon) {
    throw ConfigError("per-period budgets must have one entry per period");
  }
  network.validate();
  if (network.total_population() <= 0.0) throw ConfigError("network has no population");

  Instance in;
  in.network = network;
  in.horizon = params.horizon;
  in.metadata.dataset_kind = to_string(params.kind);
  in.metadata.seed = base_seed;
  const int T = params.horizon;

  auto station_nodes = params.station_nodes;
  if (station_nodes.empty()) {
    station_nodes = pick_station_nodes(network, params.num_stations, base_seed);
  }
  if (static_cast<int>(station_nodes.size()) != params.num_stations) {
    throw ConfigError("station_nodes must list num_stations nodes");
  }
  std::vector<std::size_t> station_index;
  for (std::size_t j = 0; j < station_nodes.size(); ++j) {
    Station s;
    s.id = "s" + std::to_string(j);
    s.node_id = station_nodes[j];
    s.max_outlets = params.max_outlets;
    s.initial_outlets = 0;
    s.level3 = true;
    station_index.push_back(network.index_of(s.node_id));
    in.stations.push_back(std::move(s));
  }
  const auto dist = distance_rows(network, station_index);  // [j][node]
  const int M = in.num_stations();

  const bool home_kind = params.kind == DatasetKind::kHomeCharging;
  const bool price_kind = params.kind == DatasetKind::kPrice;
  struct ClassDraft {
    UserClass cls;
    std::size_t node;
  };
  std::vector<ClassDraft> drafts;
  for (std::size_t v = 0; v < network.size(); ++v) {
    const Node& node = network.nodes()[v];
    const double base = node.population * params.population_factor;
    auto make = [&](const std::string& suffix, double pop) {
      UserClass c;
      c.id = node.id + suffix;
      c.home_node = node.id;
      c.population.assign(T, pop);
      c.consideration_radius_km = params.radius_km;
      return c;
    };
    if (home_kind) {
      double share = 0.0;
      for (int h = 0; h < 3; ++h) share += kHomeAccess[h] * node.housing_mix[h];
      const double home_pop = base * share;
      UserClass with_home = make("-home", home_pop);
      with_home.has_home_charging = true;
      drafts.push_back({with_home, v});
      drafts.push_back({make("-nohome", base - home_pop), v});
    } else if (price_kind) {
      std::array<double, 5> mix{0.2, 0.2, 0.2, 0.2, 0.2};
      if (node.income_mix) mix = *node.income_mix;
      for (int b = 0; b < 5; ++b) {
        const double pop = base * mix[b];
        if (pop < params.min_class_population) continue;
        const auto bracket = static_cast<IncomeBracket>(b);
        UserClass c = make("-" + to_string(bracket), pop);
        c.income = bracket;
        drafts.push_back({c, v});
      }
    } else {
      drafts.push_back({make("", base), v});
    }
  }

  const int N = static_cast<int>(drafts.size());
  std::vector<int> max_outlets(M, params.max_outlets);
  in.costs = CostBudget(max_outlets, T);
  for (int t = 0; t < T; ++t) {
    in.costs.budget(t) = params.budgets.empty() ? params.budget : params.budgets[t];
    for (int j = 0; j < M; ++j) {
      for (int k = 1; k <= params.max_outlets; ++k) {
        in.costs.cost(j, k, t) = k == 1 ? params.first_outlet_cost : params.extra_outlet_cost;
      }
    }
  }

  in.utility = UtilityParams(M, N, T, max_outlets);
  for (int i = 0; i < N; ++i) {
    const auto& d = drafts[i];
    ChoiceSet cs;
    cs.exogenous.push_back(kOptOutAlt);
    if (d.cls.has_home_charging) cs.exogenous.push_back(in.home_alt());
    for (int j = 0; j < M; ++j) {
      const double km = dist[j][d.node];
      if (!params.radius_km || km <= *params.radius_km) cs.stations.push_back(j);
    }
    UserClass cls = d.cls;
    cls.scenario_count = params.fixed_scenario_count > 0
                             ? params.fixed_scenario_count
                             : params.scenarios_per_alternative * static_cast<int>(cs.width());
    in.classes.push_back(std::move(cls));

    double b = params.beta;
    if (home_kind) b = d.cls.has_home_charging ? params.beta_home : params.beta_no_home;
    for (int t = 0; t < T; ++t) {
      in.utility.asc(kOptOutAlt, i, t) = params.optout_asc;
      if (d.cls.has_home_charging) {
        in.utility.asc(in.home_alt(), i, t) = params.optout_asc + params.home_asc_offset;
      }
      for (int j = 0; j < M; ++j) {
        const Node& at = network.nodes()[station_index[j]];
        in.utility.asc(in.station_alt(j), i, t) = compute_asc(
            params.kind, in.stations[j].level3, at.city_center, d.cls.income, t + 1, dist[j][d.node]);
        for (int k = 1; k <= params.max_outlets; ++k) {
          in.utility.beta(j, i, k, t) = params.quadratic_beta ? b * k : b;
        }
      }
      in.choice_sets.push_back(cs);
    }
  }
  return in;
}

NestSpec dataset_nests(const Instance& skeleton) {
  return NestSpec::standard(skeleton.num_stations());
}

Instance generate_instance(const Network& network, const DatasetParams& params,
                           std::uint64_t base_seed, int index) {
  Instance in = build_skeleton(network, params, base_seed);
  in.metadata.instance_index = index;
  in.errors = draw_errors(in, dataset_nests(in), base_seed, index);
  validate_instance(in);
  return in;
}

std::vector<Instance> generate_dataset(const Network& network, const DatasetParams& params,
                                       int instance_count, std::uint64_t base_seed,
                                       int threads) {
  if (instance_count < 0) throw ConfigError("instance count must be >= 0");
  std::vector<Instance> out(instance_count);
  if (instance_count == 0) return out;
  const Instance skeleton = build_skeleton(network, params, base_seed);
  const NestSpec nests = dataset_nests(skeleton);
  parallel_for(static_cast<std::size_t>(instance_count), threads, [&](std::size_t k) {
    Instance in = skeleton;
    in.metadata.instance_index = static_cast<int>(k);
    in.errors = draw_errors(in, nests, base_seed, static_cast<int>(k));
    validate_instance(in);
    out[k] = std::move(in);
  });
  return out;
}

Instance generate_tiny_instance(std::uint64_t seed, const TinyConfig& config, int instance_index) {
  CounterRng rng(seed, kTinyStream);
  SyntheticNetworkConfig net_cfg;
  net_cfg.num_nodes = config.num_nodes;
  net_cfg.width_km = config.extent_km;
  net_cfg.height_km = config.extent_km;
  const Network network = generate_network(net_cfg, seed);

  DatasetParams p = dataset_params(DatasetKind::kSimple);
  p.kind = DatasetKind::kCustom;
  p.horizon = 1 + static_cast<int>(rng.below(config.max_horizon));
  p.num_stations = config.min_stations +
                   static_cast<int>(rng.below(config.max_stations - config.min_stations + 1));
  p.max_outlets = 1 + static_cast<int>(rng.below(config.max_outlets));
  p.fixed_scenario_count = config.scenario_count;
  for (int t = 0; t < p.horizon; ++t) p.budgets.push_back(150.0 + 50.0 * rng.below(6));
  Instance in = build_skeleton(network, p, seed);
  in.errors = draw_errors(in, dataset_nests(in), seed, instance_index);
  in.metadata.instance_index = instance_index;
  validate_instance(in);
  return in;
}

}  // namespace evcs
