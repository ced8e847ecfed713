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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "evcs/datasets.hpp"
#include "evcs/error.hpp"
#include "evcs/error_sim.hpp"
#include "evcs/instance_io.hpp"
#include "evcs/philox.hpp"
#include "evcs/synthetic_network.hpp"
#include "support.hpp"

using namespace evcs;

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

template <class F>
Moments moments(int n, F draw) {
  double s = 0.0, s2 = 0.0;
  for (int q = 0; q < n; ++q) {
    const double v = draw();
    s += v;
    s2 += v * v;
  }
  const double mean = s / n;
  return {mean, s2 / n - mean * mean};
}

Node populated(const std::string& id, double x, double pop) {
  Node n;
  n.id = id;
  n.x_km = x;
  n.population = pop;
  return n;
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using P = Philox4x32;
  CHECK(P::generate({0, 0, 0, 0}, {0, 0}) ==
        P::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(P::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                    {0xffffffffu, 0xffffffffu}) ==
        P::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(P::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                    {0xa4093822u, 0x299f31d0u}) ==
        P::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("counter streams are reproducible and bounded") {
  CounterRng a(42, 7), b(42, 7), c(42, 8);
  bool differs = false;
  for (int q = 0; q < 100; ++q) {
    const auto va = a();
    CHECK(va == b());
    differs = differs || va != c();
  }
  CHECK(differs);
  CounterRng d(1, 1);
  for (int q = 0; q < 1000; ++q) {
    const double u = d.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    CHECK(d.below(7) < 7u);
  }
}

TEST_CASE("Gumbel inverse CDF fixed point") {
  CHECK(gumbel_from_uniform(1.0 / std::numbers::e, 0.0, 3.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(gumbel_from_uniform(1.0 / std::numbers::e, 2.5, 3.0) == doctest::Approx(2.5));
}

TEST_CASE("Gumbel sample moments") {
  CounterRng rng(2024, 1);
  const auto m = moments(100000, [&] { return gumbel_draw(rng, 0.0, 3.0); });
  CHECK(std::abs(m.mean - 3.0 * std::numbers::egamma) < 0.05);
  CHECK(std::abs(m.var - std::numbers::pi * std::numbers::pi * 9.0 / 6.0) < 0.5);
}

TEST_CASE("shared nest factor with no Gumbel part gives equal errors") {
  Instance in = test::handmade(3, 2, 2, 1, 10, 100.0);
  ErrorDrawOptions only_normal;
  only_normal.include_gumbel = false;
  const ErrorTensor e = draw_errors(in, NestSpec::standard(3), 5, 0, only_normal);
  for (int i = 0; i < 2; ++i) {
    for (int t = 0; t < 2; ++t) {
      for (int r = 0; r < 10; ++r) {
        const auto row = e.row(i, t, r);
        CHECK(row[1] == row[2]);
        CHECK(row[2] == row[3]);
        CHECK(row[0] != row[1]);
      }
    }
  }
}

TEST_CASE("nest members differ only through their Gumbel draws") {
  Instance in = test::handmade(3, 2, 1, 1, 20, 100.0);
  const NestSpec spec = NestSpec::standard(3);
  const ErrorTensor full = draw_errors(in, spec, 9, 3);
  ErrorDrawOptions gumbel_only;
  gumbel_only.include_normal = false;
  const ErrorTensor zeta = draw_errors(in, spec, 9, 3, gumbel_only);
  for (int i = 0; i < 2; ++i) {
    for (int r = 0; r < 20; ++r) {
      const auto a = full.row(i, 0, r);
      const auto z = zeta.row(i, 0, r);
      CHECK(a[1] - z[1] == doctest::Approx(a[2] - z[2]).epsilon(1e-12));
      CHECK(a[1] - z[1] == doctest::Approx(a[3] - z[3]).epsilon(1e-12));
    }
  }
}

TEST_CASE("within-nest correlation matches the component variances") {
  const int R = 100000;
  Instance in = test::handmade(2, 1, 1, 1, R, 100.0);
  const ErrorTensor e = draw_errors(in, NestSpec::standard(2), 77, 0);
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (int r = 0; r < R; ++r) {
    const auto row = e.row(0, 0, r);
    sa += row[1];
    sb += row[2];
    saa += row[1] * row[1];
    sbb += row[2] * row[2];
    sab += row[1] * row[2];
  }
  const double ma = sa / R, mb = sb / R;
  const double cov = sab / R - ma * mb;
  const double corr = cov / std::sqrt((saa / R - ma * ma) * (sbb / R - mb * mb));
  const double expected = 1.0 / (1.0 + 1.5 * std::numbers::pi * std::numbers::pi);
  CHECK(std::abs(corr - expected) < 0.02);
}

TEST_CASE("error draws are deterministic and keyed by instance index") {
  Instance in = test::handmade(2, 3, 2, 1, 6, 100.0);
  const NestSpec spec = NestSpec::standard(2);
  CHECK(draw_errors(in, spec, 11, 0) == draw_errors(in, spec, 11, 0));
  CHECK_FALSE(draw_errors(in, spec, 11, 0) == draw_errors(in, spec, 11, 1));
  CHECK_FALSE(draw_errors(in, spec, 11, 0) == draw_errors(in, spec, 12, 0));
}

TEST_CASE("alternative without a nest is a configuration error") {
  Instance in = test::handmade(2, 1, 1, 1, 2, 100.0);
  NestSpec spec = NestSpec::standard(2);
  spec.nest_of_alternative[2] = -1;
  CHECK_THROWS_AS(draw_errors(in, spec, 1, 0), ConfigError);
}

TEST_CASE("station constants") {
  const auto mid = IncomeBracket::k50kTo75k;
  CHECK(compute_asc(DatasetKind::kSimple, true, false, mid, 1, 0.0) == doctest::Approx(1.464));
  CHECK(compute_asc(DatasetKind::kDistance, true, true, mid, 1, 10.0) == doctest::Approx(-4.662));
  const double simple = compute_asc(DatasetKind::kSimple, true, false, mid, 1, 2.0);
  CHECK(compute_asc(DatasetKind::kPrice, true, false, IncomeBracket::kBelow25k, 1, 2.0) ==
        doctest::Approx(simple + 0.443 * -2));
  // Year-by-year price drop for the lowest bracket: + 0.443 * (t - 1) * 4 / 4.
  CHECK(compute_asc(DatasetKind::kPrice, true, false, IncomeBracket::kBelow25k, 3, 2.0) ==
        doctest::Approx(simple + 0.443 * -2 + 0.443 * 2));
  CHECK(compute_asc(DatasetKind::kPrice, true, false, IncomeBracket::kAbove100k, 4, 2.0) ==
        doctest::Approx(simple + 0.443 * 2));
}

TEST_CASE("Simple dataset on a 317-node network") {
  const Network net = generate_network({}, 1);
  REQUIRE(net.size() == 317);
  const Instance in = generate_instance(net, dataset_params(DatasetKind::kSimple), 1, 0);
  CHECK(in.num_classes() == 317);
  CHECK(in.horizon == 4);
  CHECK(in.num_stations() == 10);
  for (int i = 0; i < in.num_classes(); ++i) {
    const int R = in.classes[i].scenario_count;
    CHECK(R == 15 * static_cast<int>(in.choice(i, 0).width()));
    CHECK(R >= 15);
    CHECK(R <= 105);
    for (int t = 0; t < 4; ++t) {
      CHECK(in.classes[i].population[t] == doctest::Approx(net.nodes()[i].population * 0.1));
      for (int j : in.choice(i, t).stations) {
        CHECK(in.utility.beta(j, i, 1, t) == 0.281);
        CHECK(in.utility.beta(j, i, 2, t) == 0.281);
      }
    }
  }
  for (int t = 0; t < 4; ++t) {
    CHECK(in.costs.budget(t) == 400.0);
    for (int j = 0; j < 10; ++j) {
      CHECK(in.costs.cost(j, 1, t) == 150.0);
      CHECK(in.costs.cost(j, 2, t) == 50.0);
    }
  }
  CHECK(serialize_instance(in) ==
        serialize_instance(generate_instance(net, dataset_params(DatasetKind::kSimple), 1, 0)));
}

TEST_CASE("HomeCharging splits apartment residents 40/60") {
  Node apt = populated("n0", 0, 100.0);
  apt.housing_mix = {0.0, 0.0, 1.0};
  const Network net({apt, populated("n1", 1, 100.0)}, {{"n0", "n1", 1.0}});
  DatasetParams p = dataset_params(DatasetKind::kHomeCharging);
  p.num_stations = 1;
  p.horizon = 1;
  const Instance in = generate_instance(net, p, 3, 0);
  REQUIRE(in.num_classes() == 4);
  CHECK(in.classes[0].has_home_charging);
  CHECK(in.classes[0].population[0] == doctest::Approx(4.0));
  CHECK(in.classes[1].population[0] == doctest::Approx(6.0));
  CHECK(in.choice(0, 0).has_home(in.home_alt()));
  CHECK_FALSE(in.choice(1, 0).has_home(in.home_alt()));
  CHECK(in.classes[0].scenario_count == 15 * 3);
  CHECK(in.utility.beta(0, 0, 1, 0) == 0.211);
  CHECK(in.utility.beta(0, 1, 1, 0) == 0.351);
  CHECK(in.costs.cost(0, 6, 0) == 50.0);
}

TEST_CASE("LongSpan considers every station") {
  SyntheticNetworkConfig cfg;
  cfg.num_nodes = 40;
  const Network net = generate_network(cfg, 4);
  const Instance in = build_skeleton(net, dataset_params(DatasetKind::kLongSpan), 4);
  CHECK(in.horizon == 10);
  CHECK(in.num_stations() == 30);
  CHECK(in.stations[0].max_outlets == 6);
  for (const auto& c : in.classes) CHECK(c.scenario_count == 465);
}

TEST_CASE("Price drops classes below one person") {
  Node rich = populated("n0", 0, 50.0);
  rich.income_mix = std::array<double, 5>{0.1, 0.1, 0.2, 0.3, 0.3};
  const Network net({rich, populated("n1", 1, 100.0)}, {{"n0", "n1", 1.0}});
  DatasetParams p = dataset_params(DatasetKind::kPrice);
  p.num_stations = 2;
  p.horizon = 2;
  const Instance in = build_skeleton(net, p, 2);
  // n0: 5 residents, the two 0.5-person brackets vanish. n1: five classes of 2.
  CHECK(in.num_classes() == 3 + 5);
  for (const auto& c : in.classes) CHECK(c.population[0] >= 1.0);
  CHECK(in.classes[0].income == IncomeBracket::k50kTo75k);
}

TEST_CASE("generation fails without population") {
  const Network empty({populated("n0", 0, 0.0), populated("n1", 1, 0.0)}, {{"n0", "n1", 1.0}});
  DatasetParams p = dataset_params(DatasetKind::kSimple);
  p.num_stations = 1;
  CHECK_THROWS_AS(build_skeleton(empty, p, 1), ConfigError);
}

TEST_CASE("dataset generation is identical across thread counts") {
  SyntheticNetworkConfig cfg;
  cfg.num_nodes = 30;
  const Network net = generate_network(cfg, 6);
  DatasetParams p = dataset_params(DatasetKind::kSimple);
  p.num_stations = 4;
  p.horizon = 2;
  const auto one = generate_dataset(net, p, 4, 6, 1);
  const auto four = generate_dataset(net, p, 4, 6, 4);
  REQUIRE(one.size() == 4);
  for (int q = 0; q < 4; ++q) {
    CHECK(serialize_instance(one[q]) == serialize_instance(four[q]));
    CHECK(one[q].stations == one[0].stations);
    CHECK(one[q].classes == one[0].classes);
  }
  CHECK_FALSE(one[0].errors == one[1].errors);
}
