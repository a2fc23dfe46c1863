// Copyright 2026 The bilocal-sharing Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include "bilocal/brgp.hpp"
#include "doctest.h"
#include "random_states.hpp"

using namespace bilocal;
using bilocal::testing::make_rng;
using bilocal::testing::random_config;
using bilocal::testing::uniform;

namespace {

ScenarioConfig passive_config(const PointerSpec& a, const PointerSpec& c, double v1 = 1.0,
                              double v2 = 1.0) {
  ScenarioConfig cfg;
  cfg.v1 = v1;
  cfg.v2 = v2;
  cfg.alice1 = a;
  cfg.charlie1 = c;
  cfg.angles = ScenarioAngles::uniform(M_PI / 4);
  return cfg;
}

ScenarioConfig swap_wings(const ScenarioConfig& c) {
  ScenarioConfig s = c;
  std::swap(s.v1, s.v2);
  std::swap(s.alice1, s.charlie1);
  std::swap(s.angles.alice, s.angles.charlie);
  return s;
}

}  // namespace

TEST_CASE("correlator of trivial distributions") {
  TripartiteDistribution uniform_dist(1, 1);
  for (int idx = 0; idx < 64; ++idx) {
    uniform_dist.at(idx >> 5 & 1, idx >> 4 & 1, idx >> 3 & 1, idx >> 2 & 1, idx >> 1 & 1, idx & 1) = 1.0 / 16;
  }
  TripartiteDistribution fixed(1, 1);
  for (int x = 0; x < 2; ++x) {
    for (int z = 0; z < 2; ++z) fixed.at(x, z, 0, 0, 0, 0) = 1.0;
  }
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        CHECK(correlator(uniform_dist, i, j, k) == 0.0);
        CHECK(correlator(fixed, i, j, k) == 1.0);
      }
    }
  }
  const BrgpResult r = brgp_quantities(fixed);
  CHECK(r.I == 1.0);
  CHECK(r.J == 0.0);
  CHECK(r.B == 1.0);
  CHECK_FALSE(r.violated);
}

TEST_CASE("correlator picks the requested Bob bit") {
  TripartiteDistribution d(1, 2);
  for (int x = 0; x < 2; ++x) {
    for (int z = 0; z < 2; ++z) d.at(x, z, 0, 1, 0, 0) = 1.0;
  }
  CHECK(correlator(d, 0, 0, 0) == -1.0);
  CHECK(correlator(d, 0, 0, 1) == 1.0);
}

TEST_CASE("optimal pointers at G = 0.8 violate all four inequalities equally") {
  const BrgpSet set = evaluate_scenario(passive_config(PointerSpec::optimal(0.8), PointerSpec::optimal(0.8)));
  for (const BrgpResult& r : set.results) {
    CHECK(r.B == doctest::Approx(1.131370849898476).epsilon(1e-12));
    CHECK(r.violated);
  }
  CHECK(set.get(1, 1).I == doctest::Approx(0.32).epsilon(1e-12));
  CHECK(set.get(1, 1).J == doctest::Approx(-0.32).epsilon(1e-12));
  CHECK(set.B(2, 2) == doctest::Approx(1.6 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(set.get(1, 2).n == 1);
  CHECK(set.get(1, 2).m == 2);
}

TEST_CASE("square pointers at G = 2/3") {
  const double g = 2.0 / 3.0;
  const BrgpSet set = evaluate_scenario(passive_config(PointerSpec::square(g), PointerSpec::square(g)));
  CHECK(set.B(1, 1) == doctest::Approx(std::sqrt(2.0) * g).epsilon(1e-12));
  CHECK(set.B(1, 1) == doctest::Approx(0.9428).epsilon(1e-4));
  CHECK_FALSE(set.get(1, 1).violated);
}

TEST_CASE("sharp first observers leave only half a correlation for the second") {
  const BrgpSet set = evaluate_scenario(passive_config(PointerSpec::optimal(1.0), PointerSpec::optimal(1.0)));
  CHECK(set.B(1, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(set.B(2, 2) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  // B11 = sqrt(2) needs I = |J| = 1/2; each of the four correlators carries 1/2.
  const TripartiteDistribution d = marginal_tripartite(joint_table(passive_config(
                                                           PointerSpec::optimal(1.0), PointerSpec::optimal(1.0))),
                                                       1, 1);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(correlator(d, i, j, 0) == doctest::Approx(0.5).epsilon(1e-12));
      const double sign = (i + j) % 2 == 0 ? 1.0 : -1.0;
      CHECK(sign * correlator(d, i, j, 1) == doctest::Approx(-0.5).epsilon(1e-12));
    }
  }
}

TEST_CASE("blind first observers give B11 = 0") {
  auto rng = make_rng(30);
  for (int t = 0; t < 20; ++t) {
    ScenarioConfig c = random_config(rng);
    c.alice1 = PointerSpec::optimal(0.0);
    c.charlie1 = PointerSpec::square(0.0);
    CHECK(evaluate_scenario(c).B(1, 1) == 0.0);
  }
}

TEST_CASE("BRGP invariants over random configurations") {
  auto rng = make_rng(31);
  for (int t = 0; t < 100; ++t) {
    const BrgpSet set = evaluate_scenario(random_config(rng));
    for (const BrgpResult& r : set.results) {
      CHECK(std::abs(r.B - (std::sqrt(std::abs(r.I)) + std::sqrt(std::abs(r.J)))) < 1e-12);
      CHECK(std::abs(r.I) <= 1.0 + 1e-12);
      CHECK(std::abs(r.J) <= 1.0 + 1e-12);
      CHECK(r.B <= std::sqrt(2.0) + 1e-10);
      CHECK(r.violated == (r.B > 1.0));
    }
  }
}

TEST_CASE("exchanging the wings swaps B12 and B21") {
  auto rng = make_rng(32);
  for (int t = 0; t < 50; ++t) {
    const ScenarioConfig c = random_config(rng);
    const BrgpSet a = evaluate_scenario(c);
    const BrgpSet b = evaluate_scenario(swap_wings(c));
    CHECK(std::abs(a.B(1, 1) - b.B(1, 1)) < 1e-12);
    CHECK(std::abs(a.B(2, 2) - b.B(2, 2)) < 1e-12);
    CHECK(std::abs(a.B(1, 2) - b.B(2, 1)) < 1e-12);
    CHECK(std::abs(a.B(2, 1) - b.B(1, 2)) < 1e-12);
  }
}

TEST_CASE("closed forms at pi/4 for random precisions") {
  auto rng = make_rng(33);
  for (PointerModel model : {PointerModel::Optimal, PointerModel::Square}) {
    for (int t = 0; t < 50; ++t) {
      const PointerSpec a{model, uniform(rng), 0.0};
      const PointerSpec c{model, uniform(rng), 0.0};
      const double f1 = model == PointerModel::Optimal ? std::sqrt(1 - a.G * a.G) : 1 - a.G;
      const double f2 = model == PointerModel::Optimal ? std::sqrt(1 - c.G * c.G) : 1 - c.G;
      const BrgpSet set = evaluate_scenario(passive_config(a, c));
      CHECK(std::abs(set.B(1, 1) - std::sqrt(2 * a.G * c.G)) < 1e-10);
      CHECK(std::abs(set.B(1, 2) - std::sqrt((1 + f2) * a.G)) < 1e-10);
      CHECK(std::abs(set.B(2, 1) - std::sqrt((1 + f1) * c.G)) < 1e-10);
      CHECK(std::abs(set.B(2, 2) - std::sqrt((1 + f1) * (1 + f2) / 2)) < 1e-10);
    }
  }
}

TEST_CASE("Werner noise scales every B by sqrt(v1 v2)") {
  auto rng = make_rng(34);
  for (int t = 0; t < 30; ++t) {
    const PointerSpec a = testing::random_pointer(rng);
    const PointerSpec c = testing::random_pointer(rng);
    const double v1 = uniform(rng), v2 = uniform(rng);
    const BrgpSet clean = evaluate_scenario(passive_config(a, c));
    const BrgpSet noisy = evaluate_scenario(passive_config(a, c, v1, v2));
    for (int k = 0; k < 4; ++k) {
      CHECK(std::abs(noisy.results[k].B - clean.results[k].B * std::sqrt(v1 * v2)) < 1e-10);
    }
  }
}

TEST_CASE("result serialization") {
  const BrgpResult r{1, 2, 0.25, -0.09, 0.8, false};
  const nlohmann::json j = to_json(r);
  CHECK(j["n"] == 1);
  CHECK(j["m"] == 2);
  CHECK(j["I"].get<double>() == 0.25);
  CHECK(j["B"].get<double>() == 0.8);
  CHECK(j["violated"] == false);
}
