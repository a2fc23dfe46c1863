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

#include "bilocal/brgp.hpp"

#include <cmath>

namespace bilocal {

double correlator(const TripartiteDistribution& dist, int i, int j, int k) {
  require_bit(i, "i");
  require_bit(j, "j");
  require_bit(k, "k");
  double sum = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b0 = 0; b0 < 2; ++b0) {
      for (int b1 = 0; b1 < 2; ++b1) {
        for (int c = 0; c < 2; ++c) {
          const int parity = a + (k == 0 ? b0 : b1) + c;
          sum += (parity % 2 == 0 ? 1.0 : -1.0) * dist(i, j, a, b0, b1, c);
        }
      }
    }
  }
  return sum;
}

BrgpResult brgp_quantities(const TripartiteDistribution& dist) {
  BrgpResult r;
  r.n = dist.alice_index();
  r.m = dist.charlie_index();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      r.I += correlator(dist, i, j, 0) / 4.0;
      r.J += ((i + j) % 2 == 0 ? 1.0 : -1.0) * correlator(dist, i, j, 1) / 4.0;
    }
  }
  r.B = std::sqrt(std::abs(r.I)) + std::sqrt(std::abs(r.J));
  r.violated = r.B > 1.0;
  return r;
}

BrgpSet brgp_all(const JointTable& table) {
  BrgpSet set;
  for (int n = 1; n <= 2; ++n) {
    for (int m = 1; m <= 2; ++m) {
      set.results[(n - 1) * 2 + (m - 1)] = brgp_quantities(marginal_tripartite(table, n, m));
    }
  }
  return set;
}

BrgpSet evaluate_scenario(const ScenarioConfig& config) { return brgp_all(joint_table(config)); }

nlohmann::json to_json(const BrgpResult& r) {
  return {{"n", r.n}, {"m", r.m}, {"I", r.I}, {"J", r.J}, {"B", r.B}, {"violated", r.violated}};
}

}  // namespace bilocal
