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

#pragma once

#include <array>

#include "bilocal/network.hpp"

namespace bilocal {

/// BRGP quantities of one Alice_n - Bob - Charlie_m triple. I and J keep
/// their signs; B = sqrt|I| + sqrt|J|.
struct BrgpResult {
  int n = 1;
  int m = 1;
  double I = 0.0;
  double J = 0.0;
  double B = 0.0;
  bool violated = false;  // B > 1
};

/// <X Y_k Z> for setting context (i, j): expectation of (-1)^(a + b_k + c).
double correlator(const TripartiteDistribution& dist, int i, int j, int k);

BrgpResult brgp_quantities(const TripartiteDistribution& dist);

/// B values of the four triples in the order 11, 12, 21, 22.
struct BrgpSet {
  std::array<BrgpResult, 4> results;

  const BrgpResult& get(int n, int m) const { return results[(n - 1) * 2 + (m - 1)]; }
  double B(int n, int m) const { return get(n, m).B; }
};

BrgpSet brgp_all(const JointTable& table);
BrgpSet evaluate_scenario(const ScenarioConfig& config);

nlohmann::json to_json(const BrgpResult& result);

}  // namespace bilocal
