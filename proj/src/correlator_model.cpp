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

#include "bilocal/correlator_model.hpp"

#include <cmath>

namespace bilocal {

namespace {

// r -> F r + (1 - F)/2 sum_s (r.n_s) n_s
PlaneVector pull_back(const PlaneVector& r, const ObserverAxes& first, double quality) {
  PlaneVector out{quality * r[0], quality * r[1]};
  for (const PlaneVector& n : first) {
    const double overlap = (r[0] * n[0] + r[1] * n[1]) * (1.0 - quality) / 2.0;
    out[0] += overlap * n[0];
    out[1] += overlap * n[1];
  }
  return out;
}

double bilinear(const PlaneVector& a, const std::array<std::array<double, 2>, 2>& t,
                const PlaneVector& c) {
  return a[0] * (t[0][0] * c[0] + t[0][1] * c[1]) + a[1] * (t[1][0] * c[0] + t[1][1] * c[1]);
}

}  // namespace

PlaneVector observable_axis(Wing wing, int setting, double angle) {
  const double parity = setting == 0 ? 1.0 : -1.0;
  const double x_sign = wing == Wing::Alice ? -parity : parity;
  return {std::cos(angle), x_sign * std::sin(angle)};
}

ObserverAxes observer_axes(Wing wing, const ObserverAngles& angles) {
  return {observable_axis(wing, 0, angles.setting0), observable_axis(wing, 1, angles.setting1)};
}

CorrelatorModel::CorrelatorModel(double v1, double v2, const PointerFactors& alice1,
                                 const PointerFactors& charlie1)
    : alice1_(alice1), charlie1_(charlie1) {
  const DensityOperator initial(kron(werner_state(v1).matrix(), werner_state(v2).matrix()));
  std::array<ComplexMatrix, 2> bob_weighted{ComplexMatrix::Zero(4, 4),
                                            ComplexMatrix::Zero(4, 4)};
  for (int b0 = 0; b0 < 2; ++b0) {
    for (int b1 = 0; b1 < 2; ++b1) {
      const ComplexMatrix reduced = bsm_reduce(initial, b0, b1).matrix();
      bob_weighted[0] += (b0 == 0 ? 1.0 : -1.0) * reduced;
      bob_weighted[1] += (b1 == 0 ? 1.0 : -1.0) * reduced;
    }
  }
  const std::array<ComplexMatrix, 2> paulis{pauli_z(), pauli_x()};
  for (int k = 0; k < 2; ++k) {
    for (int mu = 0; mu < 2; ++mu) {
      for (int nu = 0; nu < 2; ++nu) {
        tensor_[k][mu][nu] = (kron(paulis[mu], paulis[nu]) * bob_weighted[k]).trace().real();
      }
    }
  }
}

CorrelatorModel::CorrelatorModel(const ScenarioConfig& config)
    : CorrelatorModel(config.v1, config.v2, pointer_factors(config.alice1),
                      pointer_factors(config.charlie1)) {}

BrgpValues CorrelatorModel::evaluate(const ScenarioAngles& angles, unsigned mask) const {
  return evaluate(observer_axes(Wing::Alice, angles.alice[0]),
                  observer_axes(Wing::Alice, angles.alice[1]),
                  observer_axes(Wing::Charlie, angles.charlie[0]),
                  observer_axes(Wing::Charlie, angles.charlie[1]), mask);
}

BrgpValues CorrelatorModel::evaluate(const ObserverAxes& alice1, const ObserverAxes& alice2,
                                     const ObserverAxes& charlie1,
                                     const ObserverAxes& charlie2, unsigned mask) const {
  // Effective observables per (observer index, setting).
  std::array<ObserverAxes, 2> alice_eff;
  std::array<ObserverAxes, 2> charlie_eff;
  for (int s = 0; s < 2; ++s) {
    alice_eff[0][s] = {alice1_.G * alice1[s][0], alice1_.G * alice1[s][1]};
    charlie_eff[0][s] = {charlie1_.G * charlie1[s][0], charlie1_.G * charlie1[s][1]};
  }
  if (mask & (kPair21 | kPair22)) {
    for (int s = 0; s < 2; ++s) alice_eff[1][s] = pull_back(alice2[s], alice1, alice1_.F);
  }
  if (mask & (kPair12 | kPair22)) {
    for (int s = 0; s < 2; ++s) charlie_eff[1][s] = pull_back(charlie2[s], charlie1, charlie1_.F);
  }

  BrgpValues out;
  for (int n = 0; n < 2; ++n) {
    for (int m = 0; m < 2; ++m) {
      const int pair = n * 2 + m;
      if (!(mask & (1u << pair))) continue;
      double i_sum = 0.0;
      double j_sum = 0.0;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          i_sum += bilinear(alice_eff[n][i], tensor_[0], charlie_eff[m][j]);
          const double sign = (i + j) % 2 == 0 ? 1.0 : -1.0;
          j_sum += sign * bilinear(alice_eff[n][i], tensor_[1], charlie_eff[m][j]);
        }
      }
      out.I[pair] = i_sum / 4.0;
      out.J[pair] = j_sum / 4.0;
      out.B[pair] = std::sqrt(std::abs(out.I[pair])) + std::sqrt(std::abs(out.J[pair]));
    }
  }
  return out;
}

}  // namespace bilocal
