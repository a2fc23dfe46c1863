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

/// Bloch vector of a traceless observable in the z-x plane, as (z, x).
using PlaneVector = std::array<double, 2>;

PlaneVector observable_axis(Wing wing, int setting, double angle);

/// The two setting axes of one observer.
using ObserverAxes = std::array<PlaneVector, 2>;

ObserverAxes observer_axes(Wing wing, const ObserverAngles& angles);

/// Values of B for the four triples (index (n-1)*2 + (m-1)) plus I and J.
struct BrgpValues {
  std::array<double, 4> I{};
  std::array<double, 4> J{};
  std::array<double, 4> B{};

  double b(int n, int m) const { return B[(n - 1) * 2 + (m - 1)]; }
};

/// Bit mask selecting which triples to evaluate.
enum PairMask : unsigned {
  kPair11 = 1u,
  kPair12 = 2u,
  kPair21 = 4u,
  kPair22 = 8u,
  kAllPairs = 15u,
};

/**
 * Correlators in the Heisenberg picture.
 *
 * Bob's outcomes are folded into two fixed Alice-Charlie operators
 * M_k = sum_b (-1)^(b_k) rho_AC^b. The unsharp observer contributes G times
 * its observable; for the later observer the observable is pulled back
 * through the first observer's averaged non-selective channel
 * r -> F r + (1 - F) (r.n) n. Each correlator is then a bilinear form
 * a^T T_k c with T_k the z-x block of the correlation tensor of M_k.
 *
 * Independent of the joint-table pipeline; agrees with it to rounding.
 */
class CorrelatorModel {
 public:
  CorrelatorModel(double v1, double v2, const PointerFactors& alice1,
                  const PointerFactors& charlie1);
  explicit CorrelatorModel(const ScenarioConfig& config);

  BrgpValues evaluate(const ScenarioAngles& angles, unsigned mask = kAllPairs) const;
  BrgpValues evaluate(const ObserverAxes& alice1, const ObserverAxes& alice2,
                      const ObserverAxes& charlie1, const ObserverAxes& charlie2,
                      unsigned mask = kAllPairs) const;

  /// z-x correlation block of M_k, rows Alice (z, x), columns Charlie (z, x).
  const std::array<std::array<double, 2>, 2>& tensor(int k) const { return tensor_[k]; }

 private:
  std::array<std::array<std::array<double, 2>, 2>, 2> tensor_{};
  PointerFactors alice1_;
  PointerFactors charlie1_;
};

}  // namespace bilocal
