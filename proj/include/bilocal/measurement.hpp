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

#include <string>

#include "bilocal/qcore.hpp"

namespace bilocal {

enum class Wing { Alice, Charlie };

/// One of a wing's two dichotomic observables, parameterized by an angle in
/// the z-x plane. Alice uses cos t Z - (-1)^i sin t X, Charlie
/// cos t Z + (-1)^j sin t X.
struct Observable {
  Wing wing = Wing::Alice;
  int setting = 0;
  double angle = 0.0;
};

ComplexMatrix observable_matrix(const Observable& obs);

/// (I + (-1)^outcome O) / 2, so outcome 0 selects eigenvalue +1.
ComplexMatrix projector(const Observable& obs, int outcome);

enum class PointerModel { Optimal, Square, Explicit };

/**
 * Pointer of an unsharp measurement. G is the precision (information gain)
 * and F the quality (undisturbed fraction). Optimal pointers have
 * F = sqrt(1 - G^2), square pointers F = 1 - G; Explicit uses the stored F.
 */
struct PointerSpec {
  PointerModel model = PointerModel::Optimal;
  double G = 1.0;
  double F = 0.0;  // read only for PointerModel::Explicit

  static PointerSpec optimal(double g) { return {PointerModel::Optimal, g, 0.0}; }
  static PointerSpec square(double g) { return {PointerModel::Square, g, 0.0}; }
  static PointerSpec explicit_factors(double f, double g) {
    return {PointerModel::Explicit, g, f};
  }
};

struct PointerFactors {
  double F = 0.0;
  double G = 1.0;
};

/// Throws std::invalid_argument unless G, F are in [0, 1] and
/// F^2 + G^2 <= 1 + 1e-12.
PointerFactors pointer_factors(const PointerSpec& spec);

const char* to_string(PointerModel model);
PointerModel parse_pointer_model(const std::string& name);

/// Lift a single-qubit operator onto the wing's qubit of a 2- or 4-qubit
/// register (Alice is qubit 0, Charlie the last qubit).
ComplexMatrix embed(const ComplexMatrix& op, Wing wing, int num_qubits);

/**
 * Unnormalized post-measurement state of an unsharp measurement,
 *   F/2 rho + (1 + G - F)/2 U_a rho U_a + (1 - G - F)/2 U_~a rho U_~a,
 * where U_a is the outcome's projector on the measured qubit. The last
 * coefficient is negative for the optimal pointer; the sum is still a valid
 * instrument whenever F^2 + G^2 <= 1.
 */
ComplexMatrix weak_instrument(const ComplexMatrix& rho, const ComplexMatrix& u_outcome,
                              const ComplexMatrix& u_other, const PointerFactors& factors);

DensityOperator weak_instrument(const DensityOperator& rho, const Observable& obs,
                                int outcome, const PointerSpec& spec);

/// U_a rho U_a.
ComplexMatrix strong_instrument(const ComplexMatrix& rho, const ComplexMatrix& u_outcome);

DensityOperator strong_instrument(const DensityOperator& rho, const Observable& obs,
                                  int outcome);

/**
 * Bob's Bell-state measurement on qubits 1-2 of a 4-qubit state (order
 * A, B1, B2, C) followed by the partial trace over Bob. The result lives on
 * Alice-Charlie and carries the outcome probability as its trace.
 */
DensityOperator bsm_reduce(const DensityOperator& rho_abc, int b0, int b1);

}  // namespace bilocal
