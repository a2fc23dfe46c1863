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

#include "bilocal/measurement.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace bilocal {

ComplexMatrix observable_matrix(const Observable& obs) {
  require_bit(obs.setting, "observable setting");
  const double parity = obs.setting == 0 ? 1.0 : -1.0;
  const double x_sign = obs.wing == Wing::Alice ? -parity : parity;
  return std::cos(obs.angle) * pauli_z() + x_sign * std::sin(obs.angle) * pauli_x();
}

ComplexMatrix projector(const Observable& obs, int outcome) {
  require_bit(outcome, "outcome");
  const double sign = outcome == 0 ? 1.0 : -1.0;
  return (identity(2) + sign * observable_matrix(obs)) / 2.0;
}

PointerFactors pointer_factors(const PointerSpec& spec) {
  const double g = spec.G;
  if (!(g >= 0.0 && g <= 1.0)) {
    throw std::invalid_argument("pointer precision G must lie in [0, 1]");
  }
  switch (spec.model) {
    case PointerModel::Optimal:
      return {std::sqrt(std::max(0.0, 1.0 - g * g)), g};
    case PointerModel::Square:
      return {1.0 - g, g};
    case PointerModel::Explicit:
      if (!(spec.F >= 0.0 && spec.F <= 1.0)) {
        throw std::invalid_argument("pointer quality F must lie in [0, 1]");
      }
      if (spec.F * spec.F + g * g > 1.0 + 1e-12) {
        throw std::invalid_argument("pointer factors violate F^2 + G^2 <= 1");
      }
      return {spec.F, g};
  }
  throw std::invalid_argument("unknown pointer model");
}

const char* to_string(PointerModel model) {
  switch (model) {
    case PointerModel::Optimal: return "optimal";
    case PointerModel::Square: return "square";
    case PointerModel::Explicit: return "explicit";
  }
  return "unknown";
}

PointerModel parse_pointer_model(const std::string& name) {
  if (name == "optimal") return PointerModel::Optimal;
  if (name == "square") return PointerModel::Square;
  if (name == "explicit") return PointerModel::Explicit;
  throw std::invalid_argument("unknown pointer model '" + name + "'");
}

ComplexMatrix embed(const ComplexMatrix& op, Wing wing, int num_qubits) {
  if (op.rows() != 2 || op.cols() != 2) {
    throw DimensionError("embed: expected a single-qubit operator");
  }
  if (num_qubits != 2 && num_qubits != 4) {
    throw DimensionError("embed: register must have 2 or 4 qubits");
  }
  const ComplexMatrix rest = identity(Eigen::Index{1} << (num_qubits - 1));
  return wing == Wing::Alice ? kron(op, rest) : kron(rest, op);
}

ComplexMatrix weak_instrument(const ComplexMatrix& rho, const ComplexMatrix& u_outcome,
                              const ComplexMatrix& u_other, const PointerFactors& factors) {
  const double f = factors.F;
  const double g = factors.G;
  // Projectors are Hermitian, so U rho U^dagger = U rho U.
  return f / 2.0 * rho + (1.0 + g - f) / 2.0 * (u_outcome * rho * u_outcome) +
         (1.0 - g - f) / 2.0 * (u_other * rho * u_other);
}

DensityOperator weak_instrument(const DensityOperator& rho, const Observable& obs,
                                int outcome, const PointerSpec& spec) {
  if (rho.dim() != 4) throw DimensionError("weak_instrument: expected a 2-qubit state");
  require_bit(outcome, "outcome");
  const PointerFactors factors = pointer_factors(spec);
  const ComplexMatrix u_outcome = embed(projector(obs, outcome), obs.wing, 2);
  const ComplexMatrix u_other = embed(projector(obs, 1 - outcome), obs.wing, 2);
  return DensityOperator(weak_instrument(rho.matrix(), u_outcome, u_other, factors));
}

ComplexMatrix strong_instrument(const ComplexMatrix& rho, const ComplexMatrix& u_outcome) {
  return u_outcome * rho * u_outcome;
}

DensityOperator strong_instrument(const DensityOperator& rho, const Observable& obs,
                                  int outcome) {
  if (rho.dim() != 4) throw DimensionError("strong_instrument: expected a 2-qubit state");
  return DensityOperator(
      strong_instrument(rho.matrix(), embed(projector(obs, outcome), obs.wing, 2)));
}

DensityOperator bsm_reduce(const DensityOperator& rho_abc, int b0, int b1) {
  if (rho_abc.dim() != 16) throw DimensionError("bsm_reduce: expected a 4-qubit state");
  const ComplexMatrix bob = kron(kron(identity(2), bell_state(b0, b1).matrix()), identity(2));
  const ComplexMatrix projected = bob * rho_abc.matrix() * bob.adjoint();
  static constexpr std::array<int, 4> kQubits{2, 2, 2, 2};
  static constexpr std::array<int, 2> kAliceCharlie{0, 3};
  return DensityOperator(partial_trace(projected, kQubits, kAliceCharlie));
}

}  // namespace bilocal
