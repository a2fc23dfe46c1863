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

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace bilocal {

using Complex = std::complex<double>;

/// Dense complex matrix. Every use in this library is square with dimension
/// 2, 4 or 16.
using ComplexMatrix = Eigen::MatrixXcd;

/// Default Hermiticity / positivity tolerance.
inline constexpr double kDefaultTolerance = 1e-9;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * A possibly unnormalized density operator on 1, 2 or 4 qubits.
 *
 * Construction checks shape and finiteness only. Positivity is a property
 * of how the operator was produced and is checked by validate_density().
 */
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix matrix);

  const ComplexMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  Complex trace() const { return matrix_.trace(); }

 private:
  ComplexMatrix matrix_;
};

ComplexMatrix identity(Eigen::Index dim);
ComplexMatrix pauli_x();
ComplexMatrix pauli_z();

/// Outer product |psi><psi|.
ComplexMatrix outer(const Eigen::VectorXcd& psi);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/**
 * Trace out every subsystem not listed in `keep`.
 *
 * `subsystem_dims` lists the factor dimensions with subsystem 0 the most
 * significant (leftmost) factor of the Kronecker product. The kept
 * subsystems appear in the result in increasing index order.
 */
ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            std::span<const int> subsystem_dims,
                            std::span<const int> keep);
DensityOperator partial_trace(const DensityOperator& rho,
                              std::span<const int> subsystem_dims,
                              std::span<const int> keep);

/// Bell projector: 00 -> phi+, 01 -> phi-, 10 -> psi+, 11 -> psi-.
DensityOperator bell_state(int b0, int b1);

/// v |phi+><phi+| + (1 - v) I/4.
DensityOperator werner_state(double v);

struct DensityReport {
  double hermiticity_deviation = 0.0;  // max |A - A^dagger| entry
  double min_eigenvalue = 0.0;         // of the Hermitian part
  double trace_real = 0.0;
  double trace_imag = 0.0;
  bool hermitian = false;
  bool positive = false;
  bool trace_in_range = false;

  bool valid() const { return hermitian && positive && trace_in_range; }
};

DensityReport validate_density(const ComplexMatrix& rho,
                               double tol = kDefaultTolerance);
inline DensityReport validate_density(const DensityOperator& rho,
                                      double tol = kDefaultTolerance) {
  return validate_density(rho.matrix(), tol);
}

/// Largest absolute entrywise difference.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

void require_bit(int bit, const char* what);

}  // namespace bilocal
