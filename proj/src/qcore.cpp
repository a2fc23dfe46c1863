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

#include "bilocal/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bilocal {

namespace {

bool is_supported_dim(Eigen::Index dim) {
  return dim == 2 || dim == 4 || dim == 16;
}

// Mixed-radix digits of `index`, most significant subsystem first.
void split_index(int index, std::span<const int> dims, std::vector<int>& digits) {
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    digits[k] = index % dims[k];
    index /= dims[k];
  }
}

}  // namespace

DensityOperator::DensityOperator(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw DimensionError("density operator must be square");
  }
  if (!is_supported_dim(matrix_.rows())) {
    throw DimensionError("density operator dimension must be 2, 4 or 16, got " +
                         std::to_string(matrix_.rows()));
  }
  if (!matrix_.allFinite()) {
    throw std::invalid_argument("density operator has non-finite entries");
  }
}

ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

ComplexMatrix outer(const Eigen::VectorXcd& psi) { return psi * psi.adjoint(); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    throw DimensionError("kron: operands must be square");
  }
  const Eigen::Index n = b.rows();
  ComplexMatrix out(a.rows() * n, a.cols() * n);
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * n, c * n, n, n) = a(r, c) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            std::span<const int> subsystem_dims,
                            std::span<const int> keep) {
  if (rho.rows() != rho.cols()) {
    throw DimensionError("partial_trace: operator must be square");
  }
  if (subsystem_dims.empty() || keep.empty()) {
    throw DimensionError("partial_trace: need at least one subsystem to keep");
  }
  int total = 1;
  for (int d : subsystem_dims) {
    if (d < 1) throw DimensionError("partial_trace: subsystem dimension < 1");
    total *= d;
  }
  if (total != rho.rows()) {
    throw DimensionError("partial_trace: subsystem dims multiply to " +
                         std::to_string(total) + " but operator has dimension " +
                         std::to_string(rho.rows()));
  }
  const int count = static_cast<int>(subsystem_dims.size());
  std::vector<bool> kept(count, false);
  for (int k : keep) {
    if (k < 0 || k >= count) throw DimensionError("partial_trace: keep index out of range");
    if (kept[k]) throw DimensionError("partial_trace: duplicate keep index");
    kept[k] = true;
  }

  int kept_dim = 1;
  for (int k = 0; k < count; ++k) {
    if (kept[k]) kept_dim *= subsystem_dims[k];
  }

  ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
  std::vector<int> row_digits(count), col_digits(count);
  for (int r = 0; r < total; ++r) {
    split_index(r, subsystem_dims, row_digits);
    for (int c = 0; c < total; ++c) {
      split_index(c, subsystem_dims, col_digits);
      bool traced_match = true;
      int kr = 0, kc = 0;
      for (int k = 0; k < count; ++k) {
        if (kept[k]) {
          kr = kr * subsystem_dims[k] + row_digits[k];
          kc = kc * subsystem_dims[k] + col_digits[k];
        } else if (row_digits[k] != col_digits[k]) {
          traced_match = false;
          break;
        }
      }
      if (traced_match) out(kr, kc) += rho(r, c);
    }
  }
  return out;
}

DensityOperator partial_trace(const DensityOperator& rho,
                              std::span<const int> subsystem_dims,
                              std::span<const int> keep) {
  return DensityOperator(partial_trace(rho.matrix(), subsystem_dims, keep));
}

DensityOperator bell_state(int b0, int b1) {
  require_bit(b0, "b0");
  require_bit(b1, "b1");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  const double sign = b1 == 0 ? 1.0 : -1.0;
  if (b0 == 0) {
    psi(0) = 1.0;
    psi(3) = sign;
  } else {
    psi(1) = 1.0;
    psi(2) = sign;
  }
  psi /= std::sqrt(2.0);
  return DensityOperator(outer(psi));
}

DensityOperator werner_state(double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument("werner_state: visibility must lie in [0, 1]");
  }
  return DensityOperator(v * bell_state(0, 0).matrix() + (1.0 - v) / 4.0 * identity(4));
}

DensityReport validate_density(const ComplexMatrix& rho, double tol) {
  DensityReport report;
  if (rho.rows() != rho.cols() || rho.size() == 0 || !rho.allFinite()) {
    return report;
  }
  const ComplexMatrix herm_part = (rho + rho.adjoint()) / 2.0;
  report.hermiticity_deviation = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm_part, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = solver.eigenvalues().minCoeff();
  const Complex tr = rho.trace();
  report.trace_real = tr.real();
  report.trace_imag = tr.imag();

  report.hermitian = report.hermiticity_deviation <= tol;
  report.positive = report.min_eigenvalue >= -tol;
  report.trace_in_range = std::abs(tr.imag()) <= tol && tr.real() >= -tol &&
                          tr.real() <= 1.0 + tol;
  return report;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shape mismatch");
  }
  return (a - b).cwiseAbs().maxCoeff();
}

void require_bit(int bit, const char* what) {
  if (bit != 0 && bit != 1) {
    throw std::invalid_argument(std::string(what) + " must be 0 or 1");
  }
}

}  // namespace bilocal
