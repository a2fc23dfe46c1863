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

#include <array>
#include <vector>

#include "doctest.h"
#include "random_states.hpp"

using namespace bilocal;
using bilocal::testing::make_rng;
using bilocal::testing::random_density;
using bilocal::testing::random_hermitian;

namespace {

// Element-by-element partial trace over 16x16 with four qubits, keeping qubits {q0, q1}.
ComplexMatrix brute_trace_keep(const ComplexMatrix& rho, int q0, int q1) {
  ComplexMatrix out = ComplexMatrix::Zero(4, 4);
  auto bit = [](int idx, int q) { return (idx >> (3 - q)) & 1; };
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) {
      bool same_traced = true;
      for (int q = 0; q < 4; ++q) {
        if (q != q0 && q != q1 && bit(r, q) != bit(c, q)) same_traced = false;
      }
      if (!same_traced) continue;
      out(bit(r, q0) * 2 + bit(r, q1), bit(c, q0) * 2 + bit(c, q1)) += rho(r, c);
    }
  }
  return out;
}

Eigen::VectorXcd basis(int dim, int k) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(k) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("kron identity and diagonal products") {
  CHECK(max_abs_diff(kron(identity(2), identity(2)), identity(4)) == 0.0);
  ComplexMatrix zz = ComplexMatrix::Zero(4, 4);
  zz.diagonal() << 1.0, -1.0, -1.0, 1.0;
  CHECK(max_abs_diff(kron(pauli_z(), pauli_z()), zz) == 0.0);

  const ComplexMatrix block = kron(outer(basis(2, 0)), pauli_x());
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.block(0, 0, 2, 2) = pauli_x();
  CHECK(max_abs_diff(block, expected) == 0.0);
}

TEST_CASE("kron is associative") {
  auto rng = make_rng(1);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix a = testing::random_matrix(rng, 2);
    const ComplexMatrix b = testing::random_matrix(rng, 2);
    const ComplexMatrix c = testing::random_matrix(rng, 4);
    CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-12);
  }
}

TEST_CASE("partial trace of a Bell state is maximally mixed") {
  const std::array<int, 2> dims{2, 2};
  const std::array<int, 1> keep0{0};
  const std::array<int, 1> keep1{1};
  const ComplexMatrix phi = bell_state(0, 0).matrix();
  CHECK(max_abs_diff(partial_trace(phi, dims, keep0), identity(2) / 2.0) < 1e-15);
  CHECK(max_abs_diff(partial_trace(phi, dims, keep1), identity(2) / 2.0) < 1e-15);
}

TEST_CASE("partial trace of a product keeps the first factor") {
  auto rng = make_rng(2);
  const std::array<int, 2> dims{2, 2};
  const std::array<int, 1> keep{0};
  for (int t = 0; t < 50; ++t) {
    const ComplexMatrix rho = random_hermitian(rng, 2);
    const ComplexMatrix sigma = random_hermitian(rng, 2);
    const ComplexMatrix got = partial_trace(kron(rho, sigma), dims, keep);
    CHECK(max_abs_diff(got, rho * sigma.trace()) < 1e-12);
  }
}

TEST_CASE("partial trace preserves the trace for every keep set") {
  auto rng = make_rng(3);
  const std::array<int, 4> dims{2, 2, 2, 2};
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix rho = random_density(rng, 16);
    for (int mask = 1; mask < 16; ++mask) {
      std::vector<int> keep;
      for (int q = 0; q < 4; ++q) {
        if (mask & (1 << (3 - q))) keep.push_back(q);
      }
      const ComplexMatrix reduced = partial_trace(rho, dims, keep);
      CHECK(std::abs(reduced.trace() - rho.trace()) < 1e-12);
    }
  }
}

TEST_CASE("partial trace on four qubits matches the elementwise sum") {
  auto rng = make_rng(4);
  const std::array<int, 4> dims{2, 2, 2, 2};
  const std::array<std::array<int, 2>, 3> keeps{{{0, 3}, {1, 2}, {0, 1}}};
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix rho = random_density(rng, 16);
    for (const auto& keep : keeps) {
      CHECK(max_abs_diff(partial_trace(rho, dims, keep), brute_trace_keep(rho, keep[0], keep[1])) <
            1e-14);
    }
  }
}

TEST_CASE("entanglement swapping through the middle qubits") {
  // (phi+ x phi+) projected by phi+ on the middle pair, traced to the outer pair.
  const ComplexMatrix phi = bell_state(0, 0).matrix();
  const ComplexMatrix rho = kron(phi, phi);
  ComplexMatrix proj = ComplexMatrix::Zero(16, 16);
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) {
      const int ro = ((r >> 3) & 1) * 2 + (r & 1), co = ((c >> 3) & 1) * 2 + (c & 1);
      const int rm = (r >> 1) & 3, cm = (c >> 1) & 3;
      if (ro == co) proj(r, c) = phi(rm, cm);
    }
  }
  const ComplexMatrix projected = proj * rho * proj.adjoint();
  const std::array<int, 4> dims{2, 2, 2, 2};
  const std::array<int, 2> keep{0, 3};
  const ComplexMatrix got = partial_trace(projected, dims, keep);
  CHECK(max_abs_diff(got, brute_trace_keep(projected, 0, 3)) < 1e-15);
  CHECK(max_abs_diff(got, phi / 4.0) < 1e-15);
}

TEST_CASE("Bell states") {
  ComplexMatrix phi_plus = ComplexMatrix::Zero(4, 4);
  phi_plus(0, 0) = phi_plus(0, 3) = phi_plus(3, 0) = phi_plus(3, 3) = 0.5;
  CHECK(max_abs_diff(bell_state(0, 0).matrix(), phi_plus) < 1e-15);

  Eigen::VectorXcd psi_minus = (basis(4, 1) - basis(4, 2)) / std::sqrt(2.0);
  CHECK(max_abs_diff(bell_state(1, 1).matrix(), outer(psi_minus)) < 1e-15);

  ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
  for (int b0 = 0; b0 < 2; ++b0) {
    for (int b1 = 0; b1 < 2; ++b1) {
      const ComplexMatrix p = bell_state(b0, b1).matrix();
      sum += p;
      CHECK(max_abs_diff(p * p, p) < 1e-12);
      for (int c0 = 0; c0 < 2; ++c0) {
        for (int c1 = 0; c1 < 2; ++c1) {
          if (c0 == b0 && c1 == b1) continue;
          CHECK(max_abs_diff(p * bell_state(c0, c1).matrix(), ComplexMatrix::Zero(4, 4)) < 1e-12);
        }
      }
    }
  }
  CHECK(max_abs_diff(sum, identity(4)) < 1e-12);
  CHECK_THROWS_AS(bell_state(2, 0), std::invalid_argument);
}

TEST_CASE("Werner states") {
  CHECK(max_abs_diff(werner_state(1.0).matrix(), bell_state(0, 0).matrix()) < 1e-15);
  CHECK(max_abs_diff(werner_state(0.0).matrix(), identity(4) / 4.0) < 1e-15);

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(werner_state(0.5).matrix());
  const Eigen::VectorXd ev = solver.eigenvalues();
  CHECK(ev(0) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(ev(1) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(ev(2) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(ev(3) == doctest::Approx(0.625).epsilon(1e-12));

  CHECK_THROWS(werner_state(1.5));
  CHECK_THROWS(werner_state(-0.1));
}

TEST_CASE("density validation") {
  CHECK(validate_density(identity(2) / 2.0, 1e-12).valid());

  const DensityReport x = validate_density(pauli_x(), 1e-12);
  CHECK_FALSE(x.valid());
  CHECK_FALSE(x.positive);
  CHECK(x.min_eigenvalue == doctest::Approx(-1.0));

  ComplexMatrix skew = identity(2) / 2.0;
  skew(0, 1) = 0.1;
  CHECK_FALSE(validate_density(skew).hermitian);

  CHECK_FALSE(validate_density(identity(2)).trace_in_range);
}

TEST_CASE("DensityOperator rejects bad shapes") {
  CHECK_THROWS_AS(DensityOperator(ComplexMatrix::Zero(2, 3)), DimensionError);
  CHECK_THROWS_AS(DensityOperator(ComplexMatrix::Zero(3, 3)), DimensionError);
  ComplexMatrix nan = identity(2);
  nan(0, 0) = std::nan("");
  CHECK_THROWS(DensityOperator(nan));
  CHECK(DensityOperator(identity(16) / 16.0).dim() == 16);
}
