// Copyright 2026 The qutrit-qae Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qutrit/tensor.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qutrit/gates.hpp"

using namespace qutrit;

TEST(tensor, identity_times_matrix) {
  std::mt19937_64 rng(1);
  const ComplexMatrix m = oracle::random_matrix(3, rng);
  EXPECT_EQ(ComplexMatrix::identity(3) * m, m);
}

TEST(tensor, lambda1_squared) {
  const auto& l1 = GeneratorSet::standard().lambda(1);
  EXPECT_EQ(l1 * l1, (ComplexMatrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 0}}));
}

TEST(tensor, lambda3_times_lambda8) {
  const auto& g = GeneratorSet::standard();
  const double s = 1.0 / std::sqrt(3.0);
  EXPECT_LT(max_abs_diff(g.lambda(3) * g.lambda(8), ComplexMatrix{{s, 0, 0}, {0, -s, 0}, {0, 0, 0}}), 1e-15);
}

TEST(tensor, matmul_shape_mismatch_throws) {
  EXPECT_THROW(matmul(ComplexMatrix(3, 2), ComplexMatrix(3, 3)), InvalidArgument);
}

TEST(tensor, adjoint_of_product) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const auto a = oracle::random_matrix(3, rng), b = oracle::random_matrix(3, rng);
    EXPECT_LT(max_abs_diff((a * b).adjoint(), b.adjoint() * a.adjoint()), 1e-14);
  }
}

TEST(tensor, kron_most_significant_first) {
  const ComplexMatrix x{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}};
  const ComplexMatrix k = kron(x, ComplexMatrix::identity(3));
  // x on the leading digit maps |0,j> -> |2,j>
  EXPECT_EQ(k(6 + 1, 0 + 1), Complex(1.0));
}

TEST(qr, identity) {
  const auto qr = qr_decompose(ComplexMatrix::identity(3));
  EXPECT_EQ(qr.q, ComplexMatrix::identity(3));
  EXPECT_EQ(qr.r, ComplexMatrix::identity(3));
  EXPECT_FALSE(qr.used_fallback());
}

TEST(qr, first_column_is_normalized_input) {
  const ComplexVector psi{{0.69, 0}, {-0.10, -0.66}, {-0.25, 0.14}};
  const ComplexVector e2 = ComplexVector::basis(3, 1), e3 = ComplexVector::basis(3, 2);
  const std::array<ComplexVector, 3> cols{psi, e2, e3};
  const auto qr = qr_decompose(ComplexMatrix::from_columns(cols));
  const ComplexVector q0 = qr.q.column(0);
  EXPECT_NEAR(std::abs(inner(q0, psi)), psi.norm(), 1e-12);
}

TEST(qr, random_unitary_gives_unit_modulus_diagonal_r) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    const auto u = oracle::random_unitary(3, rng);
    const auto qr = qr_decompose(u);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_NEAR(std::abs(qr.r(i, i)), 1.0, 1e-12);
      for (std::size_t j = 0; j < 3; ++j)
        if (i != j) EXPECT_LT(std::abs(qr.r(i, j)), 1e-12);
    }
  }
}

TEST(qr, factorization_properties) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::mt19937_64 rng(seed);
    const auto a = oracle::random_matrix(3, rng);
    const auto qr = qr_decompose(a);
    EXPECT_LT(max_abs_diff(qr.q * qr.r, a), 1e-12);
    EXPECT_LT(max_abs_diff(qr.q.adjoint() * qr.q, ComplexMatrix::identity(3)), 1e-12);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_GE(qr.r(i, i).real(), 0.0);
      EXPECT_EQ(qr.r(i, i).imag(), 0.0);
      for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(qr.r(i, j), Complex(0.0));
    }
  }
}

TEST(qr, rank_deficient_input_is_completed_and_flagged) {
  const ComplexMatrix a{{1, 2, 0}, {1, 2, 0}, {0, 0, 1}};
  const auto qr = qr_decompose(a);
  ASSERT_TRUE(qr.used_fallback());
  EXPECT_EQ(qr.fallback_columns, std::vector<std::size_t>{1});
  EXPECT_TRUE(is_unitary(qr.q, 1e-12));
  EXPECT_LT(max_abs_diff(qr.q * qr.r, a), 1e-12);
}

TEST(qr, non_square_rejected) { EXPECT_THROW(qr_decompose(ComplexMatrix(3, 2)), InvalidArgument); }

TEST(gram_schmidt, canonical_basis) {
  const auto e = gram_schmidt(ComplexVector::basis(3, 0), ComplexVector::basis(3, 1), ComplexVector::basis(3, 2));
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(e[k], ComplexVector::basis(3, k));
}

TEST(gram_schmidt, hand_example) {
  const double s = 1.0 / std::sqrt(2.0);
  const auto e = gram_schmidt(ComplexVector{1, 1, 0}, ComplexVector{1, 0, 0}, ComplexVector{0, 0, 1});
  EXPECT_LT(max_abs_diff(e[0], ComplexVector{s, s, 0}), 1e-15);
  EXPECT_LT(max_abs_diff(e[1], ComplexVector{s, -s, 0}), 1e-15);
  EXPECT_LT(max_abs_diff(e[2], ComplexVector{0, 0, 1}), 1e-15);
}

TEST(gram_schmidt, random_inputs_orthonormal_and_same_span) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto m = oracle::random_matrix(3, rng);
    const auto e = gram_schmidt(m.column(0), m.column(1), m.column(2));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(std::abs(inner(e[i] , e[j]) - Complex(i == j ? 1.0 : 0.0)), 0.0, 1e-12);
    // u_k lies in span(e_1..e_k)
    for (std::size_t k = 0; k < 3; ++k) {
      ComplexVector r = m.column(k);
      for (std::size_t i = 0; i <= k; ++i) r = r - inner(e[i], r) * e[i];
      EXPECT_LT(r.norm(), 1e-10);
    }
  }
}

TEST(gram_schmidt, dependent_input_throws) {
  EXPECT_THROW(gram_schmidt(ComplexVector{1, 0, 0}, ComplexVector{2, 0, 0}, ComplexVector{0, 0, 1}), InvalidArgument);
}

TEST(is_unitary, chrestenson_and_scaled_identity) {
  EXPECT_TRUE(is_unitary(chrestenson().matrix, 1e-12));
  EXPECT_FALSE(is_unitary(Complex(2.0) * ComplexMatrix::identity(3), 1e-12));
  EXPECT_FALSE(is_unitary(ComplexMatrix(3, 2), 1e-12));
}

TEST(is_unitary, whole_catalog) {
  for (double angle : {0.0, 0.3, kPi / 4, 2.0, -5.0}) {
    for (const auto& g : gate_catalog(angle)) {
      if (g.is_generator) continue;
      EXPECT_TRUE(is_unitary(g.matrix, 1e-12)) << g.name;
      EXPECT_TRUE(g.matrix.all_finite()) << g.name;
    }
  }
}
