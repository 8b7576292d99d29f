// Copyright 2026 The commnorm Authors
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

#include <gtest/gtest.h>

#include "commnorm/commnorm.hpp"
#include "eigen_oracle.hpp"

namespace commnorm {
namespace {

using testing::max_diff;

const CMat kSx{{0.0, 1.0}, {1.0, 0.0}};
const CMat kB{{0.0, kI}, {-kI, 0.0}};  // (0 i; -i 0)

double dist(const CMat& a, const CMat& b) { return frobenius_norm(a - b); }

TEST(Commutator, DiagonalMatricesCommute) {
  EXPECT_EQ(frobenius_norm(commutator(CMat::diag({1.0, 0.0}), CMat::diag({0.0, 1.0}))), 0.0);
}

TEST(Commutator, PauliPairByHand) {
  // sigma_x (0 i; -i 0) = diag(-i, i), the other order gives diag(i, -i).
  EXPECT_LT(dist(commutator(kSx, kB), CMat::diag({-2.0 * kI, 2.0 * kI})), 1e-15);
  EXPECT_LT(dist(commutator(kSx, pauli_y()), CMat::diag({2.0 * kI, -2.0 * kI})), 1e-15);
}

TEST(Commutator, SelfCommutatorVanishes) {
  SeededRng rng(3);
  for (int t = 0; t < 20; ++t) {
    const CMat a = ginibre(4, rng);
    EXPECT_LT(frobenius_norm(commutator(a, a)), 1e-14);
  }
}

TEST(Commutator, DimensionMismatchThrows) {
  EXPECT_THROW(commutator(CMat::identity(2), CMat::identity(3)), InputError);
}

TEST(Det, Anchors) {
  EXPECT_LT(std::abs(det(CMat::identity(3)) - 1.0), 1e-15);
  EXPECT_LT(std::abs(det(commutator(kSx, kB)) - 4.0), 1e-12);
  const CMat a{{1.0, 1.0}, {1.0, 0.0}};
  EXPECT_LT(std::abs(det(commutator(a, kB)) - 5.0), 1e-12);
}

TEST(Det, MatchesEigen) {
  SeededRng rng(11);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int t = 0; t < 10; ++t) {
      const CMat a = ginibre(n, rng);
      const cplx ref = testing::ref_det(a);
      EXPECT_LT(std::abs(det(a) - ref), 1e-10 * std::max(1.0, std::abs(ref))) << "n=" << n;
    }
  }
}

TEST(HermEigen, Diagonal) {
  const HermEigen e = herm_eigen(CMat::diag({3.0, -1.0}));
  EXPECT_NEAR(e.values[0], 3.0, 1e-15);
  EXPECT_NEAR(e.values[1], -1.0, 1e-15);
  EXPECT_LT(dist(e.vectors, CMat::identity(2)), 1e-15);
}

TEST(HermEigen, SigmaX) {
  const HermEigen e = herm_eigen(kSx);
  EXPECT_NEAR(e.values[0], 1.0, 1e-14);
  EXPECT_NEAR(e.values[1], -1.0, 1e-14);
}

TEST(HermEigen, MatchesEigenAndReconstructs) {
  SeededRng rng(5);
  for (std::size_t n = 1; n <= 7; ++n) {
    for (int t = 0; t < 10; ++t) {
      const CMat a = random_hermitian(n, rng);
      const HermEigen e = herm_eigen(a);
      EXPECT_LT(max_diff(e.values, testing::ref_eigenvalues(a)), 1e-12) << "n=" << n;
      EXPECT_LT(unitary_defect(e.vectors), 1e-12);
      std::vector<cplx> lam(e.values.begin(), e.values.end());
      const CMat back = e.vectors * CMat::diag(lam) * adjoint(e.vectors);
      EXPECT_LT(dist(back, a), 1e-12 * std::max(1.0, frobenius_norm(a)));
      for (std::size_t i = 1; i < n; ++i) EXPECT_GE(e.values[i - 1], e.values[i]);
    }
  }
}

TEST(HermEigen, RejectsNonHermitian) {
  EXPECT_THROW(herm_eigen(CMat{{0.0, 1.0}, {0.0, 0.0}}), InputError);
}

TEST(SingularValues, Anchors) {
  const auto d = singular_values(CMat::diag({3.0, -4.0}));
  EXPECT_NEAR(d[0], 4.0, 1e-15);
  EXPECT_NEAR(d[1], 3.0, 1e-15);
  const auto c = singular_values(commutator(kSx, kB));
  EXPECT_NEAR(c[0], 2.0, 1e-14);
  EXPECT_NEAR(c[1], 2.0, 1e-14);
}

TEST(SingularValues, UnitaryGivesOnes) {
  SeededRng rng(8);
  for (std::size_t n = 2; n <= 6; ++n) {
    for (double s : singular_values(haar_unitary(n, rng))) EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(SingularValues, MatchesEigen) {
  SeededRng rng(13);
  for (std::size_t n = 1; n <= 7; ++n) {
    for (int t = 0; t < 10; ++t) {
      const CMat a = ginibre(n, rng);
      EXPECT_LT(max_diff(singular_values(a), testing::ref_singular_values(a)), 1e-12) << "n=" << n;
    }
  }
}

TEST(SingularValues, RankDeficientCommutatorHasExactZeros) {
  // The commutator of two rank-one projections has rank 2; the remaining
  // singular values should sit at round-off, not at sqrt(eps).
  SeededRng rng(17);
  for (int t = 0; t < 20; ++t) {
    const CMat c = commutator(random_projection(5, rng).mat(), random_projection(5, rng).mat());
    const auto s = singular_values(c);
    for (std::size_t i = 2; i < s.size(); ++i) EXPECT_LT(s[i], 1e-14);
  }
}

TEST(RankOne, Examples) {
  const CVec e1 = basis_vector(2, 0);
  EXPECT_LT(dist(rank_one(e1, e1), CMat::diag({1.0, 0.0})), 1e-15);
  const CVec h{kInvSqrt2, kInvSqrt2};
  EXPECT_LT(dist(rank_one(h, h), CMat{{0.5, 0.5}, {0.5, 0.5}}), 1e-15);
}

TEST(RankOne, TraceIsInnerProduct) {
  SeededRng rng(19);
  for (int t = 0; t < 20; ++t) {
    const CVec u = random_unit_vector(4, rng);
    const CVec v = random_unit_vector(4, rng);
    EXPECT_LT(std::abs(trace(rank_one(u, v)) - inner(u, v)), 1e-14);
  }
}

TEST(EntrywiseConj, Examples) {
  EXPECT_EQ(dist(entrywise_conj(kSx), kSx), 0.0);
  EXPECT_LT(dist(entrywise_conj(kB), kB * -1.0), 1e-15);
}

TEST(EntrywiseConj, PreservesNormOfNormals) {
  SeededRng rng(23);
  for (int t = 0; t < 20; ++t) {
    const CMat u = haar_unitary(4, rng);
    std::vector<cplx> d;
    for (int i = 0; i < 4; ++i) d.push_back(rng.complex_normal());
    const CMat nrm = u * CMat::diag(d) * adjoint(u);
    for (const auto& spec : default_norm_grid()) {
      EXPECT_NEAR(ui_norm(entrywise_conj(nrm), spec), ui_norm(nrm, spec), 1e-12);
    }
  }
}

TEST(Basics, AdjointTraceProducts) {
  EXPECT_LT(dist(adjoint(kB), kB), 1e-15);
  EXPECT_EQ(trace(CMat::diag({1.0, 2.0, 3.0})), cplx(6.0));
  SeededRng rng(29);
  for (int t = 0; t < 20; ++t) {
    const CMat a = ginibre(3, rng), b = ginibre(3, rng);
    EXPECT_LT(dist(adjoint(a * b), adjoint(b) * adjoint(a)), 1e-13);
  }
}

TEST(Basics, SpectralDiameter) {
  EXPECT_NEAR(spectral_diameter(CMat::diag({0.6, 0.3, 0.1})), 0.5, 1e-15);
}

}  // namespace
}  // namespace commnorm
