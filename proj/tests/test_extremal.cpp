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

#include <cmath>
#include <numbers>

#include "commnorm/commnorm.hpp"

namespace commnorm {
namespace {

TEST(DiamSpectrum, Examples) {
  SeededRng rng(1);
  EXPECT_NEAR(diam_spectrum(random_projection(2, rng).mat()), 1.0, 1e-12);
  EXPECT_NEAR(diam_spectrum(CMat::identity(3) * 0.7), 0.0, 1e-15);
  EXPECT_NEAR(diam_spectrum(CMat::diag({0.6, 0.3, 0.1})), 0.5, 1e-15);
  EXPECT_THROW(diam_spectrum(CMat{{0.0, 1.0}, {0.0, 0.0}}), InputError);
}

TEST(ThetaClosed, Examples) {
  EXPECT_NEAR(theta_closed(CMat::identity(2), NormSpec::op()), 0.0, 1e-15);
  EXPECT_NEAR(theta_closed(pauli_z(), NormSpec::op()), 2.0, 1e-15);
  EXPECT_NEAR(comm_measure(pauli_z(), pauli_x(), NormSpec::op()), 2.0, 1e-14);
  EXPECT_NEAR(theta_closed(CMat::diag({1.0, kI}), NormSpec::op()), std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(theta_closed(pauli_z(), NormSpec::frobenius()), 2.0 * std::numbers::sqrt2, 1e-14);
  EXPECT_THROW(theta_closed(CMat::identity(3), NormSpec::op()), InputError);
  EXPECT_THROW(theta_closed(CMat::diag({2.0, 1.0}), NormSpec::op()), InputError);
}

TEST(OmegaClosed, Examples) {
  EXPECT_NEAR(omega_closed(Density::from_matrix(CMat::identity(3) * (1.0 / 3.0)), NormSpec::op()), 0.0, 1e-15);
  EXPECT_NEAR(omega_closed(Density::from_matrix(CMat::diag({1.0, 0.0})), NormSpec::op()), 0.5, 1e-15);
  EXPECT_NEAR(omega_closed(Density::from_matrix(CMat::diag({0.75, 0.25})), NormSpec::op()), 0.25, 1e-15);
}

TEST(ThetaOracle, Anchors) {
  SeededRng rng(2);
  EXPECT_NEAR(theta_oracle(CMat::identity(2), NormSpec::op(), 100, rng).value, 0.0, 1e-15);
  const SupEstimate e = theta_oracle(pauli_z(), NormSpec::op(), 20000, rng);
  EXPECT_NEAR(e.value, 2.0, 1e-3);
  EXPECT_LE(e.value, 2.0 + 1e-9);
  EXPECT_NEAR(comm_measure(pauli_z(), e.witness, NormSpec::op()), e.value, 1e-12);
  EXPECT_EQ(e.samples, 20000u);
  EXPECT_THROW(theta_oracle(pauli_z(), NormSpec::op(), 99, rng), InputError);
}

TEST(ThetaOracle, MatchesClosedForm) {
  SeededRng rng(3);
  const auto grid = default_norm_grid();
  for (int t = 0; t < 10; ++t) {
    const CMat v = haar_unitary(2, rng);
    const auto est = theta_oracle(v, grid, 5000, rng);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double closed = theta_closed(v, grid[k]);
      EXPECT_NEAR(est[k].value, closed, 1e-3) << grid[k].to_string();
      EXPECT_LE(est[k].value, closed + 1e-9);
    }
  }
}

TEST(ThetaOracle, SameSeedSameEstimate) {
  SeededRng a(4), b(4);
  EXPECT_EQ(theta_oracle(pauli_z(), NormSpec::op(), 3000, a).value, theta_oracle(pauli_z(), NormSpec::op(), 3000, b).value);
}

TEST(OmegaOracle, Anchors) {
  SeededRng rng(5);
  EXPECT_NEAR(omega_oracle(Density::from_matrix(CMat::identity(2) * 0.5), NormSpec::op(), 100, rng).value, 0.0, 1e-15);
  const SupEstimate e = omega_oracle(Density::from_matrix(CMat::diag({0.75, 0.25})), NormSpec::op(), 2000, rng);
  EXPECT_NEAR(e.value, 0.25, 1e-3);
  EXPECT_NEAR(vec_norm(e.witness_vector), 1.0, 1e-12);
}

TEST(OmegaOracle, MatchesClosedForm) {
  SeededRng rng(6);
  const auto grid = default_norm_grid();
  for (std::size_t n = 2; n <= 5; ++n) {
    const Density a = random_density(n, rng);
    const auto est = omega_oracle(a, grid, 2000, rng);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double closed = omega_closed(a, grid[k]);
      EXPECT_NEAR(est[k].value, closed, 1e-3) << grid[k].to_string() << " n=" << n;
      EXPECT_LE(est[k].value, closed + 1e-9);
    }
  }
}

TEST(OmegaOracle, WitnessIsBalancedExtremeSuperposition) {
  // |<x, v_max>|^2 = |<x, v_min>|^2 = 1/2 at the optimum.
  SeededRng rng(7);
  const Density a = random_density(3, rng);
  const SupEstimate e = omega_oracle(a, NormSpec::op(), 2000, rng);
  const HermEigen eig = herm_eigen(a.mat());
  EXPECT_NEAR(std::norm(inner(e.witness_vector, eig.vectors.column(0))), 0.5, 1e-4);
  EXPECT_NEAR(std::norm(inner(e.witness_vector, eig.vectors.column(2))), 0.5, 1e-4);
}

TEST(Extremal, PreservedByCanonicalForms) {
  SeededRng rng(8);
  for (int t = 0; t < 20; ++t) {
    const UnitaryPreserver u = random_unitary_preserver(2, rng);
    const CMat v = haar_unitary(2, rng);
    EXPECT_NEAR(theta_closed(thm3_apply(u, v), NormSpec::op()), theta_closed(v, NormSpec::op()), 1e-10);
    const DensityPreserver d = random_density_preserver(2, rng, true);
    const Density a = random_density(2, rng);
    EXPECT_NEAR(omega_closed(thm4_apply(d, a), NormSpec::op()), omega_closed(a, NormSpec::op()), 1e-10);
  }
}

}  // namespace
}  // namespace commnorm
