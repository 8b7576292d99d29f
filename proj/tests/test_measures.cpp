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

const CMat kSx{{0.0, 1.0}, {1.0, 0.0}};
const CMat kB{{0.0, kI}, {-kI, 0.0}};

TEST(CommMeasure, Examples) {
  EXPECT_EQ(comm_measure(CMat::diag({1.0, 2.0}), CMat::diag({3.0, -1.0}), NormSpec::op()), 0.0);
  EXPECT_NEAR(comm_measure(kSx, kB, NormSpec::op()), 2.0, 1e-14);
  EXPECT_NEAR(comm_measure(kSx, kB, NormSpec::frobenius()), 2.0 * std::numbers::sqrt2, 1e-14);
}

TEST(DetFormula, Anchors) {
  EXPECT_NEAR(det_formula_2d(kSx, kB, NormSpec::op()), 2.0, 1e-12);
  EXPECT_NEAR(det_formula_2d(kSx, kB, NormSpec::op()), comm_measure(kSx, kB, NormSpec::op()), 1e-12);
  const CMat a{{1.0, 1.0}, {1.0, 0.0}};
  EXPECT_NEAR(det_formula_2d(a, kB, NormSpec::op()), std::sqrt(5.0), 1e-12);
  EXPECT_EQ(det_formula_2d(a, a, NormSpec::op()), 0.0);
}

TEST(DetFormula, MatchesCommMeasureOnRandomPairs) {
  SeededRng rng(47);
  for (int t = 0; t < 500; ++t) {
    const CMat a = random_hermitian(2, rng), b = random_hermitian(2, rng);
    for (const auto& spec : default_norm_grid()) {
      EXPECT_NEAR(det_formula_2d(a, b, spec), comm_measure(a, b, spec), 1e-8);
    }
  }
}

TEST(DetFormula, RejectsBadOperands) {
  EXPECT_THROW(det_formula_2d(CMat::identity(3), CMat::identity(3), NormSpec::op()), InputError);
  EXPECT_THROW(det_formula_2d(CMat{{0.0, 1.0}, {0.0, 0.0}}, kSx, NormSpec::op()), InputError);
}

TEST(Overlap, Examples) {
  const Projection p = bloch_projection(0.0, 1.0);
  EXPECT_NEAR(overlap(p, p), 1.0, 1e-15);
  for (double t : {0.1, 0.5, 1.0, 1.4}) {
    const Projection q = bloch_projection(t, std::polar(1.0, 0.3 * t));
    EXPECT_NEAR(overlap(p, q), std::cos(t) * std::cos(t), 1e-14);
  }
  EXPECT_NEAR(overlap(p, bloch_projection(std::numbers::pi / 2, 1.0)), 0.0, 1e-15);
}

TEST(ProjPairMeasure, Examples) {
  const Projection p = Projection::onto(CVec{1.0, 0.0});
  const Projection q = Projection::onto(CVec{kInvSqrt2, kInvSqrt2});
  EXPECT_NEAR(proj_pair_measure(p, q, NormSpec::op()), 0.5, 1e-15);
  EXPECT_NEAR(proj_pair_measure(p, p, NormSpec::op()), 0.0, 1e-15);
}

TEST(ProjPairMeasure, MatchesCommMeasure) {
  SeededRng rng(53);
  for (std::size_t n = 2; n <= 6; ++n) {
    for (int t = 0; t < 50; ++t) {
      const Projection p = random_projection(n, rng), q = random_projection(n, rng);
      for (const auto& spec : default_norm_grid()) {
        EXPECT_NEAR(proj_pair_measure(p, q, spec), comm_measure(p.mat(), q.mat(), spec), 1e-9);
      }
    }
  }
}

TEST(DensityProjMeasure, Examples) {
  const CVec x{kInvSqrt2, kInvSqrt2};
  const Density maximally_mixed = Density::from_matrix(CMat::identity(3) * (1.0 / 3.0));
  SeededRng rng(59);
  EXPECT_NEAR(density_proj_measure(maximally_mixed, random_unit_vector(3, rng), NormSpec::op()), 0.0, 1e-15);
  const Density e11 = Density::from_matrix(CMat::diag({1.0, 0.0}));
  EXPECT_NEAR(density_proj_measure(e11, x, NormSpec::op()), 0.5, 1e-15);
  EXPECT_NEAR(density_proj_measure(e11, x, NormSpec::op()), comm_measure(e11.mat(), rank_one(x, x), NormSpec::op()),
              1e-15);
  const Density a = random_density(4, rng);
  const HermEigen eig = herm_eigen(a.mat());
  EXPECT_NEAR(density_proj_measure(a, eig.vectors.column(1), NormSpec::op()), 0.0, 1e-12);
}

TEST(DensityProjMeasure, MatchesCommMeasure) {
  SeededRng rng(61);
  for (std::size_t n = 2; n <= 6; ++n) {
    for (int t = 0; t < 50; ++t) {
      const Density a = random_density(n, rng);
      const CVec x = random_unit_vector(n, rng);
      for (const auto& spec : default_norm_grid()) {
        EXPECT_NEAR(density_proj_measure(a, x, spec), comm_measure(a.mat(), rank_one(x, x), spec), 1e-9);
      }
    }
  }
}

TEST(UnitaryProjMeasure, Examples) {
  const CVec x{kInvSqrt2, kInvSqrt2};
  EXPECT_NEAR(unitary_proj_measure(CMat::identity(2), x, NormSpec::op()), 0.0, 1e-15);
  EXPECT_NEAR(unitary_proj_measure(CMat::diag({1.0, -1.0}), x, NormSpec::op()), 1.0, 1e-15);
}

TEST(UnitaryProjMeasure, MatchesCommMeasure) {
  SeededRng rng(67);
  for (std::size_t n = 2; n <= 6; ++n) {
    for (int t = 0; t < 50; ++t) {
      const CMat v = haar_unitary(n, rng);
      const CVec x = random_unit_vector(n, rng);
      for (const auto& spec : default_norm_grid()) {
        EXPECT_NEAR(unitary_proj_measure(v, x, spec), comm_measure(v, rank_one(x, x), spec), 1e-9);
      }
    }
  }
}

TEST(UnitaryProjMeasure, RejectsBadInput) {
  EXPECT_THROW(unitary_proj_measure(CMat::diag({2.0, 1.0}), CVec{1.0, 0.0}, NormSpec::op()), InputError);
  EXPECT_THROW(unitary_proj_measure(CMat::identity(2), CVec{1.0, 1.0}, NormSpec::op()), InputError);
}

std::vector<ProjPairSample> sample_pairs(const std::function<Projection(const Projection&)>& phi, SeededRng& rng,
                                         int count) {
  std::vector<ProjPairSample> out;
  for (int i = 0; i < count; ++i) {
    const Projection p = random_projection(2, rng), q = random_projection(2, rng);
    out.push_back({p, q, phi(p), phi(q)});
  }
  return out;
}

TEST(StarProperty, IdentityPasses) {
  SeededRng rng(71);
  const auto s = sample_pairs([](const Projection& p) { return p; }, rng, 100);
  EXPECT_TRUE(star_property_check(s).pass);
}

TEST(StarProperty, CanonicalFormWithRandomBitsPasses) {
  SeededRng rng(73);
  for (int m = 0; m < 20; ++m) {
    const ProjectionPreserver pp = random_projection_preserver(rng);
    const auto s = sample_pairs([&](const Projection& p) { return thm2_apply(pp, p); }, rng, 50);
    const StarVerdict v = star_property_check(s);
    EXPECT_TRUE(v.pass) << v.worst;
  }
}

TEST(StarProperty, ConstantMapFails) {
  const Projection e1 = Projection::onto(CVec{1.0, 0.0});
  const Projection h = Projection::onto(CVec{kInvSqrt2, kInvSqrt2});
  const std::vector<ProjPairSample> s{{e1, h, e1, e1}};
  const StarVerdict v = star_property_check(s);
  EXPECT_FALSE(v.pass);
  EXPECT_NEAR(v.worst, 0.5, 1e-15);
  ASSERT_EQ(v.failures.size(), 1u);
  EXPECT_EQ(v.failures[0], 0u);
}

TEST(StarProperty, EquivalentToMeasurePreservation) {
  // On pairs, (*) holds iff the commutator measure is preserved.
  SeededRng rng(79);
  for (int t = 0; t < 200; ++t) {
    const Projection p = random_projection(2, rng), q = random_projection(2, rng);
    const Projection pi = random_projection(2, rng), qi = random_projection(2, rng);
    const ProjPairSample s{p, q, pi, qi};
    const bool star = star_margin(s) <= 1e-8;
    const bool norm = std::abs(comm_measure(p.mat(), q.mat(), NormSpec::op()) -
                               comm_measure(pi.mat(), qi.mat(), NormSpec::op())) <= 1e-8;
    EXPECT_EQ(star, norm);
  }
}

}  // namespace
}  // namespace commnorm
