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

#include "commnorm/commnorm.hpp"

namespace commnorm {
namespace {

double dist(const CMat& a, const CMat& b) { return frobenius_norm(a - b); }

std::vector<Projection> validation_set(std::size_t n, std::uint64_t seed, int count = 64) {
  SeededRng rng(seed);
  std::vector<Projection> v;
  for (int i = 0; i < count; ++i) v.push_back(random_projection(n, rng));
  return v;
}

template <typename F>
Oracle projection_oracle(F f) {
  return Oracle([f](const CMat& m) { return f(Projection::from_matrix(m, 1e-8)).mat(); });
}

std::string constraint_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const NotAPreserver& e) {
    return e.constraint();
  }
  return "";
}

// --- projection maps on C^2 ---------------------------------------------

TEST(ReconstructProjection, Identity) {
  const Oracle phi = projection_oracle([](const Projection& p) { return p; });
  const auto v = validation_set(2, 1);
  const ReconstructionResult r = reconstruct_projection_symmetry(phi, v);
  EXPECT_EQ(r.sym.flag, Linearity::kLinear);
  EXPECT_LT(phase_distance(r.sym.u, CMat::identity(2)), 1e-12);
  EXPECT_LT(r.residual, 1e-12);
  EXPECT_EQ(r.queries, 5u);
  // Queried anchors first, then the validation probes.
  ASSERT_EQ(r.bits.size(), r.queries + v.size());
  for (const auto& b : r.bits) EXPECT_EQ(b.bit, 0);
}

TEST(ReconstructProjection, ComplementIsTheBitNotTheSymmetry) {
  const Oracle phi = projection_oracle([](const Projection& p) { return orthocomplement(p); });
  const auto v = validation_set(2, 2);
  const ReconstructionResult r = reconstruct_projection_symmetry(phi, v);
  EXPECT_EQ(r.sym.flag, Linearity::kLinear);
  EXPECT_LT(phase_distance(r.sym.u, CMat::identity(2)), 1e-12);
  for (const auto& b : r.bits) EXPECT_EQ(b.bit, 1);
}

TEST(ReconstructProjection, EntrywiseConjugateInLinearGauge) {
  // conj(P) = sigma_y P^perp sigma_y.
  const Oracle phi = Oracle([](const CMat& m) { return entrywise_conj(m); });
  const auto v = validation_set(2, 3);
  const ReconstructionResult r = reconstruct_projection_symmetry(phi, v);
  EXPECT_EQ(r.sym.flag, Linearity::kLinear);
  EXPECT_LT(phase_distance(r.sym.u, pauli_y()), 1e-10);
  for (const auto& b : r.bits) EXPECT_EQ(b.bit, 1);
}

TEST(ReconstructProjection, RoundTripAgainstHiddenSpec) {
  SeededRng rng(4);
  for (int rep = 0; rep < 40; ++rep) {
    const Linearity f = rep % 2 ? Linearity::kConjugate : Linearity::kLinear;
    const ProjectionPreserver hidden{random_symmetry(2, rng, f), BitRule::seeded(rng.next_u64())};
    const Oracle phi = projection_oracle([&](const Projection& p) { return thm2_apply(hidden, p); });
    const auto v = validation_set(2, 100 + rep);
    const ReconstructionResult r = reconstruct_projection_symmetry(phi, v);
    const Symmetry canon = canonical_projection_symmetry(hidden.sym);
    EXPECT_EQ(r.sym.flag, canon.flag);
    EXPECT_LT(phase_distance(r.sym.u, canon.u), 1e-7);
    EXPECT_LT(r.residual, 1e-7);
    EXPECT_LE(r.queries, 12u);
    for (const auto& b : r.bits) EXPECT_EQ(b.bit, canonical_bit(hidden, Projection::from_matrix(b.input, 1e-8)));
  }
}

TEST(ReconstructProjection, ConstantMapRejected) {
  const Projection e1 = Projection::onto(CVec{1.0, 0.0});
  const Oracle phi = projection_oracle([&](const Projection&) { return e1; });
  const auto v = validation_set(2, 5);
  EXPECT_EQ(constraint_of([&] { reconstruct_projection_symmetry(phi, v); }), "property (*)");
}

TEST(ReconstructProjection, NonProjectionOutputRejected) {
  const Oracle phi = Oracle([](const CMat& m) { return m * 2.0; });
  const auto v = validation_set(2, 6);
  EXPECT_THROW(reconstruct_projection_symmetry(phi, v), NotAPreserver);
}

TEST(ReconstructProjection, RotatedValidationFailureIsCaught) {
  // Correct on the anchors, wrong on every other input.
  const auto anchors = projection_anchors();
  SeededRng rng(7);
  const CMat u = haar_unitary(2, rng);
  const Oracle phi = Oracle([&](const CMat& m) {
    for (const auto& a : anchors)
      if (dist(a.proj.mat(), m) < 1e-9) return m;
    return CMat(u * m * adjoint(u));
  });
  const auto v = validation_set(2, 8);
  EXPECT_THROW(reconstruct_projection_symmetry(phi, v), NotAPreserver);
}

// --- Wigner-type maps ----------------------------------------------------

TEST(ReconstructWigner, EntrywiseConjugate) {
  for (std::size_t n = 2; n <= 5; ++n) {
    const Oracle phi = Oracle([](const CMat& m) { return entrywise_conj(m); });
    const auto v = validation_set(n, 9);
    const ReconstructionResult r = reconstruct_wigner(phi, n, v);
    EXPECT_EQ(r.sym.flag, Linearity::kConjugate) << n;
    EXPECT_LT(phase_distance(r.sym.u, CMat::identity(n)), 1e-10);
  }
}

TEST(ReconstructWigner, RoundTrips) {
  SeededRng rng(10);
  for (std::size_t n = 2; n <= 5; ++n) {
    for (int rep = 0; rep < 10; ++rep) {
      const Linearity f = rep % 2 ? Linearity::kConjugate : Linearity::kLinear;
      const WignerPreserver hidden{random_symmetry(n, rng, f)};
      const Oracle phi = projection_oracle([&](const Projection& p) { return wigner_apply(hidden, p); });
      const auto v = validation_set(n, 200 + rep);
      const ReconstructionResult r = reconstruct_wigner(phi, n, v);
      EXPECT_EQ(r.sym.flag, f);
      EXPECT_LT(phase_distance(r.sym.u, hidden.sym.u), 1e-7);
      EXPECT_LT(r.residual, 1e-7);
      EXPECT_LE(r.queries, 3 * n - 2);
    }
  }
}

TEST(ReconstructWigner, DiagonalPhaseAntiunitary) {
  const Symmetry s{CMat::diag({1.0, kI}), Linearity::kConjugate};
  const Oracle phi = projection_oracle([&](const Projection& p) { return apply_symmetry(s, p); });
  const auto v = validation_set(2, 11);
  const ReconstructionResult r = reconstruct_wigner(phi, 2, v);
  EXPECT_EQ(r.sym.flag, Linearity::kConjugate);
  EXPECT_LT(r.residual, 1e-7);
  EXPECT_LE(r.queries, 4u);
}

TEST(ReconstructWigner, NonOrthogonalBasisImagesRejected) {
  const Projection e1 = Projection::onto(basis_vector(3, 0));
  const Oracle phi = projection_oracle([&](const Projection&) { return e1; });
  const auto v = validation_set(3, 12);
  EXPECT_EQ(constraint_of([&] { reconstruct_wigner(phi, 3, v); }), "Uhlhorn form");
}

// --- linear maps on 2x2 Hermitians -------------------------------------

TEST(ReconstructLinear, Identity) {
  const Oracle phi = Oracle([](const CMat& m) { return m; });
  SeededRng rng(13);
  const ReconstructionResult r = reconstruct_selfadjoint_linear(phi, rng);
  EXPECT_EQ(r.sym.flag, Linearity::kLinear);
  EXPECT_EQ(*r.sign, 1);
  EXPECT_LT(frobenius_norm(*r.functional), 1e-12);
  EXPECT_LT(phase_distance(r.sym.u, CMat::identity(2)), 1e-12);
  EXPECT_EQ(r.queries, 4u);
}

TEST(ReconstructLinear, MinusConjugate) {
  const Oracle phi = Oracle([](const CMat& m) { return entrywise_conj(m) * -1.0; });
  SeededRng rng(14);
  const ReconstructionResult r = reconstruct_selfadjoint_linear(phi, rng);
  EXPECT_EQ(r.sym.flag, Linearity::kConjugate);
  EXPECT_EQ(*r.sign, -1);
  EXPECT_LT(frobenius_norm(*r.functional), 1e-12);
  EXPECT_LT(phase_distance(r.sym.u, CMat::identity(2)), 1e-12);
}

TEST(ReconstructLinear, DoublingRejectedOnGapConstraint) {
  const Oracle phi = Oracle([](const CMat& m) { return m * 2.0; });
  SeededRng rng(15);
  EXPECT_EQ(constraint_of([&] { reconstruct_selfadjoint_linear(phi, rng); }), "s - t = +-1");
}

TEST(ReconstructLinear, NonScalarImageOfIdentityRejected) {
  // L(I) = diag(1, 0) + sigma_x.
  const Oracle phi = Oracle([](const CMat& m) {
    CMat out = CMat::diag({m(0, 0), 0.0});
    return CMat(out + pauli_x() * m(1, 1).real());
  });
  SeededRng rng(16);
  EXPECT_EQ(constraint_of([&] { reconstruct_selfadjoint_linear(phi, rng); }), "scalar image of I");
}

TEST(ReconstructLinear, RoundTripsInCanonicalGauge) {
  SeededRng rng(17);
  for (int rep = 0; rep < 40; ++rep) {
    const SelfAdjointPreserver hidden = random_selfadjoint_preserver(2, rng);
    const Oracle phi = Oracle([&](const CMat& m) { return thm1_apply(hidden, m); });
    SeededRng vr(300 + rep);
    const ReconstructionResult r = reconstruct_selfadjoint_linear(phi, vr);
    const SelfAdjointPreserver canon = canonical_linear_gauge(hidden);
    EXPECT_EQ(*r.sign, canon.sign);
    EXPECT_EQ(r.sym.flag, canon.sym.flag);
    EXPECT_LT(phase_distance(r.sym.u, canon.sym.u), 1e-7);
    EXPECT_LT(dist(*r.functional, canon.functional), 1e-7);
    EXPECT_LT(r.residual, 1e-7);
  }
}

TEST(CanonicalLinearGauge, SameMap) {
  SeededRng rng(18);
  for (int rep = 0; rep < 20; ++rep) {
    const SelfAdjointPreserver p = random_selfadjoint_preserver(2, rng);
    const SelfAdjointPreserver q = canonical_linear_gauge(p);
    const CMat a = random_hermitian(2, rng);
    EXPECT_LT(dist(thm1_apply(p, a), thm1_apply(q, a)), 1e-12);
  }
}

// --- unitary pairs -----------------------------------------------------

TEST(ClassifyUnitaryPair, Examples) {
  SeededRng rng(19);
  const CMat v = haar_unitary(3, rng);
  const UnitaryPairVerdict a = classify_unitary_pair(v, v * kI);
  EXPECT_EQ(a.kind, UnitaryPairVerdict::Kind::kScalarMultiple);
  EXPECT_LT(std::abs(a.z - kI), 1e-12);

  const UnitaryPairVerdict b = classify_unitary_pair(CMat::diag({1.0, kI}), CMat::diag({1.0, -kI}));
  EXPECT_EQ(b.kind, UnitaryPairVerdict::Kind::kScalarMultipleOfAdjoint);
  EXPECT_LT(std::abs(b.z - 1.0), 1e-12);

  const UnitaryPairVerdict c = classify_unitary_pair(pauli_z(), pauli_x());
  EXPECT_EQ(c.kind, UnitaryPairVerdict::Kind::kNeither);
  const auto w = find_measure_violation(pauli_z(), pauli_x(), NormSpec::op(), rng);
  ASSERT_TRUE(w.has_value());
  EXPECT_LT(std::abs(w->x[0] - 1.0), 1e-15);
  EXPECT_NEAR(w->first, 0.0, 1e-15);
  EXPECT_NEAR(w->second, 1.0, 1e-12);
}

TEST(ClassifyUnitaryPair, NoViolationForPositivePairs) {
  SeededRng rng(20);
  for (int t = 0; t < 10; ++t) {
    const CMat v = haar_unitary(3, rng);
    const cplx z = rng.phase();
    EXPECT_FALSE(find_measure_violation(v, v * z, NormSpec::op(), rng).has_value());
    EXPECT_FALSE(find_measure_violation(v, adjoint(v) * z, NormSpec::op(), rng).has_value());
  }
}

TEST(ClassifyUnitaryPair, RejectsNonUnitary) {
  EXPECT_THROW(classify_unitary_pair(CMat::diag({2.0, 1.0}), CMat::identity(2)), InputError);
}

// --- probe sets ----------------------------------------------------------

ProbeSet identity_probe_set() {
  ProbeSet ps;
  ps.kind = ProbeSet::Kind::kProjectionMap;
  ps.dim = 2;
  for (const auto& a : projection_anchors()) ps.samples.emplace_back(a.proj.mat(), a.proj.mat());
  for (const auto& p : validation_set(2, 21, 8)) ps.samples.emplace_back(p.mat(), p.mat());
  return ps;
}

TEST(ProbeSetReconstruction, IdentityFile) {
  const ReconstructionResult r = reconstruct_projection_symmetry(identity_probe_set());
  EXPECT_EQ(r.sym.flag, Linearity::kLinear);
  EXPECT_LT(phase_distance(r.sym.u, CMat::identity(2)), 1e-12);
  EXPECT_EQ(r.validation_count, 8u);
}

TEST(ProbeSetReconstruction, MissingAnchorsAreListed) {
  ProbeSet ps = identity_probe_set();
  ps.samples.erase(ps.samples.begin() + 2);
  try {
    reconstruct_projection_symmetry(ps);
    FAIL() << "accepted a probe set without the branch anchor";
  } catch (const MissingAnchors& e) {
    EXPECT_NE(std::string(e.what()).find("P(1/sqrt2,e^{i pi/3}/sqrt2)"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("Bloch"), std::string::npos);
  }
}

TEST(ProbeSetReconstruction, InvalidSampleNamesIndex) {
  ProbeSet ps = identity_probe_set();
  ps.samples[3].second = ps.samples[3].second * 1.5;
  try {
    validate_probe_set(ps);
    FAIL() << "accepted a non-idempotent output";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("sample 3 output"), std::string::npos) << e.what();
  }
}

TEST(ProbeSetReconstruction, CollisionRejected) {
  ProbeSet ps = identity_probe_set();
  ps.samples.emplace_back(ps.samples[0].first, orthocomplement(Projection::from_matrix(ps.samples[0].first)).mat());
  EXPECT_THROW(reconstruct_projection_symmetry(ps), InputError);
}

TEST(ProbeSetReconstruction, GeneratedSetsRoundTrip) {
  SeededRng rng(22);
  for (const char* kind : {"thm2", "wigner", "thm1"}) {
    const std::size_t n = std::string(kind) == "wigner" ? 4 : 2;
    const PreserverSpec spec = random_preserver_spec(kind, n, rng);
    SeededRng probes(23);
    const ProbeSet ps = make_probe_set(spec, 32, probes);
    ReconstructionResult r;
    if (std::string(kind) == "thm2") r = reconstruct_projection_symmetry(ps);
    if (std::string(kind) == "wigner") r = reconstruct_wigner(ps);
    if (std::string(kind) == "thm1") r = reconstruct_selfadjoint_linear(ps);
    EXPECT_LT(r.residual, 1e-7) << kind;
    EXPECT_EQ(r.validation_count, 32u) << kind;
  }
}

}  // namespace
}  // namespace commnorm
