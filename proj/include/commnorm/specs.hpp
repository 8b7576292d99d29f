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

// Hidden preserver specs: a tagged union of the preserver forms, random
// instances of each, and the probe sets they generate.

#pragma once

#include <string>
#include <vector>

#include "commnorm/ensembles.hpp"
#include "commnorm/error.hpp"
#include "commnorm/preservers.hpp"
#include "commnorm/reconstruct.hpp"

namespace commnorm {

/// Serializable union of the preserver forms.
struct PreserverSpec {
  std::string kind;  // thm1, thm2, thm3, thm4, lpm, wigner
  Symmetry sym;
  int sign = 1;
  CMat functional;
  BitRule choice;
  PhaseRule phase = PhaseRule::constant(cplx{1.0, 0.0});
  BitRule branch;

  SelfAdjointPreserver thm1() const { return {sym, sign, functional}; }
  ProjectionPreserver thm2() const { return {sym, choice}; }
  UnitaryPreserver thm3() const { return {sym, phase, branch}; }
  DensityPreserver thm4() const { return {sym, branch}; }
  WignerPreserver wigner() const { return {sym}; }
};

inline bool is_preserver_kind(const std::string& k) {
  return k == "thm1" || k == "thm2" || k == "thm3" || k == "thm4" || k == "lpm" || k == "wigner";
}

/// Random hidden spec. thm2 and lpm live in dimension 2; thm4 uses random
/// branches only in dimension 2.
inline PreserverSpec random_preserver_spec(const std::string& kind, std::size_t n, SeededRng& rng) {
  if (!is_preserver_kind(kind)) throw InputError("unknown preserver kind '" + kind + "'");
  if ((kind == "thm2" || kind == "lpm") && n != 2) throw InputError(kind + " preservers act on dimension 2");
  if (n < 2) throw InputError("preserver dimension must be >= 2");
  PreserverSpec p;
  p.kind = kind;
  if (kind == "thm1") {
    const SelfAdjointPreserver s = random_selfadjoint_preserver(n, rng);
    p.sym = s.sym;
    p.sign = s.sign;
    p.functional = s.functional;
  } else if (kind == "thm2") {
    const ProjectionPreserver s = random_projection_preserver(rng);
    p.sym = s.sym;
    p.choice = s.choice;
  } else if (kind == "lpm") {
    p.sym = Symmetry::identity(2);
    p.choice = BitRule::seeded(rng.next_u64());
  } else if (kind == "thm3") {
    const UnitaryPreserver s = random_unitary_preserver(n, rng);
    p.sym = s.sym;
    p.phase = s.phase;
    p.branch = s.branch;
  } else if (kind == "thm4") {
    const DensityPreserver s = random_density_preserver(n, rng, n == 2);
    p.sym = s.sym;
    p.branch = s.branch;
  } else {
    p.sym = random_symmetry(n, rng);
  }
  return p;
}

/// The spec's map on a single operator of the matching class.
inline CMat apply_spec(const PreserverSpec& p, const CMat& in) {
  if (p.kind == "thm1") return thm1_apply(p.thm1(), in);
  if (p.kind == "thm2" || p.kind == "lpm") return thm2_apply(p.thm2(), Projection::from_matrix(in, 1e-8)).mat();
  if (p.kind == "thm3") return thm3_apply(p.thm3(), in);
  if (p.kind == "thm4") return thm4_apply(p.thm4(), Density::from_matrix(in, 1e-8)).mat();
  if (p.kind == "wigner") return wigner_apply(p.wigner(), Projection::from_matrix(in, 1e-8)).mat();
  throw InputError("unknown preserver kind '" + p.kind + "'");
}

inline ProbeSet::Kind probe_kind_for(const std::string& kind) {
  if (kind == "thm1") return ProbeSet::Kind::kHermitianLinearMap;
  if (kind == "thm3") return ProbeSet::Kind::kUnitaryPair;
  if (kind == "thm4") return ProbeSet::Kind::kDensityMap;
  return ProbeSet::Kind::kProjectionMap;
}

/// Anchor inputs (those the matching reconstructor needs) followed by
/// `probes` random inputs, with their images under the spec.
inline ProbeSet make_probe_set(const PreserverSpec& p, std::size_t probes, SeededRng& rng) {
  const std::size_t n = p.sym.dim();
  ProbeSet ps;
  ps.kind = probe_kind_for(p.kind);
  ps.dim = n;
  std::vector<CMat> inputs;
  if (p.kind == "thm2" || p.kind == "lpm") {
    for (const auto& a : projection_anchors()) inputs.push_back(a.proj.mat());
  } else if (p.kind == "wigner") {
    for (const auto& a : wigner_anchors(n)) inputs.push_back(a.proj.mat());
    CVec v = basis_vector(n, 0);
    v[1] = kReprobePhase;
    inputs.push_back(Projection::onto(v).mat());
  } else if (p.kind == "thm1" && n == 2) {
    for (const auto& b : hermitian_basis_2d()) inputs.push_back(b);
  }
  for (std::size_t i = 0; i < probes; ++i) {
    if (ps.kind == ProbeSet::Kind::kProjectionMap) {
      inputs.push_back(random_projection(n, rng).mat());
    } else if (ps.kind == ProbeSet::Kind::kHermitianLinearMap) {
      inputs.push_back(random_hermitian(n, rng));
    } else if (ps.kind == ProbeSet::Kind::kUnitaryPair) {
      inputs.push_back(haar_unitary(n, rng));
    } else {
      Density a = random_density(n, rng);
      if (n > 2 && p.branch(key_of(a.mat()))) {
        // Only states with lambda_max <= 2/n survive the complement branch.
        const double s = static_cast<double>(n - 2) / static_cast<double>(n - 1);
        a = Density::from_matrix(a.mat() * (1.0 - s) + CMat::identity(n) * (s / static_cast<double>(n)), 1e-9);
      }
      inputs.push_back(a.mat());
    }
  }
  for (auto& in : inputs) {
    CMat out = apply_spec(p, in);
    ps.samples.emplace_back(std::move(in), std::move(out));
  }
  return ps;
}

}  // namespace commnorm
