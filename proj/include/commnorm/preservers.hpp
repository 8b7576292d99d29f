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

// Canonical commutator-norm preservers.
//
// A Symmetry is a unitary U with a linearity flag. The linear flag acts on
// operators as A -> U A U*; the conjugate-linear flag realizes the
// antiunitary U K (K = coordinatewise conjugation) and acts as A -> U conj(A) U*.
//
// Pointwise choices (complement bits, phases, branches) are Rules: a
// constant, a table keyed by quantized inputs, or a seeded hash of the
// quantized input. Quantization rounds to a 1e-6 grid, Bloch coordinates for
// 2x2 projections and raw entries otherwise.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <variant>
#include <vector>

#include "commnorm/ensembles.hpp"
#include "commnorm/matrix.hpp"
#include "commnorm/measures.hpp"

namespace commnorm {

enum class Linearity { kLinear, kConjugate };

inline Linearity operator^(Linearity a, Linearity b) {
  return a == b ? Linearity::kLinear : Linearity::kConjugate;
}

inline const char* to_string(Linearity f) { return f == Linearity::kLinear ? "linear" : "conj"; }

/// Unitary or antiunitary operator, acting on operators by conjugation.
struct Symmetry {
  CMat u;
  Linearity flag = Linearity::kLinear;

  static Symmetry identity(std::size_t n, Linearity f = Linearity::kLinear) {
    return {CMat::identity(n), f};
  }

  static Symmetry make(CMat u, Linearity f) {
    if (!is_unitary(u, 1e-10)) {
      throw InputError("Symmetry: matrix is not unitary (defect " + std::to_string(unitary_defect(u)) + ")");
    }
    return {std::move(u), f};
  }

  std::size_t dim() const noexcept { return u.dim(); }
};

inline CMat apply_symmetry(const Symmetry& s, const CMat& a) {
  require_same_dim(s.u, a, "apply_symmetry");
  const CMat& arg = s.flag == Linearity::kLinear ? a : entrywise_conj(a);
  return s.u * arg * adjoint(s.u);
}

inline Projection apply_symmetry(const Symmetry& s, const Projection& p) {
  return Projection::from_matrix(hermitian_part(apply_symmetry(s, p.mat())), 1e-9);
}

/// The symmetry acting as A -> outer(inner(A)).
inline Symmetry compose(const Symmetry& outer, const Symmetry& inner_sym) {
  require_same_dim(outer.u, inner_sym.u, "compose");
  const CMat moved = outer.flag == Linearity::kLinear ? inner_sym.u : entrywise_conj(inner_sym.u);
  return {outer.u * moved, outer.flag ^ inner_sym.flag};
}

inline Symmetry inverse(const Symmetry& s) {
  const CMat ua = adjoint(s.u);
  return {s.flag == Linearity::kLinear ? ua : entrywise_conj(ua), s.flag};
}

/// The antiunitary sigma_y K; on 2x2 rank-one projections it sends P to I - P.
inline Symmetry complement_symmetry() { return {pauli_y(), Linearity::kConjugate}; }

/// Rotates U's global phase so its first non-negligible entry in column 0
/// is real positive. Does not change the action on operators.
inline Symmetry normalize_phase(Symmetry s) {
  for (std::size_t i = 0; i < s.u.dim(); ++i) {
    const cplx v = s.u(i, 0);
    if (std::abs(v) > 1e-12) {
      s.u *= std::conj(v) / std::abs(v);
      break;
    }
  }
  return s;
}

/// min over theta of |a - e^{i theta} b|_F.
inline double phase_distance(const CMat& a, const CMat& b) {
  require_same_dim(a, b, "phase_distance");
  cplx t{};
  for (std::size_t k = 0; k < a.data().size(); ++k) t += std::conj(b.data()[k]) * a.data()[k];
  const cplx ph = std::abs(t) > 0.0 ? t / std::abs(t) : cplx{1.0, 0.0};
  return frobenius_norm(a - b * ph);
}

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

using Key = std::vector<std::int64_t>;

inline constexpr double kKeyQuantum = 1e-6;

inline std::int64_t quantize(double v) { return static_cast<std::int64_t>(std::llround(v / kKeyQuantum)); }

inline Key key_of(const BlochVec& b) { return {quantize(b.x), quantize(b.y), quantize(b.z)}; }

inline Key key_of(const CMat& m) {
  Key k;
  k.reserve(2 * m.data().size());
  for (const auto& x : m.data()) {
    k.push_back(quantize(x.real()));
    k.push_back(quantize(x.imag()));
  }
  return k;
}

/// Bloch key for 2x2 projections, entry key otherwise.
inline Key key_of(const Projection& p) {
  return p.dim() == 2 ? key_of(bloch_from_projection(p)) : key_of(p.mat());
}

inline std::uint64_t hash_key(std::uint64_t seed, const Key& key) {
  std::uint64_t h = splitmix64(seed);
  for (const auto v : key) h = splitmix64(h ^ static_cast<std::uint64_t>(v));
  return h;
}

/// Pointwise choice function: constant, quantized-key table or seeded hash.
template <typename Value>
struct Rule {
  struct Constant {
    Value value{};
  };
  struct Table {
    std::map<Key, Value> entries;
    Value fallback{};
  };
  struct Seeded {
    std::uint64_t seed = 0;
  };

  std::variant<Constant, Table, Seeded> impl = Constant{};

  static Rule constant(Value v) { return Rule{Constant{v}}; }
  static Rule seeded(std::uint64_t seed) { return Rule{Seeded{seed}}; }

  Value operator()(const Key& key) const {
    return std::visit(
        [&](const auto& r) -> Value {
          using R = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<R, Constant>) {
            return r.value;
          } else if constexpr (std::is_same_v<R, Table>) {
            const auto it = r.entries.find(key);
            return it == r.entries.end() ? r.fallback : it->second;
          } else {
            return from_hash(hash_key(r.seed, key));
          }
        },
        impl);
  }

 private:
  static Value from_hash(std::uint64_t h) {
    if constexpr (std::is_same_v<Value, cplx>) {
      return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(h >> 11) * 0x1.0p-53);
    } else {
      return static_cast<Value>(h & 1U);
    }
  }
};

using BitRule = Rule<int>;
using PhaseRule = Rule<cplx>;

// ---------------------------------------------------------------------------
// Preserver forms
// ---------------------------------------------------------------------------

/// A -> sign * S(A) + f(A) I on Hermitian matrices, with f(A) = tr(F A).
struct SelfAdjointPreserver {
  Symmetry sym;
  int sign = 1;
  CMat functional;  // Hermitian representer F

  double f(const CMat& a) const {
    cplx t{};
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t j = 0; j < a.dim(); ++j) t += functional(i, j) * a(j, i);
    return t.real();
  }
};

/// P -> S(P) or S(P^perp), chosen per point (sym = identity gives an LPM).
struct ProjectionPreserver {
  Symmetry sym;
  BitRule choice;

  int bit(const Projection& p) const { return choice(key_of(p)); }
};

/// V -> tau(V) S(V) or tau(V) S(V*).
struct UnitaryPreserver {
  Symmetry sym;
  PhaseRule phase;
  BitRule branch;  // 1 selects the adjoint
};

/// A -> S(A) or (2/n) I - S(A).
struct DensityPreserver {
  Symmetry sym;
  BitRule branch;
};

/// Bijective P_1(C^n) map P -> S(P).
struct WignerPreserver {
  Symmetry sym;
};

inline CMat thm1_apply(const SelfAdjointPreserver& spec, const CMat& a) {
  require_same_dim(spec.sym.u, a, "thm1_apply");
  if (!is_hermitian(a)) throw InputError("thm1_apply: input is not Hermitian");
  CMat out = apply_symmetry(spec.sym, a) * static_cast<double>(spec.sign);
  const double fa = spec.f(a);
  for (std::size_t i = 0; i < a.dim(); ++i) out(i, i) += fa;
  return hermitian_part(out);
}

inline Projection orthocomplement(const Projection& p) {
  if (p.dim() != 2) throw InputError("orthocomplement: projection must be 2x2");
  return Projection::from_matrix(CMat::identity(2) - p.mat());
}

inline Projection thm2_apply(const ProjectionPreserver& spec, const Projection& p) {
  if (p.dim() != 2 || spec.sym.dim() != 2) throw InputError("thm2_apply: expects 2x2 input");
  return apply_symmetry(spec.sym, spec.bit(p) ? orthocomplement(p) : p);
}

inline CMat thm3_apply(const UnitaryPreserver& spec, const CMat& v) {
  require_same_dim(spec.sym.u, v, "thm3_apply");
  if (!is_unitary(v, 1e-8)) throw InputError("thm3_apply: input is not unitary");
  const Key key = key_of(v);
  const CMat arg = spec.branch(key) ? adjoint(v) : v;
  return apply_symmetry(spec.sym, arg) * spec.phase(key);
}

inline Density thm4_apply(const DensityPreserver& spec, const Density& a) {
  require_same_dim(spec.sym.u, a.mat(), "thm4_apply");
  CMat out = apply_symmetry(spec.sym, a.mat());
  if (spec.branch(key_of(a.mat()))) {
    const std::size_t n = a.dim();
    out = CMat::identity(n) * (2.0 / static_cast<double>(n)) - out;
    const double lo = herm_eigen(hermitian_part(out)).values.back();
    if (lo < -1e-10) {
      throw InputError("thm4_apply: branch (2/n)I - UAU* leaves the state space (eigenvalue " +
                       std::to_string(lo) + ")");
    }
  }
  return Density::from_matrix(hermitian_part(out), 1e-9);
}

inline Projection wigner_apply(const WignerPreserver& spec, const Projection& p) {
  return apply_symmetry(spec.sym, p);
}

/// xi (2P - I): the trace-zero unitaries of C^2.
inline CMat trace_zero_unitary(const Projection& p, cplx xi) {
  if (p.dim() != 2) throw InputError("trace_zero_unitary: projection must be 2x2");
  if (std::abs(std::abs(xi) - 1.0) > 1e-12) throw InputError("trace_zero_unitary: |xi| must be 1");
  return (p.mat() * 2.0 - CMat::identity(2)) * xi;
}

// ---------------------------------------------------------------------------
// Random parameterizations
// ---------------------------------------------------------------------------

inline Symmetry random_symmetry(std::size_t n, SeededRng& rng, Linearity f) {
  return normalize_phase(Symmetry{haar_unitary(n, rng), f});
}

inline Symmetry random_symmetry(std::size_t n, SeededRng& rng) {
  const Linearity f = rng.bit() ? Linearity::kConjugate : Linearity::kLinear;
  return random_symmetry(n, rng, f);
}

inline SelfAdjointPreserver random_selfadjoint_preserver(std::size_t n, SeededRng& rng) {
  SelfAdjointPreserver p;
  p.sym = random_symmetry(n, rng);
  p.sign = rng.bit() ? -1 : 1;
  p.functional = random_hermitian(n, rng);
  return p;
}

inline ProjectionPreserver random_projection_preserver(SeededRng& rng) {
  Symmetry s = random_symmetry(2, rng);
  return {std::move(s), BitRule::seeded(rng.next_u64())};
}

inline UnitaryPreserver random_unitary_preserver(std::size_t n, SeededRng& rng) {
  Symmetry s = random_symmetry(n, rng);
  const std::uint64_t phase_seed = rng.next_u64();
  const std::uint64_t branch_seed = rng.next_u64();
  return {std::move(s), PhaseRule::seeded(phase_seed), BitRule::seeded(branch_seed)};
}

/// Random branches in dimension 2; in higher dimensions the complement
/// branch is only valid on states with lambda_max <= 2/n, so callers choose.
inline DensityPreserver random_density_preserver(std::size_t n, SeededRng& rng, bool random_branch) {
  Symmetry s = random_symmetry(n, rng);
  const std::uint64_t seed = rng.next_u64();
  return {std::move(s), random_branch ? BitRule::seeded(seed) : BitRule::constant(0)};
}

}  // namespace commnorm
