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

// Commutator measures |||[A, B]||| and their closed forms.
//
// Every closed form is c * sqrt(radicand) where c is the norm constant of
// the norm in the operator's dimension. Radicands within 1e-10 below zero
// are round-off and clamp to 0; anything more negative is a ConsistencyError.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "commnorm/matrix.hpp"
#include "commnorm/norms.hpp"

namespace commnorm {

inline constexpr double kRadicandFloor = 1e-10;

inline double clamp_radicand(double r, const char* what) {
  if (r >= 0.0) return r;
  if (r >= -kRadicandFloor) return 0.0;
  throw ConsistencyError(std::string(what) + ": negative radicand " + std::to_string(r));
}

/// Self-adjoint rank-one projection.
class Projection {
 public:
  /// P_u = u (x) u for a nonzero u (normalized here).
  static Projection onto(std::span<const cplx> u) {
    const CVec x = normalized(u);
    return Projection(rank_one(x, x));
  }

  /// Validates Hermitian, idempotent and trace one within `tol`.
  static Projection from_matrix(const CMat& m, double tol = 1e-10) {
    if (auto why = defect(m, tol)) throw InputError("not a rank-one projection: " + *why);
    return Projection(hermitian_part(m));
  }

  /// Reason `m` fails the projection invariants, if it does.
  static std::optional<std::string> defect(const CMat& m, double tol = 1e-10) {
    if (m.dim() < 1) return "empty matrix";
    if (!all_finite(m)) return "non-finite entry";
    if (hermitian_defect(m) > tol) return "not Hermitian";
    if (frobenius_norm(m * m - m) > tol) return "not idempotent";
    if (std::abs(trace(m) - 1.0) > tol) return "trace is not 1";
    return std::nullopt;
  }

  const CMat& mat() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.dim(); }

  /// A unit vector spanning the range (first non-negligible coordinate real positive).
  CVec vector() const { return top_eigenvector(m_); }

 private:
  explicit Projection(CMat m) : m_(std::move(m)) {}
  CMat m_;
};

/// Density operator: positive semidefinite with unit trace.
class Density {
 public:
  static Density from_matrix(const CMat& m, double tol = 1e-10) {
    if (!all_finite(m)) throw InputError("not a density: non-finite entry");
    if (hermitian_defect(m) > tol) throw InputError("not a density: not Hermitian");
    if (std::abs(trace(m) - 1.0) > tol) throw InputError("not a density: trace is not 1");
    const CMat h = hermitian_part(m);
    const double lo = herm_eigen(h).values.back();
    if (lo < -tol) {
      throw InputError("not a density: eigenvalue " + std::to_string(lo) + " is negative");
    }
    return Density(h);
  }

  static Density from_projection(const Projection& p) { return Density(p.mat()); }

  const CMat& mat() const noexcept { return m_; }
  std::size_t dim() const noexcept { return m_.dim(); }

 private:
  explicit Density(CMat m) : m_(std::move(m)) {}
  CMat m_;
};

inline void require_unit(std::span<const cplx> x, const char* what) {
  if (std::abs(vec_norm(x) - 1.0) > 1e-12) {
    throw InputError(std::string(what) + ": vector is not of unit norm");
  }
}

// ---------------------------------------------------------------------------

/// |||[A, B]|||.
inline double comm_measure(const CMat& a, const CMat& b, const NormSpec& spec) {
  return ui_norm(commutator(a, b), spec);
}

/// c * sqrt(det [A, B]) for Hermitian 2x2 A, B. The determinant of the
/// commutator is real and nonnegative for such pairs.
inline double det_formula_2d(const CMat& a, const CMat& b, const NormConstant& nc) {
  if (a.dim() != 2 || b.dim() != 2) throw InputError("det_formula_2d: operands must be 2x2");
  if (!is_hermitian(a) || !is_hermitian(b)) {
    throw InputError("det_formula_2d: operands must be Hermitian");
  }
  const CMat comm = commutator(a, b);
  const cplx d = det(comm);
  const double scale = std::max(1.0, std::norm(max_abs_entry(comm)));
  if (std::abs(d.imag()) > kRadicandFloor * scale) {
    throw ConsistencyError("det_formula_2d: determinant of commutator is not real");
  }
  double r = d.real();
  if (r < 0.0) {
    if (r < -kRadicandFloor * scale) {
      throw ConsistencyError("det_formula_2d: negative determinant " + std::to_string(r));
    }
    r = 0.0;
  }
  return nc.c * std::sqrt(r);
}

inline double det_formula_2d(const CMat& a, const CMat& b, const NormSpec& spec) {
  return det_formula_2d(a, b, norm_constant(spec, 2));
}

/// tr PQ, clamped to [0, 1].
inline double overlap(const Projection& p, const Projection& q) {
  require_same_dim(p.mat(), q.mat(), "overlap");
  const CMat& a = p.mat();
  const CMat& b = q.mat();
  cplx t{};
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) t += a(i, j) * b(j, i);
  if (std::abs(t.imag()) > 1e-10) throw ConsistencyError("overlap: tr PQ is not real");
  return std::clamp(t.real(), 0.0, 1.0);
}

/// c * sqrt(tr PQ - (tr PQ)^2).
inline double proj_pair_measure(const Projection& p, const Projection& q, const NormConstant& nc) {
  const double t = overlap(p, q);
  return nc.c * std::sqrt(clamp_radicand(t - t * t, "proj_pair_measure"));
}

inline double proj_pair_measure(const Projection& p, const Projection& q, const NormSpec& spec) {
  return proj_pair_measure(p, q, norm_constant(spec, p.dim()));
}

/// y - <y, x> x for a unit vector x.
inline CVec orthogonal_part(CVec y, std::span<const cplx> x) {
  const cplx m = inner(y, x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= m * x[i];
  return y;
}

/// c * sqrt(<A^2 x, x> - <A x, x>^2).
inline double density_proj_measure(const Density& a, std::span<const cplx> x, const NormConstant& nc) {
  if (x.size() != a.dim()) throw InputError("density_proj_measure: dimension mismatch");
  require_unit(x, "density_proj_measure");
  // <A^2 x, x> - <A x, x>^2 = |Ax - <Ax, x> x|^2; the residual form keeps
  // eigenvector inputs at round-off instead of sqrt(eps).
  const CVec ax = a.mat() * x;
  return nc.c * vec_norm(orthogonal_part(ax, x));
}

inline double density_proj_measure(const Density& a, std::span<const cplx> x, const NormSpec& spec) {
  return density_proj_measure(a, x, norm_constant(spec, a.dim()));
}

/// c * sqrt(1 - |<V x, x>|^2) for unitary V.
inline double unitary_proj_measure(const CMat& v, std::span<const cplx> x, const NormConstant& nc) {
  if (x.size() != v.dim()) throw InputError("unitary_proj_measure: dimension mismatch");
  if (!is_unitary(v, 1e-8)) throw InputError("unitary_proj_measure: operator is not unitary");
  require_unit(x, "unitary_proj_measure");
  // 1 - |<Vx, x>|^2 = |Vx - <Vx, x> x|^2 since |Vx| = 1.
  return nc.c * vec_norm(orthogonal_part(v * x, x));
}

inline double unitary_proj_measure(const CMat& v, std::span<const cplx> x, const NormSpec& spec) {
  return unitary_proj_measure(v, x, norm_constant(spec, v.dim()));
}

// ---------------------------------------------------------------------------
// Property (*): tr phi(P) phi(Q) in {tr PQ, 1 - tr PQ}
// ---------------------------------------------------------------------------

struct ProjPairSample {
  Projection p, q;          // inputs
  Projection p_img, q_img;  // their images
};

struct StarVerdict {
  bool pass = true;
  double worst = 0.0;                // largest per-pair margin seen
  std::size_t worst_index = 0;
  std::vector<std::size_t> failures;  // input order
  double tolerance = 1e-8;
};

/// Distance of tr P'Q' from the nearer of {tr PQ, 1 - tr PQ}.
inline double star_margin(const ProjPairSample& s) {
  const double before = overlap(s.p, s.q);
  const double after = overlap(s.p_img, s.q_img);
  return std::min(std::abs(after - before), std::abs(after - (1.0 - before)));
}

inline StarVerdict star_property_check(std::span<const ProjPairSample> pairs, double tol = 1e-8) {
  StarVerdict v;
  v.tolerance = tol;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (const auto* proj : {&pairs[i].p, &pairs[i].q, &pairs[i].p_img, &pairs[i].q_img}) {
      if (proj->dim() != 2) throw InputError("star_property_check: projections must be 2x2");
    }
    const double m = star_margin(pairs[i]);
    if (m > v.worst) {
      v.worst = m;
      v.worst_index = i;
    }
    if (m > tol) {
      v.pass = false;
      v.failures.push_back(i);
    }
  }
  return v;
}

}  // namespace commnorm
