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

// Recovering the hidden symmetry behind a commutator-norm preserver.
//
// Gauge conventions. Recovered unitaries have their first non-negligible
// entry of column 0 real positive. In dimension 2 two further redundancies
// exist and are fixed here:
//  * projection maps: (S, bits) and (S o sigma_y K, 1 - bits) are the same
//    map and the two differ in linearity; the linear representative is
//    returned, so complements always live in the bits.
//  * linear maps on Hermitian 2x2: (sign, S, F) and
//    (-sign, S o sigma_y K, F + sign I) are the same map; the representative
//    whose sign agrees with the sign of phi in L(I) = phi I is returned
//    (phi = 0 counts as positive).

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "commnorm/ensembles.hpp"
#include "commnorm/error.hpp"
#include "commnorm/matrix.hpp"
#include "commnorm/measures.hpp"
#include "commnorm/norms.hpp"
#include "commnorm/preservers.hpp"

namespace commnorm {

inline constexpr double kDecisionTol = 1e-8;
inline constexpr double kMarginFactor = 10.0;
inline constexpr double kValidationTol = 1e-7;

/// Black-box map on operators with a query counter. Safe for concurrent
/// queries when the wrapped callable is.
class Oracle {
 public:
  using Fn = std::function<CMat(const CMat&)>;

  explicit Oracle(Fn fn) : fn_(std::move(fn)) {}
  Oracle(const Oracle&) = delete;
  Oracle& operator=(const Oracle&) = delete;

  CMat query(const CMat& in) const {
    ++count_;
    return fn_(in);
  }

  std::size_t queries() const noexcept { return count_.load(); }
  void reset_count() noexcept { count_ = 0; }

 private:
  Fn fn_;
  mutable std::atomic<std::size_t> count_{0};
};

struct ProbeBit {
  CMat input;
  int bit = 0;
  double margin = 0.0;
};

struct ReconstructionResult {
  Symmetry sym;
  std::optional<int> sign;           // linear maps on Hermitians
  std::optional<CMat> functional;    // representer F of f
  std::vector<ProbeBit> bits;        // projection maps: per-probe complement bits
  double residual = 0.0;             // max Frobenius error on validation probes
  double margin = 0.0;               // smallest winning gap among branch decisions
  std::size_t queries = 0;           // oracle queries before validation
  std::size_t validation_count = 0;
};

// ---------------------------------------------------------------------------
// Anchors
// ---------------------------------------------------------------------------

inline const cplx kBranchProbePhase = std::polar(1.0, std::numbers::pi / 3);
inline const cplx kReprobePhase = std::polar(1.0, std::numbers::pi / 5);

struct Anchor {
  std::string name;
  Projection proj;
};

/// Inputs reconstruct_projection_symmetry queries before validation.
inline std::vector<Anchor> projection_anchors() {
  const double h = kInvSqrt2;
  return {
      {"P(1,0)", bloch_projection(0.0, 1.0)},
      {"P(1/sqrt2,1/sqrt2)", Projection::onto(CVec{h, h})},
      {"P(1/sqrt2,e^{i pi/3}/sqrt2)", Projection::onto(CVec{h, kBranchProbePhase * h})},
      {"P(cos pi/6,sin pi/6)", bloch_projection(std::numbers::pi / 6, 1.0)},
      {"P(cos pi/3,sin pi/3)", bloch_projection(std::numbers::pi / 3, 1.0)},
  };
}

/// Inputs reconstruct_wigner queries before validation in dimension n.
inline std::vector<Anchor> wigner_anchors(std::size_t n) {
  std::vector<Anchor> out;
  for (std::size_t j = 0; j < n; ++j) {
    out.push_back({"P(e" + std::to_string(j + 1) + ")", Projection::onto(basis_vector(n, j))});
  }
  for (std::size_t j = 1; j < n; ++j) {
    CVec v = basis_vector(n, 0);
    v[j] = 1.0;
    out.push_back({"P((e1+e" + std::to_string(j + 1) + ")/sqrt2)", Projection::onto(v)});
  }
  CVec v = basis_vector(n, 0);
  v[1] = kI;
  out.push_back({"P((e1+i e2)/sqrt2)", Projection::onto(v)});
  return out;
}

/// E11, E22, sigma_x and (0 i; -i 0): the basis the linear reconstructor reads.
inline std::array<CMat, 4> hermitian_basis_2d() {
  return {CMat{{1.0, 0.0}, {0.0, 0.0}}, CMat{{0.0, 0.0}, {0.0, 1.0}}, CMat{{0.0, 1.0}, {1.0, 0.0}},
          CMat{{0.0, kI}, {-kI, 0.0}}};
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

namespace detail {

inline double dist(const CMat& a, const CMat& b) { return frobenius_norm(a - b); }

inline Projection as_projection(const CMat& m, const char* what) {
  if (auto why = Projection::defect(m, 1e-8)) {
    throw NotAPreserver(what, "oracle output is not a rank-one projection: " + *why);
  }
  return Projection::from_matrix(m, 1e-8);
}

/// Unitary whose conjugation sends the projection onto `r` to diag(1, 0).
inline CMat rotate_to_north(const CVec& r) {
  const CVec perp{-std::conj(r[1]), std::conj(r[0])};
  CMat w(2);  // columns r, perp; return W*
  w(0, 0) = r[0];
  w(1, 0) = r[1];
  w(0, 1) = perp[0];
  w(1, 1) = perp[1];
  return adjoint(w);
}

struct Decision {
  bool first = true;  // whether the first candidate won
  double winner = 0.0;
  double margin = 0.0;
};

inline Decision decide(double first, double second, const std::string& what) {
  Decision d{first <= second, std::min(first, second), std::abs(first - second)};
  if (d.margin < kMarginFactor * kDecisionTol) {
    throw AmbiguousBranch(what + ": candidate residuals " + std::to_string(first) + " and " +
                          std::to_string(second) + " are within the decision margin");
  }
  return d;
}

inline void star_screen(const std::vector<std::pair<Projection, Projection>>& samples) {
  std::vector<ProjPairSample> pairs;
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j)
      pairs.push_back({samples[i].first, samples[j].first, samples[i].second, samples[j].second});
  const StarVerdict v = star_property_check(pairs, kDecisionTol);
  if (!v.pass) {
    throw NotAPreserver("property (*)", "worst pair margin " + std::to_string(v.worst) + " at pair " +
                                            std::to_string(v.worst_index));
  }
}

}  // namespace detail

/// The linear representative of a hidden projection preserver's symmetry.
inline Symmetry canonical_projection_symmetry(const Symmetry& s) {
  if (s.dim() == 2 && s.flag == Linearity::kConjugate) return normalize_phase(compose(s, complement_symmetry()));
  return normalize_phase(s);
}

/// Bit of the hidden preserver at `in`, expressed in the canonical gauge.
inline int canonical_bit(const ProjectionPreserver& hidden, const Projection& in) {
  return hidden.bit(in) ^ (hidden.sym.flag == Linearity::kConjugate ? 1 : 0);
}

/// Moves a hidden 2x2 linear preserver into the sign-of-phi gauge.
inline SelfAdjointPreserver canonical_linear_gauge(const SelfAdjointPreserver& p) {
  if (p.sym.dim() != 2) return {normalize_phase(p.sym), p.sign, p.functional};
  const double phi = static_cast<double>(p.sign) + trace(p.functional).real();
  const int want = phi >= 0.0 ? 1 : -1;
  if (want == p.sign) return {normalize_phase(p.sym), p.sign, p.functional};
  CMat f = p.functional + CMat::identity(2) * static_cast<double>(p.sign);
  return {normalize_phase(compose(p.sym, complement_symmetry())), -p.sign, std::move(f)};
}

// ---------------------------------------------------------------------------
// Projection preservers on P_1(C^2)
// ---------------------------------------------------------------------------

/// Recovers S and the complement bits of a map of the form P -> S(P) or
/// S(P^perp), following the normalization steps of the P_1(C^2) argument:
/// fix P_(1,0), then the equator point P_(1,1)/sqrt2, decide the
/// linear/conjugate branch on an equator probe, resolve the residual
/// pole-swapping ambiguity on two off-equator probes, then classify each
/// validation probe.
inline ReconstructionResult reconstruct_projection_symmetry(const Oracle& phi,
                                                            std::span<const Projection> validation) {
  using detail::dist;
  const std::size_t start = phi.queries();
  const auto anchors = projection_anchors();
  std::vector<std::pair<Projection, Projection>> seen;
  auto ask = [&](const Projection& p) {
    Projection img = detail::as_projection(phi.query(p.mat()), "projection map");
    if (img.dim() != 2) throw InputError("reconstruct_projection_symmetry: oracle output must be 2x2");
    seen.emplace_back(p, img);
    return img;
  };

  for (const auto& a : anchors) ask(a.proj);
  const std::size_t queries = phi.queries() - start;
  detail::star_screen(seen);

  const Projection& img_pole = seen[0].second;
  const Projection& img_equator = seen[1].second;

  // Step 1: conjugate phi(P_(1,0)) to diag(1, 0).
  const CMat u1 = detail::rotate_to_north(img_pole.vector());
  auto phi1 = [&](const Projection& img) { return u1 * img.mat() * adjoint(u1); };

  // Step 2: phi1(P_(1,1)/sqrt2) = P_(1, lambda0)/sqrt2; absorb diag(1, lambda0).
  const cplx m01 = phi1(img_equator)(0, 1);
  if (std::abs(std::abs(2.0 * m01) - 1.0) > 1e-6) {
    throw NotAPreserver("property (*)", "image of P(1/sqrt2,1/sqrt2) is not on the equator");
  }
  const cplx lambda0 = std::conj(m01) / std::abs(m01);
  const CMat d = CMat::diag({1.0, lambda0});
  auto phi2 = [&](const Projection& img) { return adjoint(d) * phi1(img) * d; };

  double margin = std::numeric_limits<double>::infinity();

  // Step 3: equator probe P_(1, sigma) lands in {P_(1, +-sigma)} (linear) or
  // {P_(1, +-conj sigma)} (conjugate-linear). In the second case the output
  // is conjugated, which leaves a map of the first kind.
  const double h = kInvSqrt2;
  const cplx sigma = kBranchProbePhase;
  auto proj = [](CVec v) { return Projection::onto(v).mat(); };
  const CMat probe3 = phi2(seen[2].second);
  const double r_lin = std::min(dist(probe3, proj({h, sigma * h})), dist(probe3, proj({h, -sigma * h})));
  const double r_conj = std::min(dist(probe3, proj({h, std::conj(sigma) * h})),
                                 dist(probe3, proj({h, -std::conj(sigma) * h})));
  const auto branch = detail::decide(r_lin, r_conj, "linear/conjugate-linear branch");
  if (branch.winner > 1e-6) {
    throw NotAPreserver("property (*)", "branch probe matches neither alternative");
  }
  margin = std::min(margin, branch.margin);
  const Linearity flag3 = branch.first ? Linearity::kLinear : Linearity::kConjugate;
  auto phi3 = [&](const Projection& img) {
    const CMat m = phi2(img);
    return flag3 == Linearity::kLinear ? m : entrywise_conj(m);
  };

  // Step 4: off-equator probes decide between fixing the poles (identity up
  // to complements) and swapping them (P -> conj(sigma_x P sigma_x)).
  const Symmetry swap_poles{pauli_x(), Linearity::kConjugate};
  std::optional<bool> keep_poles;
  for (std::size_t k : {3U, 4U}) {
    const Projection& in = seen[k].first;
    const CMat out = phi3(seen[k].second);
    const CMat in_perp = CMat::identity(2) - in.mat();
    const CMat sw = apply_symmetry(swap_poles, in.mat());
    const double r_keep = std::min(dist(out, in.mat()), dist(out, in_perp));
    const double r_swap = std::min(dist(out, sw), dist(out, CMat::identity(2) - sw));
    const auto dec = detail::decide(r_keep, r_swap, "pole-fixing/pole-swapping dichotomy");
    if (dec.winner > 1e-6) throw NotAPreserver("property (*)", "off-equator probe matches neither form");
    if (keep_poles && *keep_poles != dec.first) {
      throw NotAPreserver("property (*)", "off-equator probes disagree on the dichotomy");
    }
    keep_poles = dec.first;
    margin = std::min(margin, dec.margin);
  }

  // Assemble: phi(P) = W phi2(P) W* with W = U1* D; phi2 = K^b phi3; phi3 ~ T.
  Symmetry total{adjoint(u1) * d, Linearity::kLinear};
  if (flag3 == Linearity::kConjugate) total = compose(total, Symmetry::identity(2, Linearity::kConjugate));
  if (!*keep_poles) total = compose(total, swap_poles);

  total = canonical_projection_symmetry(total);

  ReconstructionResult res;
  res.sym = total;
  res.queries = queries;

  auto classify = [&](const Projection& in, const Projection& out) {
    const CMat keep = apply_symmetry(total, in.mat());
    const CMat flip = CMat::identity(2) - keep;
    const double r0 = dist(out.mat(), keep);
    const double r1 = dist(out.mat(), flip);
    const auto dec = detail::decide(r0, r1, "complement bit");
    margin = std::min(margin, dec.margin);
    res.bits.push_back({in.mat(), dec.first ? 0 : 1, dec.margin});
    return dec.winner;
  };
  for (const auto& [in, out] : seen) {
    const double r = classify(in, out);
    if (r > kValidationTol) throw NotAPreserver("canonical form", "anchor residual " + std::to_string(r));
  }

  std::vector<std::pair<Projection, Projection>> checked;
  for (const auto& p : validation) {
    const Projection out = detail::as_projection(phi.query(p.mat()), "projection map");
    res.residual = std::max(res.residual, classify(p, out));
    checked.emplace_back(p, out);
  }
  res.validation_count = validation.size();
  res.margin = margin;
  if (res.residual > kValidationTol) {
    throw NotAPreserver("canonical form", "validation residual " + std::to_string(res.residual));
  }
  return res;
}

inline ReconstructionResult reconstruct_projection_symmetry(const Oracle& phi, SeededRng& rng,
                                                            std::size_t validation_count = 128) {
  std::vector<Projection> v;
  v.reserve(validation_count);
  for (std::size_t i = 0; i < validation_count; ++i) v.push_back(random_projection(2, rng));
  return reconstruct_projection_symmetry(phi, v);
}

// ---------------------------------------------------------------------------
// Wigner-type maps on P_1(C^n)
// ---------------------------------------------------------------------------

/// Recovers S from a map of the form P -> S(P) on P_1(C^n), n >= 2, using
/// 3n - 2 queries at most (2n on the non-degenerate path).
inline ReconstructionResult reconstruct_wigner(const Oracle& phi, std::size_t n,
                                               std::span<const Projection> validation) {
  using detail::dist;
  if (n < 2) throw InputError("reconstruct_wigner: dimension must be >= 2");
  const std::size_t start = phi.queries();
  auto ask = [&](const CVec& v) {
    const CMat out = phi.query(Projection::onto(v).mat());
    if (out.dim() != n) throw InputError("reconstruct_wigner: oracle output has wrong dimension");
    if (auto why = Projection::defect(out, 1e-8)) {
      throw NotAPreserver("Uhlhorn form", "basis image is not a rank-one projection: " + *why);
    }
    return Projection::from_matrix(out, 1e-8);
  };

  std::vector<CVec> cols;
  for (std::size_t j = 0; j < n; ++j) cols.push_back(ask(basis_vector(n, j)).vector());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(inner(cols[i], cols[j])) > 1e-8) {
        throw NotAPreserver("Uhlhorn form", "images of basis projections are not mutually orthogonal");
      }

  // Relative phases from P_(e1+ej)/sqrt2 = (1/2) v v*, v = c1 u1 + cj uj:
  // u1* M uj = c1 conj(cj) / 2.
  std::vector<cplx> phase(n, 1.0);
  for (std::size_t j = 1; j < n; ++j) {
    CVec v = basis_vector(n, 0);
    v[j] = 1.0;
    const CMat m = ask(v).mat();
    const cplx r = 2.0 * inner(m * cols[j], cols[0]);  // 2 <M uj, u1> = 2 u1* M uj
    if (std::abs(std::abs(r) - 1.0) > 1e-6) {
      throw NotAPreserver("Uhlhorn form", "image of P((e1+e" + std::to_string(j + 1) +
                                              ")/sqrt2) is not the expected superposition");
    }
    phase[j] = std::conj(r) / std::abs(r);
  }
  CMat u(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) u(i, j) = phase[j] * cols[j][i];

  // Linearity from P_(e1 + zeta e2): linear keeps zeta, conjugate-linear
  // turns it into conj(zeta).
  double margin = std::numeric_limits<double>::infinity();
  std::optional<Linearity> flag;
  for (const cplx zeta : {kI, kReprobePhase}) {
    CVec v = basis_vector(n, 0);
    v[1] = zeta;
    const CMat m = ask(v).mat();
    const CVec u2 = u.column(1);
    const cplx kappa = std::conj(2.0 * inner(m * u2, cols[0]));
    const double d_lin = std::abs(kappa - zeta);
    const double d_conj = std::abs(kappa - std::conj(zeta));
    if (std::min(d_lin, d_conj) <= 1e-6 && std::abs(d_lin - d_conj) >= kMarginFactor * kDecisionTol) {
      flag = d_lin < d_conj ? Linearity::kLinear : Linearity::kConjugate;
      margin = std::abs(d_lin - d_conj);
      break;
    }
  }
  if (!flag) throw NotAPreserver("Uhlhorn form", "linearity probes are degenerate");

  ReconstructionResult res;
  res.sym = normalize_phase(Symmetry{u, *flag});
  res.queries = phi.queries() - start;
  res.margin = margin;
  for (const auto& p : validation) {
    const CMat out = phi.query(p.mat());
    res.residual = std::max(res.residual, dist(out, apply_symmetry(res.sym, p.mat())));
  }
  res.validation_count = validation.size();
  if (res.residual > kValidationTol) {
    throw NotAPreserver("Uhlhorn form", "validation residual " + std::to_string(res.residual));
  }
  return res;
}

inline ReconstructionResult reconstruct_wigner(const Oracle& phi, std::size_t n, SeededRng& rng,
                                               std::size_t validation_count = 128) {
  std::vector<Projection> v;
  for (std::size_t i = 0; i < validation_count; ++i) v.push_back(random_projection(n, rng));
  return reconstruct_wigner(phi, n, v);
}

// ---------------------------------------------------------------------------
// Linear maps on Hermitian 2x2 matrices
// ---------------------------------------------------------------------------

/// L(A) from the images of E11, E22, sigma_x, (0 i; -i 0):
/// A = (alpha, beta + i gamma; beta - i gamma, delta) maps to
/// alpha L11 + delta L22 + beta LX + gamma LY.
inline CMat linear_extension(const std::array<CMat, 4>& images, const CMat& a) {
  const double alpha = a(0, 0).real();
  const double delta = a(1, 1).real();
  const double beta = a(0, 1).real();
  const double gamma = a(0, 1).imag();
  return images[0] * alpha + images[1] * delta + images[2] * beta + images[3] * gamma;
}

/// Recovers (S, sign, F) with L(A) = sign S(A) + tr(FA) I from the basis
/// images, checking every constraint a commutator-norm preserver must meet.
/// `validation` pairs (A, L(A)) are compared against the recovered form.
inline ReconstructionResult reconstruct_selfadjoint_linear(
    const std::array<CMat, 4>& images, std::span<const std::pair<CMat, CMat>> validation) {
  constexpr double kTol = 1e-6;
  for (const auto& m : images) {
    if (m.dim() != 2) throw InputError("reconstruct_selfadjoint_linear: images must be 2x2");
    if (!is_hermitian(m, 1e-8)) throw InputError("reconstruct_selfadjoint_linear: images must be Hermitian");
  }
  const CMat l11 = hermitian_part(images[0]);
  const CMat l22 = hermitian_part(images[1]);
  const CMat lx = hermitian_part(images[2]);
  const CMat ly = hermitian_part(images[3]);

  const CMat li = l11 + l22;
  const double phi = trace(li).real() / 2.0;
  if (max_abs_entry(li - CMat::identity(2) * phi) > 1e-8) {
    throw NotAPreserver("scalar image of I", "L(E11) + L(E22) is not a multiple of I");
  }

  // Diagonalize L(E11): U L(E11) U* = diag(s, t).
  const HermEigen eig = herm_eigen(l11);
  const CMat u = adjoint(eig.vectors);
  const double s = eig.values[0];
  const double t = eig.values[1];
  const double gap = s - t;
  if (std::abs(std::abs(gap) - 1.0) > kTol) {
    throw NotAPreserver("s - t = +-1", "s - t = " + std::to_string(gap));
  }
  const CMat a3 = u * lx * adjoint(u);
  const CMat a4 = u * ly * adjoint(u);
  const double a = a3(0, 0).real(), dd = a3(1, 1).real();
  const double e = a4(0, 0).real(), hh = a4(1, 1).real();
  const cplx uu = a3(0, 1);
  const cplx w = a4(0, 1);

  const double expect = 1.0 / std::abs(gap);
  if (std::abs(std::abs(uu) - expect) > kTol || std::abs(std::abs(w) - expect) > kTol ||
      std::abs((std::conj(uu) * w).real()) > kTol) {
    throw NotAPreserver("isometry |u| = |w| = 1/|s - t|, u orthogonal to w",
                        "|u| = " + std::to_string(std::abs(uu)) + ", |w| = " + std::to_string(std::abs(w)));
  }
  if (std::abs(a - dd) > kTol) throw NotAPreserver("a = d", "a - d = " + std::to_string(a - dd));
  if (std::abs(e - hh) > kTol) throw NotAPreserver("e = h", "e - h = " + std::to_string(e - hh));

  // w = i u or w = -i u.
  const auto branch = detail::decide(std::abs(w - kI * uu), std::abs(w + kI * uu), "w = +-iu branch");
  const bool w_is_iu = branch.first;

  // With Q = (0 q; 1 0), sign Q A Q* + f(A) I has s - t = -sign, u = sign q
  // and w = -iu; the conjugate-linear sign Q conj(A) Q* + f(A) I has w = iu.
  const int sign = gap > 0 ? -1 : 1;
  CMat q{{0.0, uu * static_cast<double>(sign)}, {1.0, 0.0}};
  Symmetry inner_sym{std::move(q), w_is_iu ? Linearity::kConjugate : Linearity::kLinear};

  CMat f(2);
  f(0, 0) = s;
  f(1, 1) = phi - t;
  f(0, 1) = cplx{a, e} * 0.5;
  f(1, 0) = cplx{a, -e} * 0.5;

  SelfAdjointPreserver raw{compose(Symmetry{adjoint(u), Linearity::kLinear}, inner_sym), sign, f};
  const SelfAdjointPreserver canon = canonical_linear_gauge(raw);

  ReconstructionResult res;
  res.sym = canon.sym;
  res.sign = canon.sign;
  res.functional = canon.functional;
  res.margin = branch.margin;
  for (const auto& [in, out] : validation) {
    res.residual = std::max(res.residual, detail::dist(thm1_apply(canon, in), out));
  }
  res.validation_count = validation.size();
  if (res.residual > kValidationTol) {
    throw NotAPreserver("canonical form", "validation residual " + std::to_string(res.residual));
  }
  return res;
}

/// Oracle form: queries the four basis images, then validates on
/// `validation_count` random Hermitian inputs.
inline ReconstructionResult reconstruct_selfadjoint_linear(const Oracle& phi, SeededRng& rng,
                                                           std::size_t validation_count = 100) {
  const std::size_t start = phi.queries();
  std::array<CMat, 4> images;
  const auto basis = hermitian_basis_2d();
  for (std::size_t k = 0; k < 4; ++k) images[k] = phi.query(basis[k]);
  const std::size_t queries = phi.queries() - start;
  std::vector<std::pair<CMat, CMat>> validation;
  for (std::size_t i = 0; i < validation_count; ++i) {
    CMat a = random_hermitian(2, rng);
    CMat out = phi.query(a);
    validation.emplace_back(std::move(a), std::move(out));
  }
  ReconstructionResult res = reconstruct_selfadjoint_linear(images, validation);
  res.queries = queries;
  return res;
}

// ---------------------------------------------------------------------------
// Pairs of unitaries with equal commutator measures against all projections
// ---------------------------------------------------------------------------

struct UnitaryPairVerdict {
  enum class Kind { kScalarMultiple, kScalarMultipleOfAdjoint, kNeither };
  Kind kind = Kind::kNeither;
  cplx z{1.0, 0.0};
  double defect = 0.0;  // deviation of the tested product from a scalar
};

inline const char* to_string(UnitaryPairVerdict::Kind k) {
  switch (k) {
    case UnitaryPairVerdict::Kind::kScalarMultiple:
      return "scalar-multiple";
    case UnitaryPairVerdict::Kind::kScalarMultipleOfAdjoint:
      return "scalar-multiple-of-adjoint";
    default:
      return "neither";
  }
}

inline UnitaryPairVerdict classify_unitary_pair(const CMat& v1, const CMat& v2) {
  require_same_dim(v1, v2, "classify_unitary_pair");
  if (!is_unitary(v1, 1e-8) || !is_unitary(v2, 1e-8)) {
    throw InputError("classify_unitary_pair: inputs must be unitary");
  }
  const std::size_t n = v1.dim();
  auto scalar_test = [n](const CMat& m) {
    const cplx z = trace(m) / static_cast<double>(n);
    return std::pair{z, max_abs_entry(m - CMat::identity(n) * z)};
  };
  const auto [z1, d1] = scalar_test(v2 * adjoint(v1));
  if (d1 <= 1e-8) return {UnitaryPairVerdict::Kind::kScalarMultiple, z1 / std::abs(z1), d1};
  const auto [z2, d2] = scalar_test(v2 * v1);
  if (d2 <= 1e-8) return {UnitaryPairVerdict::Kind::kScalarMultipleOfAdjoint, z2 / std::abs(z2), d2};
  return {UnitaryPairVerdict::Kind::kNeither, {1.0, 0.0}, std::min(d1, d2)};
}

struct MeasureViolation {
  CVec x;
  double first = 0.0;   // |||[V1, x (x) x]|||
  double second = 0.0;  // |||[V2, x (x) x]|||
};

/// Searches a probe set (basis vectors, pairwise real and imaginary
/// superpositions, then random vectors up to `count` probes) for x with
/// |||[V1, P_x]||| != |||[V2, P_x]||| beyond 1e-8.
inline std::optional<MeasureViolation> find_measure_violation(const CMat& v1, const CMat& v2,
                                                              const NormSpec& spec, SeededRng& rng,
                                                              std::size_t count = 64) {
  const std::size_t n = v1.dim();
  const NormConstant nc = norm_constant(spec, n);
  std::vector<CVec> probes;
  for (std::size_t i = 0; i < n; ++i) probes.push_back(basis_vector(n, i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (const cplx ph : {cplx{1.0, 0.0}, kI}) {
        CVec v = basis_vector(n, i);
        v[j] = ph;
        probes.push_back(normalized(v));
      }
  while (probes.size() < count) probes.push_back(random_unit_vector(n, rng));
  for (auto& x : probes) {
    const double m1 = unitary_proj_measure(v1, x, nc);
    const double m2 = unitary_proj_measure(v2, x, nc);
    if (std::abs(m1 - m2) > 1e-8) return MeasureViolation{x, m1, m2};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Sampled probe sets
// ---------------------------------------------------------------------------

struct ProbeSet {
  enum class Kind { kProjectionMap, kHermitianLinearMap, kUnitaryPair, kDensityMap };
  Kind kind = Kind::kProjectionMap;
  std::size_t dim = 0;
  std::vector<std::pair<CMat, CMat>> samples;
};

inline const char* to_string(ProbeSet::Kind k) {
  switch (k) {
    case ProbeSet::Kind::kProjectionMap:
      return "projection-map";
    case ProbeSet::Kind::kHermitianLinearMap:
      return "hermitian-linear-map";
    case ProbeSet::Kind::kDensityMap:
      return "density-map";
    default:
      return "unitary-pair";
  }
}

inline ProbeSet::Kind parse_probe_kind(const std::string& s) {
  if (s == "projection-map") return ProbeSet::Kind::kProjectionMap;
  if (s == "hermitian-linear-map") return ProbeSet::Kind::kHermitianLinearMap;
  if (s == "unitary-pair") return ProbeSet::Kind::kUnitaryPair;
  if (s == "density-map") return ProbeSet::Kind::kDensityMap;
  throw InputError("unknown probe set kind '" + s + "'");
}

/// Checks every sample against its class invariants within 1e-8; errors name
/// the sample index and side.
inline void validate_probe_set(const ProbeSet& ps) {
  if (ps.dim < 1) throw InputError("probe set: dim must be >= 1");
  for (std::size_t i = 0; i < ps.samples.size(); ++i) {
    for (int side = 0; side < 2; ++side) {
      const CMat& m = side == 0 ? ps.samples[i].first : ps.samples[i].second;
      const std::string where = "sample " + std::to_string(i) + (side == 0 ? " input" : " output");
      if (m.dim() != ps.dim) throw InputError(where + ": dimension " + std::to_string(m.dim()) + " != " + std::to_string(ps.dim));
      if (!all_finite(m)) throw InputError(where + ": non-finite entry");
      switch (ps.kind) {
        case ProbeSet::Kind::kProjectionMap:
          if (auto why = Projection::defect(m, 1e-8)) throw InputError(where + ": " + *why);
          break;
        case ProbeSet::Kind::kHermitianLinearMap:
          if (!is_hermitian(m, 1e-8)) throw InputError(where + ": not Hermitian");
          break;
        case ProbeSet::Kind::kUnitaryPair:
          if (!is_unitary(m, 1e-8)) throw InputError(where + ": not unitary");
          break;
        case ProbeSet::Kind::kDensityMap:
          try {
            Density::from_matrix(m, 1e-8);
          } catch (const InputError& e) {
            throw InputError(where + ": " + e.what());
          }
          break;
      }
    }
  }
}

namespace detail {

/// Distance between probe inputs: Bloch distance for 2x2 projections,
/// Frobenius distance otherwise.
inline double input_distance(const ProbeSet& ps, const CMat& a, const CMat& b) {
  if (ps.kind == ProbeSet::Kind::kProjectionMap && ps.dim == 2) {
    return bloch_from_projection(Projection::from_matrix(a, 1e-8))
        .distance(bloch_from_projection(Projection::from_matrix(b, 1e-8)));
  }
  return frobenius_norm(a - b);
}

inline std::optional<std::size_t> find_sample(const ProbeSet& ps, const CMat& in) {
  for (std::size_t i = 0; i < ps.samples.size(); ++i) {
    if (input_distance(ps, ps.samples[i].first, in) <= 1e-6) return i;
  }
  return std::nullopt;
}

/// Duplicate inputs with different outputs make the sampled map ill defined.
inline void require_collision_free(const ProbeSet& ps) {
  for (std::size_t i = 0; i < ps.samples.size(); ++i)
    for (std::size_t j = i + 1; j < ps.samples.size(); ++j)
      if (input_distance(ps, ps.samples[i].first, ps.samples[j].first) <= 1e-6 &&
          frobenius_norm(ps.samples[i].second - ps.samples[j].second) > 1e-6) {
        throw InputError("probe set collision: samples " + std::to_string(i) + " and " + std::to_string(j) +
                         " share an input but disagree on the output");
      }
}

inline void require_anchors(const ProbeSet& ps, const std::vector<Anchor>& anchors) {
  std::string missing;
  for (const auto& a : anchors) {
    if (find_sample(ps, a.proj.mat())) continue;
    if (!missing.empty()) missing += ", ";
    missing += a.name;
    if (ps.dim == 2) {
      const BlochVec b = bloch_from_projection(a.proj);
      missing += " (Bloch " + std::to_string(b.x) + ", " + std::to_string(b.y) + ", " + std::to_string(b.z) + ")";
    }
  }
  if (!missing.empty()) throw MissingAnchors("probe set is missing required anchors: " + missing);
}

/// Serves queries from the stored samples.
inline Oracle::Fn lookup(const ProbeSet& ps) {
  return [&ps](const CMat& in) {
    const auto i = find_sample(ps, in);
    if (!i) throw MissingAnchors("probe set has no sample for a required input");
    return ps.samples[*i].second;
  };
}

inline std::vector<std::size_t> non_anchor_samples(const ProbeSet& ps, const std::vector<Anchor>& anchors) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ps.samples.size(); ++i) {
    bool is_anchor = false;
    for (const auto& a : anchors) is_anchor = is_anchor || input_distance(ps, ps.samples[i].first, a.proj.mat()) <= 1e-6;
    if (!is_anchor) out.push_back(i);
  }
  return out;
}

}  // namespace detail

/// Projection-map reconstruction from a file-style probe set; samples other
/// than the anchors become the validation set.
inline ReconstructionResult reconstruct_projection_symmetry(const ProbeSet& ps) {
  if (ps.kind != ProbeSet::Kind::kProjectionMap || ps.dim != 2) {
    throw InputError("reconstruct projection: needs a 2x2 projection-map probe set");
  }
  validate_probe_set(ps);
  detail::require_collision_free(ps);
  const auto anchors = projection_anchors();
  detail::require_anchors(ps, anchors);
  std::vector<Projection> validation;
  for (std::size_t i : detail::non_anchor_samples(ps, anchors)) {
    validation.push_back(Projection::from_matrix(ps.samples[i].first, 1e-8));
  }
  const Oracle phi(detail::lookup(ps));
  return reconstruct_projection_symmetry(phi, validation);
}

inline ReconstructionResult reconstruct_wigner(const ProbeSet& ps) {
  if (ps.kind != ProbeSet::Kind::kProjectionMap || ps.dim < 2) {
    throw InputError("reconstruct wigner: needs a projection-map probe set with dim >= 2");
  }
  validate_probe_set(ps);
  detail::require_collision_free(ps);
  auto anchors = wigner_anchors(ps.dim);
  detail::require_anchors(ps, anchors);
  CVec re = basis_vector(ps.dim, 0);
  re[1] = kReprobePhase;
  anchors.push_back({"P((e1+zeta e2)/sqrt2)", Projection::onto(re)});
  std::vector<Projection> validation;
  for (std::size_t i : detail::non_anchor_samples(ps, anchors)) {
    validation.push_back(Projection::from_matrix(ps.samples[i].first, 1e-8));
  }
  const Oracle phi(detail::lookup(ps));
  return reconstruct_wigner(phi, ps.dim, validation);
}

inline ReconstructionResult reconstruct_selfadjoint_linear(const ProbeSet& ps) {
  if (ps.kind != ProbeSet::Kind::kHermitianLinearMap || ps.dim != 2) {
    throw InputError("reconstruct linear: needs a 2x2 hermitian-linear-map probe set");
  }
  validate_probe_set(ps);
  detail::require_collision_free(ps);
  const auto basis = hermitian_basis_2d();
  std::array<CMat, 4> images;
  std::string missing;
  const char* names[] = {"E11", "E22", "(0 1; 1 0)", "(0 i; -i 0)"};
  std::vector<bool> used(ps.samples.size(), false);
  for (std::size_t k = 0; k < 4; ++k) {
    const auto i = detail::find_sample(ps, basis[k]);
    if (!i) {
      missing += missing.empty() ? names[k] : std::string(", ") + names[k];
      continue;
    }
    images[k] = ps.samples[*i].second;
    used[*i] = true;
  }
  if (!missing.empty()) throw MissingAnchors("probe set is missing required basis inputs: " + missing);
  std::vector<std::pair<CMat, CMat>> validation;
  for (std::size_t i = 0; i < ps.samples.size(); ++i)
    if (!used[i]) validation.push_back(ps.samples[i]);
  ReconstructionResult res = reconstruct_selfadjoint_linear(images, validation);
  res.queries = 4;
  return res;
}

}  // namespace commnorm
