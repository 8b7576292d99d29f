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

// Dense complex matrices for small dimensions (n <= ~16).
//
// Everything here is a pure function of its arguments. Storage is row-major.
// Vectors are plain std::vector<cplx>; the inner product <x, y> is linear in
// the first argument and conjugate-linear in the second.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "commnorm/error.hpp"

namespace commnorm {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

class CMat {
 public:
  CMat() = default;

  explicit CMat(std::size_t n) : n_(n), a_(n * n, cplx{0.0, 0.0}) {}

  CMat(std::initializer_list<std::initializer_list<cplx>> rows) : n_(rows.size()) {
    a_.reserve(n_ * n_);
    for (const auto& row : rows) {
      if (row.size() != n_) throw InputError("CMat: rows must form a square array");
      a_.insert(a_.end(), row.begin(), row.end());
    }
  }

  static CMat identity(std::size_t n) {
    CMat m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static CMat diag(std::span<const cplx> d) {
    CMat m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static CMat diag(std::initializer_list<cplx> d) {
    return diag(std::span<const cplx>(d.begin(), d.size()));
  }

  std::size_t dim() const noexcept { return n_; }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * n_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * n_ + j]; }

  std::span<cplx> data() noexcept { return a_; }
  std::span<const cplx> data() const noexcept { return a_; }

  CVec column(std::size_t j) const {
    CVec c(n_);
    for (std::size_t i = 0; i < n_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  void set_column(std::size_t j, std::span<const cplx> c) {
    for (std::size_t i = 0; i < n_; ++i) (*this)(i, j) = c[i];
  }

  CMat& operator+=(const CMat& o) {
    require_same(o, "add");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  CMat& operator-=(const CMat& o) {
    require_same(o, "subtract");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  CMat& operator*=(cplx s) {
    for (auto& x : a_) x *= s;
    return *this;
  }

  friend CMat operator+(CMat a, const CMat& b) { return a += b; }
  friend CMat operator-(CMat a, const CMat& b) { return a -= b; }
  friend CMat operator-(CMat a) { return a *= -1.0; }
  friend CMat operator*(CMat a, cplx s) { return a *= s; }
  friend CMat operator*(cplx s, CMat a) { return a *= s; }
  friend CMat operator*(CMat a, double s) { return a *= cplx{s, 0.0}; }
  friend CMat operator*(double s, CMat a) { return a *= cplx{s, 0.0}; }

  friend CMat operator*(const CMat& a, const CMat& b) {
    a.require_same(b, "multiply");
    const std::size_t n = a.n_;
    CMat c(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
      }
    }
    return c;
  }

  friend CVec operator*(const CMat& a, std::span<const cplx> x) {
    if (x.size() != a.n_) throw InputError("matrix-vector product: dimension mismatch");
    CVec y(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i) {
      cplx s{};
      for (std::size_t j = 0; j < a.n_; ++j) s += a(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  friend bool operator==(const CMat&, const CMat&) = default;

 private:
  void require_same(const CMat& o, const char* what) const {
    if (o.n_ != n_) {
      throw InputError(std::string(what) + ": dimension mismatch (" + std::to_string(n_) +
                       " vs " + std::to_string(o.n_) + ")");
    }
  }

  std::size_t n_ = 0;
  std::vector<cplx> a_;
};

inline void require_same_dim(const CMat& a, const CMat& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw InputError(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                     " vs " + std::to_string(b.dim()) + ")");
  }
}

// ---------------------------------------------------------------------------
// Elementwise and structural operations
// ---------------------------------------------------------------------------

inline CMat adjoint(const CMat& a) {
  CMat r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) r(j, i) = std::conj(a(i, j));
  return r;
}

inline CMat transpose(const CMat& a) {
  CMat r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) r(j, i) = a(i, j);
  return r;
}

/// Entrywise complex conjugate in the standard basis.
inline CMat entrywise_conj(const CMat& a) {
  CMat r = a;
  for (auto& x : r.data()) x = std::conj(x);
  return r;
}

inline cplx trace(const CMat& a) {
  cplx s{};
  for (std::size_t i = 0; i < a.dim(); ++i) s += a(i, i);
  return s;
}

/// AB - BA.
inline CMat commutator(const CMat& a, const CMat& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

inline double frobenius_norm(const CMat& a) {
  double s = 0.0;
  for (const auto& x : a.data()) s += std::norm(x);
  return std::sqrt(s);
}

inline double max_abs_entry(const CMat& a) {
  double m = 0.0;
  for (const auto& x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

inline bool all_finite(const CMat& a) {
  return std::all_of(a.data().begin(), a.data().end(),
                     [](const cplx& x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
}

inline double hermitian_tolerance(const CMat& a) {
  return 1e-10 * std::max(1.0, frobenius_norm(a));
}

/// Max entrywise deviation |A - A*|.
inline double hermitian_defect(const CMat& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
  return m;
}

inline bool is_hermitian(const CMat& a, double tol) { return hermitian_defect(a) <= tol; }
inline bool is_hermitian(const CMat& a) { return is_hermitian(a, hermitian_tolerance(a)); }

inline double unitary_defect(const CMat& u) {
  return max_abs_entry(adjoint(u) * u - CMat::identity(u.dim()));
}

inline bool is_unitary(const CMat& u, double tol = 1e-8) { return unitary_defect(u) <= tol; }

/// Exact symmetrization (A + A*)/2, used after round-off-prone arithmetic.
inline CMat hermitian_part(const CMat& a) { return (a + adjoint(a)) * 0.5; }

// ---------------------------------------------------------------------------
// Vectors
// ---------------------------------------------------------------------------

/// <x, y> = sum_i x_i conj(y_i).
inline cplx inner(std::span<const cplx> x, std::span<const cplx> y) {
  if (x.size() != y.size()) throw InputError("inner product: dimension mismatch");
  cplx s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

inline double vec_norm(std::span<const cplx> x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

inline CVec normalized(std::span<const cplx> x) {
  const double nrm = vec_norm(x);
  if (!(nrm > 0.0)) throw InputError("cannot normalize a zero vector");
  CVec r(x.begin(), x.end());
  for (auto& v : r) v /= nrm;
  return r;
}

inline CVec basis_vector(std::size_t n, std::size_t j) {
  CVec e(n, cplx{});
  e.at(j) = 1.0;
  return e;
}

/// Rotates the global phase so that the first coordinate with modulus above
/// `floor` is real and positive.
inline CVec fix_phase(CVec x, double floor = 1e-8) {
  for (const auto& v : x) {
    if (std::abs(v) > floor) {
      const cplx ph = std::conj(v) / std::abs(v);
      for (auto& w : x) w *= ph;
      break;
    }
  }
  return x;
}

/// The operator y -> <y, v> u, i.e. M[i][j] = u[i] conj(v[j]).
inline CMat rank_one(std::span<const cplx> u, std::span<const cplx> v) {
  if (u.size() != v.size()) throw InputError("rank_one: dimension mismatch");
  CMat m(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
  return m;
}

// ---------------------------------------------------------------------------
// Determinant
// ---------------------------------------------------------------------------

/// Cofactor expansion for n <= 3, LU with partial pivoting otherwise.
inline cplx det(const CMat& a) {
  const std::size_t n = a.dim();
  if (n == 0) return 1.0;
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  if (n == 3) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  }
  CMat lu = a;
  cplx d = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    if (lu(piv, k) == cplx{}) return 0.0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      d = -d;
    }
    d *= lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = lu(i, k) / lu(k, k);
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition (cyclic Jacobi)
// ---------------------------------------------------------------------------

struct HermEigen {
  std::vector<double> values;  // descending
  CMat vectors;                // column k belongs to values[k]
};

/// A = V diag(values) V*. Throws InputError for non-Hermitian input and
/// ConsistencyError if 100 sweeps do not reach off-diagonal mass below
/// 1e-14 * |A|_F.
inline HermEigen herm_eigen(const CMat& input) {
  if (!is_hermitian(input)) {
    throw InputError("herm_eigen: input is not Hermitian (defect " +
                     std::to_string(hermitian_defect(input)) + ")");
  }
  const std::size_t n = input.dim();
  CMat a = hermitian_part(input);
  CMat v = CMat::identity(n);
  const double scale = frobenius_norm(a);
  const double target = 1e-14 * scale;

  auto off_mass = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  bool converged = scale == 0.0 || off_mass() <= target;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        // Phase e^{-i arg apq} on coordinate q turns the 2x2 block real
        // symmetric; then an ordinary Jacobi rotation zeroes it.
        const cplx z = std::conj(apq) / r;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // J = identity except J_pp = c, J_pq = s, J_qp = -s z, J_qq = c z.
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q) * z;
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k) * std::conj(z);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q) * z;
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    converged = off_mass() <= target;
  }
  if (!converged) throw ConsistencyError("herm_eigen: Jacobi did not converge in 100 sweeps");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
  HermEigen out{std::vector<double>(n), CMat(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

/// Eigenvector of the largest eigenvalue, phase-normalized so that its first
/// non-negligible coordinate is real positive.
inline CVec top_eigenvector(const CMat& hermitian) {
  return fix_phase(herm_eigen(hermitian).vectors.column(0));
}

/// lambda_max - lambda_min.
inline double spectral_diameter(const CMat& hermitian) {
  const auto vals = herm_eigen(hermitian).values;
  return vals.front() - vals.back();
}

// ---------------------------------------------------------------------------
// Singular values (one-sided Jacobi)
// ---------------------------------------------------------------------------

/// Descending singular values. One-sided Jacobi orthogonalizes the columns
/// of A directly, so zero singular values come out at the eps*|A| level.
inline std::vector<double> singular_values(const CMat& input) {
  const std::size_t n = input.dim();
  CMat a = input;
  constexpr double kTol = 1e-15;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        cplx gamma{};
        for (std::size_t k = 0; k < n; ++k) {
          alpha += std::norm(a(k, p));
          beta += std::norm(a(k, q));
          gamma += std::conj(a(k, p)) * a(k, q);
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kTol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const cplx ph = std::conj(gamma) / g;  // column q times ph makes gamma real
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx xp = a(k, p);
          const cplx xq = a(k, q) * ph;
          a(k, p) = c * xp - s * xq;
          a(k, q) = s * xp + c * xq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += std::norm(a(k, j));
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

}  // namespace commnorm
