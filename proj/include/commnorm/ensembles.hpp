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

// Seeded random ensembles and the Bloch-sphere picture of P_1(C^2).
//
// Random bits come from std::mt19937_64, whose output sequence is fixed by
// the C++ standard. Per-task generators are derived from a master seed by
//
//   derive_seed(master, task) = splitmix64(master ^ splitmix64(task))
//
// where splitmix64 is the finalizer of Steele, Lea and Flood's SplitMix64:
//
//   z += 0x9E3779B97F4A7C15
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// Uniform reals use the top 53 bits; Gaussians use Box-Muller. Library
// distributions (std::normal_distribution etc.) are not used because their
// algorithms are implementation-defined.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "commnorm/matrix.hpp"
#include "commnorm/measures.hpp"

namespace commnorm {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t task) {
  return splitmix64(master ^ splitmix64(task));
}

/// Single-owner generator. Copying forks the stream; prefer `derive`.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Independent generator for sub-task `task`.
  SeededRng derive(std::uint64_t task) const { return SeededRng(derive_seed(seed_, task)); }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

  int bit() { return static_cast<int>(engine_() >> 63); }

  /// Standard normal.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

  /// Complex Gaussian with E|z|^2 = 1.
  cplx complex_normal() {
    const double re = normal();
    const double im = normal();
    return cplx{re, im} * kInvSqrt2;
  }

  /// Uniform on the unit circle.
  cplx phase() { return std::polar(1.0, 2.0 * std::numbers::pi * uniform()); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline CMat ginibre(std::size_t n, SeededRng& rng) {
  CMat g(n);
  for (auto& x : g.data()) x = rng.complex_normal();
  return g;
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the diagonal of R
/// made real positive. Modified Gram-Schmidt with one reorthogonalization
/// pass produces that normalization directly.
inline CMat haar_unitary(std::size_t n, SeededRng& rng) {
  if (n < 1) throw InputError("haar_unitary: dimension must be >= 1");
  CMat q = ginibre(n, rng);
  for (std::size_t j = 0; j < n; ++j) {
    CVec col = q.column(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        const CVec qk = q.column(k);
        const cplx r = inner(col, qk);  // <col, q_k>
        for (std::size_t i = 0; i < n; ++i) col[i] -= r * qk[i];
      }
    }
    q.set_column(j, normalized(col));
  }
  return q;
}

inline CVec random_unit_vector(std::size_t n, SeededRng& rng) {
  CVec x(n);
  for (auto& v : x) v = rng.complex_normal();
  return normalized(x);
}

inline Projection random_projection(std::size_t n, SeededRng& rng) {
  if (n < 2) throw InputError("random_projection: dimension must be >= 2");
  return Projection::onto(random_unit_vector(n, rng));
}

/// Hilbert-Schmidt ensemble GG* / tr(GG*).
inline Density random_density(std::size_t n, SeededRng& rng) {
  if (n < 1) throw InputError("random_density: dimension must be >= 1");
  const CMat g = ginibre(n, rng);
  CMat m = g * adjoint(g);
  m *= 1.0 / trace(m).real();
  return Density::from_matrix(hermitian_part(m));
}

/// (G + G*) / 2.
inline CMat random_hermitian(std::size_t n, SeededRng& rng) {
  if (n < 1) throw InputError("random_hermitian: dimension must be >= 1");
  return hermitian_part(ginibre(n, rng));
}

// ---------------------------------------------------------------------------
// Bloch sphere. Pauli order (sigma_x, sigma_y, sigma_z) with
// sigma_y = (0 -i; i 0); P = (I + n . sigma) / 2.
// ---------------------------------------------------------------------------

inline CMat pauli_x() { return CMat{{0.0, 1.0}, {1.0, 0.0}}; }
inline CMat pauli_y() { return CMat{{0.0, -kI}, {kI, 0.0}}; }
inline CMat pauli_z() { return CMat{{1.0, 0.0}, {0.0, -1.0}}; }

struct BlochVec {
  double x = 0.0, y = 0.0, z = 1.0;

  double dot(const BlochVec& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
  BlochVec operator-() const { return {-x, -y, -z}; }
  double distance(const BlochVec& o) const {
    return std::sqrt((x - o.x) * (x - o.x) + (y - o.y) * (y - o.y) + (z - o.z) * (z - o.z));
  }
};

inline BlochVec bloch_from_projection(const Projection& p) {
  if (p.dim() != 2) throw InputError("bloch_from_projection: projection must be 2x2");
  const CMat& m = p.mat();
  return BlochVec{2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

inline Projection projection_from_bloch(const BlochVec& n) {
  const double len = n.norm();
  if (std::abs(len - 1.0) > 1e-10) throw InputError("projection_from_bloch: vector is not of unit length");
  const CMat m = (CMat::identity(2) + n.x * pauli_x() + n.y * pauli_y() + n.z * pauli_z()) * 0.5;
  return Projection::from_matrix(m);
}

/// P_{(cos t, lambda sin t)} for t in [0, pi/2] and |lambda| = 1.
inline Projection bloch_projection(double t, cplx lambda) {
  if (!(t >= 0.0 && t <= std::numbers::pi / 2)) {
    throw InputError("bloch_projection: t must lie in [0, pi/2]");
  }
  if (std::abs(std::abs(lambda) - 1.0) > 1e-12) {
    throw InputError("bloch_projection: lambda must have unit modulus");
  }
  const CVec u{std::cos(t), lambda * std::sin(t)};
  return Projection::onto(u);
}

}  // namespace commnorm
