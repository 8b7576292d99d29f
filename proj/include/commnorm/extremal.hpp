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

// theta(V) = sup_W |||[V, W]||| over 2x2 unitaries and
// omega(A) = sup_B |||[A, B]||| over densities: closed forms and
// sampling-plus-ascent estimates of the suprema.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "commnorm/ensembles.hpp"
#include "commnorm/error.hpp"
#include "commnorm/matrix.hpp"
#include "commnorm/measures.hpp"
#include "commnorm/norms.hpp"

namespace commnorm {

inline constexpr std::size_t kMinBudget = 100;

struct SupEstimate {
  double value = 0.0;
  CMat witness;  // W for theta, the projection onto x for omega
  CVec witness_vector;  // omega only
  std::size_t samples = 0;
  std::size_t iterations = 0;
};

inline double diam_spectrum(const CMat& a) {
  if (!is_hermitian(a)) throw InputError("diam_spectrum: input is not Hermitian");
  return spectral_diameter(a);
}

inline double theta_closed(const CMat& v, const NormConstant& nc) {
  if (v.dim() != 2) throw InputError("theta_closed: operator must be 2x2");
  if (!is_unitary(v, 1e-8)) throw InputError("theta_closed: operator is not unitary");
  const double t = std::norm(trace(v));
  return nc.c * std::sqrt(std::max(0.0, 4.0 - t));
}

inline double theta_closed(const CMat& v, const NormSpec& spec) { return theta_closed(v, norm_constant(spec, 2)); }

inline double omega_closed(const Density& a, const NormConstant& nc) {
  return 0.5 * nc.c * diam_spectrum(a.mat());
}

inline double omega_closed(const Density& a, const NormSpec& spec) {
  return omega_closed(a, norm_constant(spec, a.dim()));
}

namespace detail {

inline constexpr std::size_t kChunk = 1024;

/// Maximizes f over two angles by compass search: try +-h on each
/// coordinate, halve h when nothing improves.
inline std::size_t compass_ascent(const std::function<double(double, double)>& f, double& a, double& b,
                                  double& best, double h = 0.5) {
  std::size_t iters = 0;
  while (h > 1e-10 && iters < 2000) {
    ++iters;
    bool moved = false;
    for (int coord = 0; coord < 2; ++coord) {
      for (double dir : {1.0, -1.0}) {
        const double na = coord == 0 ? a + dir * h : a;
        const double nb = coord == 1 ? b + dir * h : b;
        const double val = f(na, nb);
        if (val > best) {
          best = val;
          a = na;
          b = nb;
          moved = true;
        }
      }
    }
    if (!moved) h *= 0.5;
  }
  return iters;
}

inline BlochVec bloch_from_angles(double polar, double azimuth) {
  return {std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth), std::cos(polar)};
}

}  // namespace detail

/// Lower bounds on theta(V), one per spec: max over `budget` Haar unitaries
/// (singular values computed once per sample), then compass ascent over
/// trace-zero W = 2P - I in Bloch angles of P, started at the axis of the
/// spec's best sample.
inline std::vector<SupEstimate> theta_oracle(const CMat& v, std::span<const NormSpec> specs, std::size_t budget,
                                             SeededRng& rng) {
  if (v.dim() != 2) throw InputError("theta_oracle: operator must be 2x2");
  if (!is_unitary(v, 1e-8)) throw InputError("theta_oracle: operator is not unitary");
  if (budget < kMinBudget) throw InputError("theta_oracle: budget must be >= 100");
  for (const auto& spec : specs) gauge(std::vector<double>(2, 0.0), spec);  // validates kyfan order
  const std::uint64_t master = rng.next_u64();
  std::vector<SupEstimate> est(specs.size());
  for (auto& e : est) {
    e.value = -1.0;
    e.samples = budget;
  }
  for (std::size_t chunk = 0; chunk * detail::kChunk < budget; ++chunk) {
    SeededRng local(derive_seed(master, chunk));
    const std::size_t end = std::min(budget, (chunk + 1) * detail::kChunk);
    for (std::size_t i = chunk * detail::kChunk; i < end; ++i) {
      const CMat w = haar_unitary(2, local);
      const auto sv = singular_values(commutator(v, w));
      for (std::size_t k = 0; k < specs.size(); ++k) {
        const double val = gauge(sv, specs[k]);
        if (val > est[k].value) {
          est[k].value = val;
          est[k].witness = w;
        }
      }
    }
  }

  auto trace_zero = [](double a, double b) {
    return projection_from_bloch(detail::bloch_from_angles(a, b)).mat() * 2.0 - CMat::identity(2);
  };
  for (std::size_t k = 0; k < specs.size(); ++k) {
    // Axis of the best sample: det-normalized W = a0 I + i b . sigma.
    const CMat& w = est[k].witness;
    const CMat su = w * std::conj(std::sqrt(det(w)));
    const double bx = (-kI * trace(su * pauli_x()) * 0.5).real();
    const double by = (-kI * trace(su * pauli_y()) * 0.5).real();
    const double bz = (-kI * trace(su * pauli_z()) * 0.5).real();
    const double bn = std::sqrt(bx * bx + by * by + bz * bz);
    double polar = 0.0, azimuth = 0.0;
    if (bn > 1e-12) {
      polar = std::acos(std::clamp(bz / bn, -1.0, 1.0));
      azimuth = std::atan2(by, bx);
    }
    const NormSpec& spec = specs[k];
    auto f = [&](double a, double b) { return comm_measure(v, trace_zero(a, b), spec); };
    double best = f(polar, azimuth);
    est[k].iterations = detail::compass_ascent(f, polar, azimuth, best);
    if (best > est[k].value) {
      est[k].value = best;
      est[k].witness = trace_zero(polar, azimuth);
    }
  }
  return est;
}

inline SupEstimate theta_oracle(const CMat& v, const NormSpec& spec, std::size_t budget, SeededRng& rng) {
  return theta_oracle(v, std::span<const NormSpec>(&spec, 1), budget, rng).front();
}

/// Lower bounds on omega(A), one per spec: max over `budget` random unit
/// vectors, then compass ascent over x = cos t v_max + e^{i s} sin t v_min
/// from t = pi/4.
inline std::vector<SupEstimate> omega_oracle(const Density& a, std::span<const NormSpec> specs, std::size_t budget,
                                             SeededRng& rng) {
  if (budget < kMinBudget) throw InputError("omega_oracle: budget must be >= 100");
  const std::size_t n = a.dim();
  if (n < 2) throw InputError("omega_oracle: dimension must be >= 2");
  for (const auto& spec : specs) gauge(std::vector<double>(n, 0.0), spec);
  const std::uint64_t master = rng.next_u64();
  std::vector<SupEstimate> est(specs.size());
  for (auto& e : est) {
    e.value = -1.0;
    e.samples = budget;
  }
  for (std::size_t chunk = 0; chunk * detail::kChunk < budget; ++chunk) {
    SeededRng local(derive_seed(master, chunk));
    const std::size_t end = std::min(budget, (chunk + 1) * detail::kChunk);
    for (std::size_t i = chunk * detail::kChunk; i < end; ++i) {
      const CVec x = random_unit_vector(n, local);
      const auto sv = singular_values(commutator(a.mat(), Projection::onto(x).mat()));
      for (std::size_t k = 0; k < specs.size(); ++k) {
        const double val = gauge(sv, specs[k]);
        if (val > est[k].value) {
          est[k].value = val;
          est[k].witness_vector = x;
        }
      }
    }
  }

  const HermEigen eig = herm_eigen(a.mat());
  const CVec vmax = eig.vectors.column(0);
  const CVec vmin = eig.vectors.column(n - 1);
  auto vec = [&](double t, double s) {
    CVec x(n);
    const cplx ph = std::polar(1.0, s);
    for (std::size_t i = 0; i < n; ++i) x[i] = std::cos(t) * vmax[i] + ph * std::sin(t) * vmin[i];
    return normalized(x);
  };
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const NormSpec& spec = specs[k];
    auto f = [&](double t, double s) { return comm_measure(a.mat(), Projection::onto(vec(t, s)).mat(), spec); };
    double t = std::numbers::pi / 4, s = 0.0;
    double best = f(t, s);
    est[k].iterations = detail::compass_ascent(f, t, s, best, 0.25);
    if (best > est[k].value) {
      est[k].value = best;
      est[k].witness_vector = vec(t, s);
    }
    est[k].witness = Projection::onto(est[k].witness_vector).mat();
  }
  return est;
}

inline SupEstimate omega_oracle(const Density& a, const NormSpec& spec, std::size_t budget, SeededRng& rng) {
  return omega_oracle(a, std::span<const NormSpec>(&spec, 1), budget, rng).front();
}

}  // namespace commnorm
