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

// Seeded invariant suites and their reports.
//
// Every check draws from its own generator, derived from the master seed and
// a hash of the check's family name, and every trial from a generator derived
// from that one by trial index. Reports therefore do not depend on which
// suites ran or in what order.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "commnorm/ensembles.hpp"
#include "commnorm/error.hpp"
#include "commnorm/extremal.hpp"
#include "commnorm/json_io.hpp"
#include "commnorm/matrix.hpp"
#include "commnorm/measures.hpp"
#include "commnorm/norms.hpp"
#include "commnorm/preservers.hpp"
#include "commnorm/reconstruct.hpp"

namespace commnorm {

struct VerifyConfig {
  std::vector<NormSpec> norms = default_norm_grid();
  std::size_t trials = 1000;
  std::size_t dim_lo = 2;
  std::size_t dim_hi = 5;
  std::uint64_t seed = 42;
  double c_scale = 1.0;  // test hook: scales every norm constant fed to a closed form
  std::size_t extremal_instances = 100;
  std::size_t extremal_budget = 20000;
  std::size_t roundtrip_reps = 50;
  std::size_t lemma_pairs = 100;
};

struct CheckRecord {
  std::string name;
  std::string status;  // pass, fail, error
  double worst = 0.0;
  double tolerance = 0.0;
  std::size_t trials = 0;
  std::string witness;
};

struct Report {
  std::string suite;
  VerifyConfig config;
  std::vector<CheckRecord> checks;
  double duration_ms = 0.0;

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.status == "pass"; });
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"all",   "det2d",     "mcd",         "mcp",  "star",
                                               "preservers", "extremal", "norms", "reconstruct", "lemma"};
  return names;
}

inline void validate_config(const VerifyConfig& cfg) {
  if (cfg.norms.empty()) throw InputError("norm grid is empty");
  if (cfg.trials < 1) throw InputError("trials must be >= 1");
  if (cfg.dim_lo < 2 || cfg.dim_hi < cfg.dim_lo) throw InputError("dims must satisfy 2 <= lo <= hi");
  if (cfg.dim_hi > 16) throw InputError("dims above 16 are not supported");
  for (const auto& spec : cfg.norms) {
    if (spec.kind == NormSpec::Kind::kKyFan && spec.k > cfg.dim_hi) {
      throw InputError("norm " + spec.to_string() + " needs dimension >= " + std::to_string(spec.k) +
                       " but dims end at " + std::to_string(cfg.dim_hi));
    }
  }
}

namespace detail {

inline std::uint64_t name_hash(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline bool applicable(const NormSpec& spec, std::size_t n) {
  return spec.kind != NormSpec::Kind::kKyFan || spec.k <= n;
}

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

/// Running worst-case of one check.
class Tracker {
 public:
  Tracker(std::string name, double tol) : name_(std::move(name)), tol_(tol) {}

  void observe(double err, std::size_t trial, const std::string& detail = {}) {
    ++trials_;
    if (trials_ == 1 || err > worst_ || (std::isnan(err) && !std::isnan(worst_))) {
      worst_ = err;
      witness_ = "trial " + std::to_string(trial) + (detail.empty() ? "" : ": " + detail);
    }
  }

  void fail_with(const std::string& msg) { error_ = msg; }

  CheckRecord record() const {
    CheckRecord r{name_, "pass", trials_ ? worst_ : 0.0, tol_, trials_, witness_};
    if (!error_.empty()) {
      r.status = "error";
      r.witness = error_;
    } else if (trials_ == 0) {
      r.status = "error";
      r.witness = "no trials evaluated";
    } else if (!(worst_ <= tol_)) {
      r.status = "fail";
    }
    return r;
  }

 private:
  std::string name_;
  double tol_;
  double worst_ = 0.0;
  std::size_t trials_ = 0;
  std::string witness_;
  std::string error_;
};

class Suite {
 public:
  explicit Suite(const VerifyConfig& cfg) : cfg_(cfg) {}

  const VerifyConfig& cfg() const { return cfg_; }

  SeededRng rng(std::string_view family) const { return SeededRng(derive_seed(cfg_.seed, name_hash(family))); }

  std::size_t dim_for(std::size_t trial) const { return cfg_.dim_lo + trial % (cfg_.dim_hi - cfg_.dim_lo + 1); }

  NormConstant constant(const NormSpec& spec, std::size_t n) const {
    NormConstant nc = norm_constant(spec, n);
    nc.c *= cfg_.c_scale;
    return nc;
  }

  /// Runs `body` with trackers for every name; an exception turns all of them into errors.
  void run(std::vector<Tracker>& trackers, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      for (auto& t : trackers) t.fail_with(std::string("exception: ") + e.what());
    }
    for (const auto& t : trackers) records_.push_back(t.record());
  }

  std::vector<Tracker> per_norm(const std::string& prefix, double tol) const {
    std::vector<Tracker> out;
    for (const auto& spec : cfg_.norms) out.emplace_back(prefix + "[" + spec.to_string() + "]", tol);
    return out;
  }

  std::vector<CheckRecord> take() { return std::move(records_); }

 private:
  const VerifyConfig& cfg_;
  std::vector<CheckRecord> records_;
};

inline CMat random_unit_n_element(std::size_t n, SeededRng& rng) {
  const CMat u = haar_unitary(n, rng);
  std::vector<cplx> d(n, cplx{});
  d[0] = 1.0;
  d[1] = -1.0;
  return hermitian_part(u * CMat::diag(d) * adjoint(u));
}

/// Mixes a density toward I/n so that lambda_max <= 2/n, which keeps the
/// complement branch (2/n) I - S(A) inside the state space.
inline Density complement_safe_density(std::size_t n, SeededRng& rng) {
  const Density a = random_density(n, rng);
  if (n == 2) return a;
  const double s = static_cast<double>(n - 2) / static_cast<double>(n - 1);
  const CMat m = a.mat() * (1.0 - s) + CMat::identity(n) * (s / static_cast<double>(n));
  return Density::from_matrix(m, 1e-9);
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

inline void suite_norms(Suite& s) {
  const auto& cfg = s.cfg();
  {
    auto tr = s.per_norm("norms.constant", 1e-10);
    s.run(tr, [&] {
      SeededRng base = s.rng("norms.constant");
      for (std::size_t i = 0; i < cfg.trials; ++i) {
        SeededRng rng = base.derive(i);
        const std::size_t n = s.dim_for(i);
        const auto sv = singular_values(random_unit_n_element(n, rng));
        for (std::size_t k = 0; k < cfg.norms.size(); ++k) {
          if (!applicable(cfg.norms[k], n)) continue;
          tr[k].observe(std::abs(gauge(sv, cfg.norms[k]) - s.constant(cfg.norms[k], n).c), i, "n=" + std::to_string(n));
        }
      }
    });
  }
  {
    auto tr = s.per_norm("norms.unitary_invariance", 1e-10);
    s.run(tr, [&] {
      SeededRng base = s.rng("norms.unitary_invariance");
      for (std::size_t i = 0; i < cfg.trials; ++i) {
        SeededRng rng = base.derive(i);
        const std::size_t n = s.dim_for(i);
        const CMat a = ginibre(n, rng);
        const CMat b = haar_unitary(n, rng) * a * haar_unitary(n, rng);
        const auto sa = singular_values(a);
        const auto sb = singular_values(b);
        for (std::size_t k = 0; k < cfg.norms.size(); ++k) {
          if (!applicable(cfg.norms[k], n)) continue;
          const double na = gauge(sa, cfg.norms[k]);
          tr[k].observe(std::abs(gauge(sb, cfg.norms[k]) - na) / std::max(1.0, na), i, "n=" + std::to_string(n));
        }
      }
    });
  }
}

inline void suite_det2d(Suite& s) {
  const auto& cfg = s.cfg();
  {
    std::vector<Tracker> tr{Tracker("det2d.anchors", 1e-12)};
    s.run(tr, [&] {
      const CMat sx = pauli_x();
      const CMat y{{0.0, kI}, {-kI, 0.0}};
      const CMat a{{1.0, 1.0}, {1.0, 0.0}};
      tr[0].observe(std::abs(det(commutator(sx, y)) - 4.0), 0, "det[sigma_x, (0 i; -i 0)] = 4");
      tr[0].observe(std::abs(det(commutator(a, y)) - 5.0), 1, "det[(1 1; 1 0), (0 i; -i 0)] = 5");
    });
  }
  auto tr = s.per_norm("det2d.identity", 1e-8);
  s.run(tr, [&] {
    SeededRng base = s.rng("det2d.identity");
    std::vector<NormConstant> ncs;
    for (const auto& spec : cfg.norms) ncs.push_back(s.constant(spec, 2));
    for (std::size_t i = 0; i < cfg.trials; ++i) {
      SeededRng rng = base.derive(i);
      const CMat a = random_hermitian(2, rng);
      const CMat b = random_hermitian(2, rng);
      const auto sv = singular_values(commutator(a, b));
      for (std::size_t k = 0; k < cfg.norms.size(); ++k) {
        tr[k].observe(std::abs(gauge(sv, cfg.norms[k]) - det_formula_2d(a, b, ncs[k])), i);
      }
    }
  });
}

inline void suite_mcd(Suite& s) {
  const auto& cfg = s.cfg();
  auto tr = s.per_norm("mcd.identity", 1e-9);
  s.run(tr, [&] {
    SeededRng base = s.rng("mcd.identity");
    for (std::size_t i = 0; i < cfg.trials; ++i) {
      SeededRng rng = base.derive(i);
      const std::size_t n = s.dim_for(i);
      const Density a = random_density(n, rng);
      const CVec x = random_unit_vector(n, rng);
      const auto sv = singular_values(commutator(a.mat(), Projection::onto(x).mat()));
      for (std::size_t k = 0; k < cfg.norms.size(); ++k) {
        if (!applicable(cfg.norms[k], n)) continue;
        tr[k].observe(std::abs(gauge(sv, cfg.norms[k]) - density_proj_measure(a, x, s.constant(cfg.norms[k], n))), i,
                      "n=" + std::to_string(n));
      }
    }
  });
}

inline void suite_mcp(Suite& s) {
  const auto& cfg = s.cfg();
  auto tr = s.per_norm("mcp.identity", 1e-9);
  s.run(tr, [&] {
    SeededRng base = s.rng("mcp.identity");
    for (std::size_t i = 0; i < cfg.trials; ++i) {
      SeededRng rng = base.derive(i);
      const std::size_t n = s.dim_for(i);
      const CMat v = haar_unitary(n, rng);
      const CVec x = random_unit_vector(n, rng);
      const auto sv = singular_values(commutator(v, Projection::onto(x).mat()));
      for (std::size_t k = 0; k < cfg.norms.size(); ++k) {
        if (!applicable(cfg.norms[k], n)) continue;
        tr[k].observe(std::abs(gauge(sv, cfg.norms[k]) - unitary_proj_measure(v, x, s.constant(cfg.norms[k], n))), i,
                      "n=" + std::to_string(n));
      }
    }
  });
}

inline void suite_star(Suite& s) {
  const auto& cfg = s.cfg();
  constexpr std::size_t kPoints = 6;
  {
    auto tr = s.per_norm("star.pair_formula", 1e-9);
    s.run(tr, [&] {
      SeededRng base = s.rng("star.pair_formula");
      for (std::size_t i = 0; i < cfg.trials; ++i) {
        SeededRng rng = base.derive(i);
        const std::size_t n = s.dim_for(i);
        const Projection p = random_projection(n, rng);
        const Projection q = random_projection(n, rng);
        const auto sv = singular_values(commutator(p.mat(), q.mat()));
        for (std::size_t k = 0; k < cfg.norms.size(); ++k) {
          if (!applicable(cfg.norms[k], n)) continue;
          tr[k].observe(std::abs(gauge(sv, cfg.norms[k]) - proj_pair_measure(p, q, s.constant(cfg.norms[k], n))), i,
                        "n=" + std::to_string(n));
        }
      }
    });
  }

  // A sampled map: kPoints inputs and their images. Returns the star margin
  // and, per norm, the largest commutator-norm discrepancy over all pairs.
  auto evaluate = [&](const std::vector<Projection>& in, const std::vector<Projection>& out) {
    std::vector<ProjPairSample> pairs;
    std::vector<double> norm_gap(cfg.norms.size(), 0.0);
    for (std::size_t a = 0; a < in.size(); ++a)
      for (std::size_t b = a + 1; b < in.size(); ++b) {
        pairs.push_back({in[a], in[b], out[a], out[b]});
        const auto s0 = singular_values(commutator(in[a].mat(), in[b].mat()));
        const auto s1 = singular_values(commutator(out[a].mat(), out[b].mat()));
        for (std::size_t k = 0; k < cfg.norms.size(); ++k) {
          norm_gap[k] = std::max(norm_gap[k], std::abs(gauge(s0, cfg.norms[k]) - gauge(s1, cfg.norms[k])));
        }
      }
    return std::pair{star_property_check(pairs, 1e-8), norm_gap};
  };

  std::vector<Tracker> tr{Tracker("star.sampled_maps", 1e-8), Tracker("star.perturbed_maps", 0.0)};
  s.run(tr, [&] {
    SeededRng base = s.rng("star.maps");
    for (std::size_t i = 0; i < cfg.trials; ++i) {
      SeededRng rng = base.derive(i);
      const ProjectionPreserver phi = random_projection_preserver(rng);
      std::vector<Projection> in, out;
      for (std::size_t j = 0; j < kPoints; ++j) {
        in.push_back(random_projection(2, rng));
        out.push_back(thm2_apply(phi, in.back()));
      }
      const auto [star, gaps] = evaluate(in, out);
      double worst = star.worst;
      for (double g : gaps) worst = std::max(worst, g);
      tr[0].observe(worst, i);

      if (i % 5 == 0) {
        out[rng.index(kPoints)] = random_projection(2, rng);
        const auto [pstar, pgaps] = evaluate(in, out);
        const bool norms_fail = std::all_of(pgaps.begin(), pgaps.end(), [](double g) { return g > 1e-8; });
        // 1 marks a perturbed map that slipped through either test.
        tr[1].observe((!pstar.pass && norms_fail) ? 0.0 : 1.0, i,
                      "star margin " + fmt(pstar.worst) + ", norm gaps failing: " + (norms_fail ? "all" : "not all"));
      }
    }
  });
}

inline void suite_preservers(Suite& s) {
  const auto& cfg = s.cfg();
  auto diff = [&](std::vector<Tracker>& tr, const CMat& before, const CMat& after, std::size_t n, std::size_t i) {
    const auto s0 = singular_values(before);
    const auto s1 = singular_values(after);
    for (std::size_t k = 0; k < cfg.norms.size(); ++k) {
      if (!applicable(cfg.norms[k], n)) continue;
      tr[k].observe(std::abs(gauge(s0, cfg.norms[k]) - gauge(s1, cfg.norms[k])), i, "n=" + std::to_string(n));
    }
  };
  {
    auto tr = s.per_norm("preservers.thm1", 1e-8);
    s.run(tr, [&] {
      SeededRng base = s.rng("preservers.thm1");
      for (std::size_t i = 0; i < cfg.trials; ++i) {
        SeededRng rng = base.derive(i);
        const std::size_t n = s.dim_for(i);
        const SelfAdjointPreserver phi = random_selfadjoint_preserver(n, rng);
        const CMat a = random_hermitian(n, rng);
        const CMat b = random_hermitian(n, rng);
        diff(tr, commutator(a, b), commutator(thm1_apply(phi, a), thm1_apply(phi, b)), n, i);
      }
    });
  }
  {
    auto tr = s.per_norm("preservers.thm2", 1e-8);
    s.run(tr, [&] {
      SeededRng base = s.rng("preservers.thm2");
      for (std::size_t i = 0; i < cfg.trials; ++i) {
        SeededRng rng = base.derive(i);
        const ProjectionPreserver phi = random_projection_preserver(rng);
        const Projection p = random_projection(2, rng);
        const Projection q = random_projection(2, rng);
        diff(tr, commutator(p.mat(), q.mat()), commutator(thm2_apply(phi, p).mat(), thm2_apply(phi, q).mat()), 2, i);
      }
    });
  }
  {
    auto tr = s.per_norm("preservers.thm3", 1e-8);
    tr.emplace_back("preservers.thm3.abs_trace", 1e-10);
    s.run(tr, [&] {
      SeededRng base = s.rng("preservers.thm3");
      for (std::size_t i = 0; i < cfg.trials; ++i) {
        SeededRng rng = base.derive(i);
        const std::size_t n = s.dim_for(i);
        const UnitaryPreserver phi = random_unitary_preserver(n, rng);
        const CMat v = haar_unitary(n, rng);
        const CMat w = haar_unitary(n, rng);
        const CMat pv = thm3_apply(phi, v);
        diff(tr, commutator(v, w), commutator(pv, thm3_apply(phi, w)), n, i);
        tr.back().observe(std::abs(std::abs(trace(pv)) - std::abs(trace(v))), i, "n=" + std::to_string(n));
      }
    });
  }
  {
    auto tr = s.per_norm("preservers.thm4", 1e-8);
    tr.emplace_back("preservers.thm4.diameter", 1e-10);
    s.run(tr, [&] {
      SeededRng base = s.rng("preservers.thm4");
      for (std::size_t i = 0; i < cfg.trials; ++i) {
        SeededRng rng = base.derive(i);
        const std::size_t n = s.dim_for(i);
        const DensityPreserver phi = random_density_preserver(n, rng, true);
        const Density a = complement_safe_density(n, rng);
        const Density b = complement_safe_density(n, rng);
        const Density pa = thm4_apply(phi, a);
        diff(tr, commutator(a.mat(), b.mat()), commutator(pa.mat(), thm4_apply(phi, b).mat()), n, i);
        tr.back().observe(std::abs(diam_spectrum(pa.mat()) - diam_spectrum(a.mat())), i, "n=" + std::to_string(n));
      }
    });
  }
  {
    auto tr = s.per_norm("preservers.wigner", 1e-8);
    s.run(tr, [&] {
      SeededRng base = s.rng("preservers.wigner");
      for (std::size_t i = 0; i < cfg.trials; ++i) {
        SeededRng rng = base.derive(i);
        const std::size_t n = s.dim_for(i);
        const WignerPreserver phi{random_symmetry(n, rng)};
        const Projection p = random_projection(n, rng);
        const Projection q = random_projection(n, rng);
        diff(tr, commutator(p.mat(), q.mat()), commutator(wigner_apply(phi, p).mat(), wigner_apply(phi, q).mat()), n, i);
      }
    });
  }
}

inline void suite_extremal(Suite& s) {
  const auto& cfg = s.cfg();
  const std::size_t count = std::min(cfg.trials, cfg.extremal_instances);
  {
    std::vector<Tracker> tr{Tracker("extremal.anchors", 1e-12)};
    s.run(tr, [&] {
      const NormConstant op = s.constant(NormSpec::op(), 2);
      tr[0].observe(std::abs(theta_closed(CMat::identity(2), op)), 0, "theta(I) = 0");
      tr[0].observe(std::abs(theta_closed(pauli_z(), op) - 2.0), 1, "theta(sigma_z) = 2");
      tr[0].observe(std::abs(theta_closed(CMat::diag({1.0, kI}), op) - std::sqrt(2.0)), 2, "theta(diag(1, i)) = sqrt2");
      tr[0].observe(std::abs(omega_closed(Density::from_matrix(CMat::diag({1.0, 0.0})), op) - 0.5), 3,
                    "omega(diag(1, 0)) = 1/2");
      tr[0].observe(std::abs(omega_closed(Density::from_matrix(CMat::diag({0.75, 0.25})), op) - 0.25), 4,
                    "omega(diag(3/4, 1/4)) = 1/4");
      tr[0].observe(std::abs(diam_spectrum(CMat::diag({0.6, 0.3, 0.1})) - 0.5), 5, "diam diag(.6, .3, .1) = .5");
    });
  }
  {
    // First K trackers: closed-form gap; next K: oracle overshoot.
    const std::size_t K = cfg.norms.size();
    auto tr = s.per_norm("extremal.theta", 1e-3);
    for (auto& t : s.per_norm("extremal.theta_lower_bound", 1e-9)) tr.push_back(std::move(t));
    s.run(tr, [&] {
      SeededRng base = s.rng("extremal.theta");
      for (std::size_t i = 0; i < count; ++i) {
        SeededRng rng = base.derive(i);
        const CMat v = haar_unitary(2, rng);
        const auto est = theta_oracle(v, cfg.norms, cfg.extremal_budget, rng);
        for (std::size_t k = 0; k < cfg.norms.size(); ++k) {
          const double closed = theta_closed(v, s.constant(cfg.norms[k], 2));
          tr[k].observe(std::abs(closed - est[k].value), i,
                         "closed " + fmt(closed) + ", oracle " + fmt(est[k].value));
          tr[K + k].observe(std::max(0.0, est[k].value - closed), i);
        }
      }
    });
  }
  {
    // First K trackers: closed-form gap; next K: oracle overshoot.
    const std::size_t K = cfg.norms.size();
    auto tr = s.per_norm("extremal.omega", 1e-3);
    for (auto& t : s.per_norm("extremal.omega_lower_bound", 1e-9)) tr.push_back(std::move(t));
    s.run(tr, [&] {
      SeededRng base = s.rng("extremal.omega");
      for (std::size_t i = 0; i < count; ++i) {
        SeededRng rng = base.derive(i);
        const std::size_t n = s.dim_for(i);
        const Density a = random_density(n, rng);
        std::vector<NormSpec> specs;
        std::vector<std::size_t> idx;
        for (std::size_t k = 0; k < cfg.norms.size(); ++k)
          if (applicable(cfg.norms[k], n)) {
            specs.push_back(cfg.norms[k]);
            idx.push_back(k);
          }
        const auto est = omega_oracle(a, specs, cfg.extremal_budget, rng);
        for (std::size_t j = 0; j < specs.size(); ++j) {
          const std::size_t k = idx[j];
          const double closed = omega_closed(a, s.constant(cfg.norms[k], n));
          tr[k].observe(std::abs(closed - est[j].value), i,
                         "n=" + std::to_string(n) + ", closed " + fmt(closed) + ", oracle " + fmt(est[j].value));
          tr[K + k].observe(std::max(0.0, est[j].value - closed), i, "n=" + std::to_string(n));
        }
      }
    });
  }
  {
    std::vector<Tracker> tr{Tracker("extremal.theta_thm3_transfer", 1e-10),
                            Tracker("extremal.omega_thm4_transfer", 1e-10)};
    s.run(tr, [&] {
      SeededRng base = s.rng("extremal.transfer");
      for (std::size_t i = 0; i < cfg.trials; ++i) {
        SeededRng rng = base.derive(i);
        const UnitaryPreserver u = random_unitary_preserver(2, rng);
        const CMat v = haar_unitary(2, rng);
        for (const auto& spec : cfg.norms) {
          tr[0].observe(std::abs(theta_closed(thm3_apply(u, v), spec) - theta_closed(v, spec)), i);
        }
        const std::size_t n = s.dim_for(i);
        const DensityPreserver d = random_density_preserver(n, rng, true);
        const Density a = complement_safe_density(n, rng);
        for (const auto& spec : cfg.norms) {
          if (!applicable(spec, n)) continue;
          tr[1].observe(std::abs(omega_closed(thm4_apply(d, a), spec) - omega_closed(a, spec)), i,
                        "n=" + std::to_string(n));
        }
      }
    });
  }
}

inline void suite_reconstruct(Suite& s) {
  const auto& cfg = s.cfg();
  const std::size_t reps = std::min(cfg.trials, cfg.roundtrip_reps);
  // Each round trip reports max(residual, U phase distance, flag/sign/bit mismatch, budget excess).
  {
    std::vector<Tracker> tr{Tracker("reconstruct.thm2_roundtrip", 1e-7)};
    s.run(tr, [&] {
      SeededRng base = s.rng("reconstruct.thm2");
      for (std::size_t i = 0; i < reps; ++i) {
        SeededRng rng = base.derive(i);
        ProjectionPreserver hidden = random_projection_preserver(rng);
        hidden.sym = random_symmetry(2, rng, i % 2 ? Linearity::kConjugate : Linearity::kLinear);
        const Oracle phi([&](const CMat& m) { return thm2_apply(hidden, Projection::from_matrix(m, 1e-8)).mat(); });
        std::vector<Projection> validation;
        for (int j = 0; j < 128; ++j) validation.push_back(random_projection(2, rng));
        const ReconstructionResult r = reconstruct_projection_symmetry(phi, validation);
        const Symmetry want = canonical_projection_symmetry(hidden.sym);
        double bad = r.queries <= 12 ? 0.0 : 1.0;
        bad = std::max(bad, r.sym.flag == want.flag ? 0.0 : 1.0);
        for (std::size_t j = 0; j < validation.size(); ++j) {
          const int b = r.bits[r.bits.size() - validation.size() + j].bit;
          bad = std::max(bad, b == canonical_bit(hidden, validation[j]) ? 0.0 : 1.0);
        }
        const double err = std::max({r.residual, phase_distance(r.sym.u, want.u), bad});
        tr[0].observe(err, i, std::string("hidden flag ") + to_string(hidden.sym.flag));
      }
    });
  }
  {
    std::vector<Tracker> tr{Tracker("reconstruct.wigner_roundtrip", 1e-7)};
    s.run(tr, [&] {
      SeededRng base = s.rng("reconstruct.wigner");
      for (std::size_t i = 0; i < reps; ++i) {
        SeededRng rng = base.derive(i);
        const std::size_t n = 2 + i % 4;
        const WignerPreserver hidden{random_symmetry(n, rng, (i / 4) % 2 ? Linearity::kConjugate : Linearity::kLinear)};
        const Oracle phi([&](const CMat& m) { return wigner_apply(hidden, Projection::from_matrix(m, 1e-8)).mat(); });
        const ReconstructionResult r = reconstruct_wigner(phi, n, rng, 128);
        double bad = r.queries <= 3 * n - 2 ? 0.0 : 1.0;
        bad = std::max(bad, r.sym.flag == hidden.sym.flag ? 0.0 : 1.0);
        const double err = std::max({r.residual, phase_distance(r.sym.u, hidden.sym.u), bad});
        tr[0].observe(err, i, "n=" + std::to_string(n) + ", flag " + to_string(hidden.sym.flag));
      }
    });
  }
  {
    std::vector<Tracker> tr{Tracker("reconstruct.linear_roundtrip", 1e-7)};
    s.run(tr, [&] {
      SeededRng base = s.rng("reconstruct.linear");
      for (std::size_t i = 0; i < reps; ++i) {
        SeededRng rng = base.derive(i);
        SelfAdjointPreserver hidden = random_selfadjoint_preserver(2, rng);
        hidden.sign = i % 2 ? -1 : 1;
        hidden.sym = random_symmetry(2, rng, (i / 2) % 2 ? Linearity::kConjugate : Linearity::kLinear);
        const Oracle phi([&](const CMat& m) { return thm1_apply(hidden, m); });
        const ReconstructionResult r = reconstruct_selfadjoint_linear(phi, rng, 100);
        const SelfAdjointPreserver want = canonical_linear_gauge(hidden);
        double bad = r.sym.flag == want.sym.flag && *r.sign == want.sign ? 0.0 : 1.0;
        const double err = std::max(
            {r.residual, phase_distance(r.sym.u, want.sym.u), frobenius_norm(*r.functional - want.functional), bad});
        tr[0].observe(err, i, "sign " + std::to_string(hidden.sign) + ", flag " + to_string(hidden.sym.flag));
      }
    });
  }
  {
    // Negative soundness: 1 marks a map that was not rejected with the expected constraint.
    std::vector<Tracker> tr{Tracker("reconstruct.rejections", 0.0)};
    s.run(tr, [&] {
      SeededRng base = s.rng("reconstruct.rejections");
      for (std::size_t i = 0; i < reps; ++i) {
        SeededRng rng = base.derive(i);
        const SelfAdjointPreserver good = random_selfadjoint_preserver(2, rng);
        const Oracle doubled([&](const CMat& m) { return thm1_apply(good, m) * 2.0; });
        double bad = 1.0;
        try {
          reconstruct_selfadjoint_linear(doubled, rng, 10);
        } catch (const NotAPreserver& e) {
          bad = e.constraint() == "s - t = +-1" ? 0.0 : 1.0;
        }
        tr[0].observe(bad, i, "doubled linear map");

        const ProjectionPreserver hidden = random_projection_preserver(rng);
        const Projection stray = random_projection(2, rng);
        const Oracle broken([&](const CMat& m) {
          const Projection p = Projection::from_matrix(m, 1e-8);
          const BlochVec b = bloch_from_projection(p);
          return std::abs(b.z - 1.0) < 1e-9 ? stray.mat() : thm2_apply(hidden, p).mat();
        });
        bad = 1.0;
        try {
          reconstruct_projection_symmetry(broken, rng, 16);
        } catch (const NotAPreserver& e) {
          bad = e.constraint() == "property (*)" ? 0.0 : 1.0;
        } catch (const AmbiguousBranch&) {
          bad = 0.0;
        }
        tr[0].observe(bad, i, "projection map with one corrupted anchor");
      }
    });
  }
}

inline void suite_lemma(Suite& s) {
  const auto& cfg = s.cfg();
  const std::size_t count = std::min(cfg.trials, cfg.lemma_pairs);
  std::vector<Tracker> tr{Tracker("lemma.positive_pairs", 1e-9), Tracker("lemma.generic_pairs", 0.0)};
  s.run(tr, [&] {
    SeededRng base = s.rng("lemma.pairs");
    for (std::size_t i = 0; i < count; ++i) {
      SeededRng rng = base.derive(i);
      const std::size_t n = s.dim_for(i);
      const CMat v = haar_unitary(n, rng);
      const cplx z = rng.phase();
      const bool adj = i % 2 == 1;
      const CMat v2 = (adj ? adjoint(v) : v) * z;
      const UnitaryPairVerdict got = classify_unitary_pair(v, v2);
      const auto want = adj ? UnitaryPairVerdict::Kind::kScalarMultipleOfAdjoint : UnitaryPairVerdict::Kind::kScalarMultiple;
      double err = got.kind == want ? std::abs(got.z - z) : 1.0;
      // The measure condition holds for positive pairs, so no probe may separate them.
      if (find_measure_violation(v, v2, cfg.norms.front(), rng, 64)) err = 1.0;
      tr[0].observe(err, i, std::string("n=") + std::to_string(n) + ", " + to_string(want));

      const CMat w1 = haar_unitary(n, rng);
      const CMat w2 = haar_unitary(n, rng);
      const UnitaryPairVerdict g = classify_unitary_pair(w1, w2);
      const bool witnessed = find_measure_violation(w1, w2, cfg.norms.front(), rng, 64).has_value();
      tr[1].observe(g.kind == UnitaryPairVerdict::Kind::kNeither && witnessed ? 0.0 : 1.0, i,
                    std::string("n=") + std::to_string(n) + ", verdict " + to_string(g.kind));
    }
  });
}

}  // namespace detail

/// Runs a suite by name; unknown names are an InputError.
inline Report run_verify(const std::string& suite, const VerifyConfig& cfg) {
  validate_config(cfg);
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end()) {
    throw InputError("unknown suite '" + suite + "'");
  }
  const auto t0 = std::chrono::steady_clock::now();
  detail::Suite s(cfg);
  const bool all = suite == "all";
  if (all || suite == "norms") detail::suite_norms(s);
  if (all || suite == "det2d") detail::suite_det2d(s);
  if (all || suite == "mcd") detail::suite_mcd(s);
  if (all || suite == "mcp") detail::suite_mcp(s);
  if (all || suite == "star") detail::suite_star(s);
  if (all || suite == "preservers") detail::suite_preservers(s);
  if (all || suite == "extremal") detail::suite_extremal(s);
  if (all || suite == "reconstruct") detail::suite_reconstruct(s);
  if (all || suite == "lemma") detail::suite_lemma(s);
  Report r;
  r.suite = suite;
  r.config = cfg;
  r.checks = s.take();
  std::sort(r.checks.begin(), r.checks.end(), [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
  r.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline Json to_json(const Report& r, bool with_duration = true) {
  Json norms = Json::array();
  for (const auto& n : r.config.norms) norms.push_back(n.to_string());
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"status", c.status},
                          {"worst", c.worst},
                          {"tolerance", c.tolerance},
                          {"trials", c.trials},
                          {"witness", c.witness}});
  }
  Json j{{"suite", r.suite},
         {"norms", std::move(norms)},
         {"trials", r.config.trials},
         {"dims", Json::array({r.config.dim_lo, r.config.dim_hi})},
         {"seed", r.config.seed},
         {"checks", std::move(checks)},
         {"verdict", r.pass() ? "pass" : "fail"}};
  if (with_duration) j["duration_ms"] = r.duration_ms;
  return j;
}

}  // namespace commnorm
