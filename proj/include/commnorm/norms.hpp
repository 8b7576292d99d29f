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

// Unitarily invariant norms as symmetric gauge functions of singular values.
//
// Two families are supported: Schatten-p (p in [1, inf]) and Ky Fan-k. The
// textual grammar is "schatten:<p>", "schatten:inf", "kyfan:<k>", plus the
// aliases "op", "tr" and "fro".

#pragma once

#include <charconv>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "commnorm/matrix.hpp"

namespace commnorm {

struct NormSpec {
  enum class Kind { kSchatten, kKyFan };

  Kind kind = Kind::kSchatten;
  double p = std::numeric_limits<double>::infinity();  // Schatten exponent
  std::size_t k = 1;                                   // Ky Fan order

  static NormSpec schatten(double p) {
    if (!(p >= 1.0)) throw InputError("schatten exponent must be >= 1, got " + std::to_string(p));
    return NormSpec{Kind::kSchatten, p, 1};
  }
  static NormSpec op() { return schatten(std::numeric_limits<double>::infinity()); }
  static NormSpec trace_class() { return schatten(1.0); }
  static NormSpec frobenius() { return schatten(2.0); }
  static NormSpec kyfan(std::size_t k) {
    if (k < 1) throw InputError("kyfan order must be >= 1");
    return NormSpec{Kind::kKyFan, 0.0, k};
  }

  std::string to_string() const {
    if (kind == Kind::kKyFan) return "kyfan:" + std::to_string(k);
    if (std::isinf(p)) return "schatten:inf";
    std::string s = std::to_string(p);
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
    return "schatten:" + s;
  }

  friend bool operator==(const NormSpec& a, const NormSpec& b) {
    if (a.kind != b.kind) return false;
    return a.kind == Kind::kKyFan ? a.k == b.k : a.p == b.p;
  }
};

/// Parses the NormSpec grammar. Errors name the offending token.
inline NormSpec parse_norm(std::string_view text) {
  if (text == "op") return NormSpec::op();
  if (text == "tr") return NormSpec::trace_class();
  if (text == "fro") return NormSpec::frobenius();
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InputError("unknown norm token '" + std::string(text) + "'");
  }
  const std::string_view family = text.substr(0, colon);
  const std::string_view arg = text.substr(colon + 1);
  if (family == "schatten") {
    if (arg == "inf") return NormSpec::op();
    double p = 0.0;
    const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), p);
    if (ec != std::errc{} || ptr != arg.data() + arg.size() || !(p >= 1.0) || !std::isfinite(p)) {
      throw InputError("bad schatten exponent '" + std::string(arg) + "' in norm token '" +
                       std::string(text) + "'");
    }
    return NormSpec::schatten(p);
  }
  if (family == "kyfan") {
    std::size_t k = 0;
    const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), k);
    if (ec != std::errc{} || ptr != arg.data() + arg.size() || k < 1) {
      throw InputError("bad kyfan order '" + std::string(arg) + "' in norm token '" +
                       std::string(text) + "'");
    }
    return NormSpec::kyfan(k);
  }
  throw InputError("unknown norm family '" + std::string(family) + "' in norm token '" +
                   std::string(text) + "'");
}

/// The symmetric gauge function of a descending singular-value vector.
inline double gauge(std::span<const double> sv, const NormSpec& spec) {
  if (spec.kind == NormSpec::Kind::kKyFan) {
    if (spec.k > sv.size()) {
      throw InputError("kyfan:" + std::to_string(spec.k) + " needs dimension >= " +
                       std::to_string(spec.k) + ", got " + std::to_string(sv.size()));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < spec.k; ++i) s += sv[i];
    return s;
  }
  if (sv.empty()) return 0.0;
  const double top = sv.front();
  if (std::isinf(spec.p) || top == 0.0) return top;
  if (spec.p == 1.0) {
    double s = 0.0;
    for (double x : sv) s += x;
    return s;
  }
  if (spec.p == 2.0) {
    double s = 0.0;
    for (double x : sv) s += x * x;
    return std::sqrt(s);
  }
  double s = 0.0;
  for (double x : sv) s += std::pow(x / top, spec.p);
  return top * std::pow(s, 1.0 / spec.p);
}

inline double ui_norm(const CMat& a, const NormSpec& spec) {
  const auto sv = singular_values(a);
  return gauge(sv, spec);
}

/// The common value of the norm on rank-two self-adjoint operators whose
/// spectrum contains {-1, 1}.
struct NormConstant {
  double c = 0.0;
  NormSpec spec;
  std::size_t dim = 0;
};

inline NormConstant norm_constant(const NormSpec& spec, std::size_t n) {
  if (n < 2) throw InputError("norm_constant needs dimension >= 2, got " + std::to_string(n));
  std::vector<cplx> d(n, cplx{});
  d[0] = 1.0;
  d[1] = -1.0;
  return NormConstant{ui_norm(CMat::diag(d), spec), spec, n};
}

/// The default norm grid {op, tr, fro, schatten:3, kyfan:2}.
inline std::vector<NormSpec> default_norm_grid() {
  return {NormSpec::op(), NormSpec::trace_class(), NormSpec::frobenius(), NormSpec::schatten(3.0),
          NormSpec::kyfan(2)};
}

}  // namespace commnorm
