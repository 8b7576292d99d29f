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

// JSON encodings.
//
//   matrix        {"dim": n, "re": [[...], ...], "im": [[...], ...]}  (row-major)
//   preserver     {"kind": "thm1|thm2|thm3|thm4|lpm|wigner", "U": matrix,
//                  "flag": "linear|conj", "sign": +-1, "F": matrix,
//                  "choice"|"phase"|"branch": rule}
//   rule          {"mode": "const", "value": v} | {"mode": "seeded", "seed": s}
//                 | {"mode": "table", "entries": [{"key": [...], "value": v}], "fallback": v}
//                 (phase values are [re, im])
//   probe set     {"kind": "projection-map|hermitian-linear-map|unitary-pair|density-map",
//                  "dim": n, "samples": [{"in": matrix, "out": matrix}, ...]}

#pragma once

#include <json.hpp>

#include <string>

#include "commnorm/error.hpp"
#include "commnorm/matrix.hpp"
#include "commnorm/preservers.hpp"
#include "commnorm/reconstruct.hpp"
#include "commnorm/specs.hpp"

namespace commnorm {

using Json = nlohmann::ordered_json;

namespace detail {

inline const Json& field(const Json& j, const char* name, const std::string& where) {
  if (!j.is_object() || !j.contains(name)) throw InputError(where + ": missing field '" + name + "'");
  return j.at(name);
}

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw InputError(where + ": expected a number");
  return j.get<double>();
}

}  // namespace detail

inline Json to_json(const CMat& m) {
  Json re = Json::array(), im = Json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Json r = Json::array(), c = Json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
    }
    re.push_back(std::move(r));
    im.push_back(std::move(c));
  }
  return Json{{"dim", m.dim()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline CMat matrix_from_json(const Json& j, const std::string& where = "matrix") {
  const Json& d = detail::field(j, "dim", where);
  if (!d.is_number_integer() || d.get<long long>() < 1) throw InputError(where + ": dim must be a positive integer");
  const auto n = d.get<std::size_t>();
  const Json& re = detail::field(j, "re", where);
  const bool has_im = j.contains("im");
  const Json& im = has_im ? j.at("im") : re;
  CMat m(n);
  for (const Json* part : {&re, &im}) {
    if (!part->is_array() || part->size() != n) throw InputError(where + ": re/im must have " + std::to_string(n) + " rows");
    for (const auto& row : *part) {
      if (!row.is_array() || row.size() != n) throw InputError(where + ": rows must have " + std::to_string(n) + " entries");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double r = detail::number(re[i][k], where);
      const double c = has_im ? detail::number(im[i][k], where) : 0.0;
      m(i, k) = cplx{r, c};
    }
  return m;
}

inline Json to_json(const CVec& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(Json::array({x.real(), x.imag()}));
  return out;
}

inline Linearity parse_linearity(const std::string& s) {
  if (s == "linear") return Linearity::kLinear;
  if (s == "conj") return Linearity::kConjugate;
  throw InputError("unknown flag '" + s + "' (expected linear or conj)");
}

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

namespace detail {

inline Json rule_value(int v) { return v; }
inline Json rule_value(const cplx& v) { return Json::array({v.real(), v.imag()}); }

template <typename Value>
Value rule_value_from(const Json& j, const std::string& where) {
  if constexpr (std::is_same_v<Value, cplx>) {
    if (!j.is_array() || j.size() != 2) throw InputError(where + ": phase values are [re, im]");
    const cplx z{number(j[0], where), number(j[1], where)};
    if (std::abs(std::abs(z) - 1.0) > 1e-10) throw InputError(where + ": phase must have unit modulus");
    return z;
  } else {
    if (!j.is_number_integer() || (j.get<int>() != 0 && j.get<int>() != 1)) {
      throw InputError(where + ": bit values are 0 or 1");
    }
    return j.get<int>();
  }
}

}  // namespace detail

template <typename Value>
Json to_json(const Rule<Value>& r) {
  return std::visit(
      [](const auto& x) -> Json {
        using R = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<R, typename Rule<Value>::Constant>) {
          return Json{{"mode", "const"}, {"value", detail::rule_value(x.value)}};
        } else if constexpr (std::is_same_v<R, typename Rule<Value>::Seeded>) {
          return Json{{"mode", "seeded"}, {"seed", x.seed}};
        } else {
          Json entries = Json::array();
          for (const auto& [k, v] : x.entries) entries.push_back(Json{{"key", k}, {"value", detail::rule_value(v)}});
          return Json{{"mode", "table"}, {"entries", std::move(entries)}, {"fallback", detail::rule_value(x.fallback)}};
        }
      },
      r.impl);
}

template <typename Value>
Rule<Value> rule_from_json(const Json& j, const std::string& where) {
  const Json& mode = detail::field(j, "mode", where);
  if (!mode.is_string()) throw InputError(where + ": mode must be a string");
  const std::string m = mode.get<std::string>();
  if (m == "const") return Rule<Value>::constant(detail::rule_value_from<Value>(detail::field(j, "value", where), where));
  if (m == "seeded") {
    const Json& s = detail::field(j, "seed", where);
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      throw InputError(where + ": seed must be a nonnegative integer");
    }
    return Rule<Value>::seeded(s.get<std::uint64_t>());
  }
  if (m == "table") {
    typename Rule<Value>::Table t;
    for (const auto& e : detail::field(j, "entries", where)) {
      t.entries[detail::field(e, "key", where).get<Key>()] = detail::rule_value_from<Value>(detail::field(e, "value", where), where);
    }
    if (j.contains("fallback")) t.fallback = detail::rule_value_from<Value>(j.at("fallback"), where);
    return Rule<Value>{std::move(t)};
  }
  throw InputError(where + ": unknown rule mode '" + m + "'");
}

// ---------------------------------------------------------------------------
// Preserver specs
// ---------------------------------------------------------------------------

inline Json to_json(const PreserverSpec& p) {
  Json j{{"kind", p.kind}, {"U", to_json(p.sym.u)}, {"flag", to_string(p.sym.flag)}};
  if (p.kind == "thm1") {
    j["sign"] = p.sign;
    j["F"] = to_json(p.functional);
  } else if (p.kind == "thm2" || p.kind == "lpm") {
    j["choice"] = to_json(p.choice);
  } else if (p.kind == "thm3") {
    j["phase"] = to_json(p.phase);
    j["branch"] = to_json(p.branch);
  } else if (p.kind == "thm4") {
    j["branch"] = to_json(p.branch);
  }
  return j;
}

inline PreserverSpec preserver_from_json(const Json& j) {
  const std::string where = "preserver spec";
  PreserverSpec p;
  const Json& kind = detail::field(j, "kind", where);
  if (!kind.is_string()) throw InputError(where + ": kind must be a string");
  p.kind = kind.get<std::string>();
  if (!is_preserver_kind(p.kind)) {
    throw InputError(where + ": unknown kind '" + p.kind + "'");
  }
  if (p.kind == "lpm") {
    const std::size_t n = j.contains("U") ? matrix_from_json(j.at("U"), where + " U").dim() : 2;
    p.sym = Symmetry::identity(n);
  } else {
    const Linearity f = parse_linearity(detail::field(j, "flag", where).get<std::string>());
    p.sym = Symmetry::make(matrix_from_json(detail::field(j, "U", where), where + " U"), f);
  }
  if (p.kind == "thm1") {
    const Json& s = detail::field(j, "sign", where);
    if (!s.is_number_integer() || (s.get<int>() != 1 && s.get<int>() != -1)) throw InputError(where + ": sign must be +1 or -1");
    p.sign = s.get<int>();
    p.functional = j.contains("F") ? matrix_from_json(j.at("F"), where + " F") : CMat(p.sym.dim());
    if (p.functional.dim() != p.sym.dim() || !is_hermitian(p.functional, 1e-10)) {
      throw InputError(where + ": F must be Hermitian of the same dimension as U");
    }
  }
  if (p.kind == "thm2" || p.kind == "lpm") {
    if (p.sym.dim() != 2) throw InputError(where + ": projection preservers act on dimension 2");
    p.choice = rule_from_json<int>(detail::field(j, "choice", where), where + " choice");
  }
  if (p.kind == "thm3") {
    p.phase = rule_from_json<cplx>(detail::field(j, "phase", where), where + " phase");
    p.branch = rule_from_json<int>(detail::field(j, "branch", where), where + " branch");
  }
  if (p.kind == "thm4") p.branch = rule_from_json<int>(detail::field(j, "branch", where), where + " branch");
  return p;
}

// ---------------------------------------------------------------------------
// Probe sets and results
// ---------------------------------------------------------------------------

inline Json to_json(const ProbeSet& ps) {
  Json samples = Json::array();
  for (const auto& [in, out] : ps.samples) samples.push_back(Json{{"in", to_json(in)}, {"out", to_json(out)}});
  return Json{{"kind", to_string(ps.kind)}, {"dim", ps.dim}, {"samples", std::move(samples)}};
}

/// Parses and validates; errors name the failing sample index.
inline ProbeSet probe_set_from_json(const Json& j) {
  const std::string where = "probe set";
  ProbeSet ps;
  const Json& kind = detail::field(j, "kind", where);
  if (!kind.is_string()) throw InputError(where + ": kind must be a string");
  ps.kind = parse_probe_kind(kind.get<std::string>());
  const Json& d = detail::field(j, "dim", where);
  if (!d.is_number_integer() || d.get<long long>() < 1) throw InputError(where + ": dim must be a positive integer");
  ps.dim = d.get<std::size_t>();
  const Json& samples = detail::field(j, "samples", where);
  if (!samples.is_array()) throw InputError(where + ": samples must be an array");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::string at = "sample " + std::to_string(i);
    ps.samples.emplace_back(matrix_from_json(detail::field(samples[i], "in", at), at + " input"),
                            matrix_from_json(detail::field(samples[i], "out", at), at + " output"));
  }
  validate_probe_set(ps);
  return ps;
}

inline Json to_json(const ReconstructionResult& r) {
  Json extras = Json::object();
  if (r.sign) extras["sign"] = *r.sign;
  if (r.functional) extras["F"] = to_json(*r.functional);
  if (!r.bits.empty()) {
    Json bits = Json::array();
    for (const auto& b : r.bits) bits.push_back(b.bit);
    extras["bits"] = std::move(bits);
  }
  extras["validation_count"] = r.validation_count;
  return Json{{"U", to_json(r.sym.u)},        {"flag", to_string(r.sym.flag)}, {"extras", std::move(extras)},
              {"residual", r.residual},       {"margin", r.margin},            {"queries", r.queries}};
}

}  // namespace commnorm
