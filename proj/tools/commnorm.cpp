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

// commnorm: verification suites, reconstruction, extremal estimates and
// generators. Exit status: 0 pass, 1 fail or rejection, 2 usage or input error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "commnorm/commnorm.hpp"

namespace {

using namespace commnorm;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

Json read_json(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json(const Json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

std::vector<NormSpec> parse_norms(const std::vector<std::string>& tokens) {
  if (tokens.empty()) return default_norm_grid();
  std::vector<NormSpec> out;
  for (const auto& t : tokens) out.push_back(parse_norm(t));
  return out;
}

std::pair<std::size_t, std::size_t> parse_dims(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const auto n = std::stoul(s);
      return {n, n};
    }
    return {std::stoul(s.substr(0, dots)), std::stoul(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw InputError("bad --dims '" + s + "' (expected lo..hi)");
  }
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string suite = "all";
  std::vector<std::string> norms;
  std::size_t trials = 1000;
  std::string dims = "2..5";
  std::uint64_t seed = 42;
  std::string json;
  double corrupt_c = 0.0;
};

int cmd_verify(const VerifyArgs& a) {
  VerifyConfig cfg;
  cfg.norms = parse_norms(a.norms);
  cfg.trials = a.trials;
  std::tie(cfg.dim_lo, cfg.dim_hi) = parse_dims(a.dims);
  cfg.seed = a.seed;
  cfg.c_scale = 1.0 + a.corrupt_c;
  const Report r = run_verify(a.suite, cfg);
  for (const auto& c : r.checks) {
    std::cout << (c.status == "pass" ? "PASS  " : c.status == "fail" ? "FAIL  " : "ERROR ") << c.name
              << "  worst=" << c.worst << "  tol=" << c.tolerance << "  trials=" << c.trials;
    if (c.status != "pass") std::cout << "  (" << c.witness << ")";
    std::cout << "\n";
  }
  std::cout << "verdict: " << (r.pass() ? "pass" : "fail") << " (" << r.checks.size() << " checks, "
            << static_cast<long long>(r.duration_ms) << " ms)\n";
  if (!a.json.empty()) write_json(to_json(r), a.json);
  return r.pass() ? kPass : kFail;
}

// ---------------------------------------------------------------------------

struct ReconstructArgs {
  std::string kind;
  std::string input;
  std::string oracle;
  std::string norm = "op";
  std::uint64_t seed = 42;
  std::size_t validation = 128;
  std::string json;
};

Json unitary_pair_json(const ProbeSet& ps, const NormSpec& spec, SeededRng& rng) {
  Json out = Json::array();
  for (std::size_t i = 0; i < ps.samples.size(); ++i) {
    const auto& [v1, v2] = ps.samples[i];
    const UnitaryPairVerdict v = classify_unitary_pair(v1, v2);
    Json j{{"sample", i}, {"verdict", to_string(v.kind)}, {"defect", v.defect}};
    if (v.kind != UnitaryPairVerdict::Kind::kNeither) j["z"] = Json::array({v.z.real(), v.z.imag()});
    SeededRng local = rng.derive(i);
    if (const auto w = find_measure_violation(v1, v2, spec, local, 64)) {
      j["mc_violation"] = Json{{"x", to_json(w->x)}, {"first", w->first}, {"second", w->second}};
    } else {
      j["mc_violation"] = nullptr;
    }
    out.push_back(std::move(j));
  }
  return Json{{"kind", "unitary-pair"}, {"results", std::move(out)}};
}

int cmd_reconstruct(const ReconstructArgs& a) {
  if (a.input.empty() == a.oracle.empty()) throw InputError("reconstruct: give exactly one of --input or --oracle");
  SeededRng rng(a.seed);
  if (a.kind == "unitary-pair") {
    if (a.input.empty()) throw InputError("reconstruct unitary-pair: needs --input");
    const ProbeSet ps = probe_set_from_json(read_json(a.input));
    if (ps.kind != ProbeSet::Kind::kUnitaryPair) throw InputError("reconstruct unitary-pair: probe set kind must be unitary-pair");
    write_json(unitary_pair_json(ps, parse_norm(a.norm), rng), a.json);
    return kPass;
  }
  ReconstructionResult r;
  if (!a.input.empty()) {
    const ProbeSet ps = probe_set_from_json(read_json(a.input));
    if (a.kind == "projection") {
      r = reconstruct_projection_symmetry(ps);
    } else if (a.kind == "wigner") {
      r = reconstruct_wigner(ps);
    } else {
      r = reconstruct_selfadjoint_linear(ps);
    }
  } else {
    const PreserverSpec spec = preserver_from_json(read_json(a.oracle));
    const Oracle phi([&spec](const CMat& m) { return apply_spec(spec, m); });
    if (a.kind == "projection") {
      if (spec.kind != "thm2" && spec.kind != "lpm") throw InputError("reconstruct projection: oracle kind must be thm2 or lpm");
      r = reconstruct_projection_symmetry(phi, rng, a.validation);
    } else if (a.kind == "wigner") {
      if (spec.kind != "wigner") throw InputError("reconstruct wigner: oracle kind must be wigner");
      r = reconstruct_wigner(phi, spec.sym.dim(), rng, a.validation);
    } else {
      if (spec.kind != "thm1" || spec.sym.dim() != 2) throw InputError("reconstruct linear: oracle must be a 2x2 thm1 spec");
      r = reconstruct_selfadjoint_linear(phi, rng, a.validation);
    }
  }
  write_json(to_json(r), a.json);
  return kPass;
}

// ---------------------------------------------------------------------------

struct ExtremalArgs {
  std::string which;
  std::string matrix;
  std::string norm = "op";
  std::size_t budget = 20000;
  std::uint64_t seed = 42;
  std::string json;
};

int cmd_extremal(const ExtremalArgs& a) {
  const CMat m = matrix_from_json(read_json(a.matrix));
  const NormSpec spec = parse_norm(a.norm);
  SeededRng rng(a.seed);
  double closed = 0.0;
  SupEstimate est;
  if (a.which == "theta") {
    closed = theta_closed(m, spec);
    est = theta_oracle(m, spec, a.budget, rng);
  } else {
    const Density d = Density::from_matrix(m, 1e-9);
    closed = omega_closed(d, spec);
    est = omega_oracle(d, spec, a.budget, rng);
  }
  Json j{{"closed", closed},   {"oracle", est.value},     {"witness", to_json(est.witness)},
         {"gap", closed - est.value}, {"samples", est.samples}, {"iterations", est.iterations}};
  if (a.which == "omega") j["witness_vector"] = to_json(est.witness_vector);
  write_json(j, a.json);
  return kPass;
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string what;
  std::size_t dim = 2;
  std::uint64_t seed = 42;
  std::string kind;
  std::size_t probes = 64;
  std::string out;
  std::string spec_out;
};

int cmd_gen(const GenArgs& a) {
  SeededRng rng(a.seed);
  if (a.what == "preserver") {
    if (a.kind.empty()) throw InputError("gen preserver: --kind is required");
    const std::size_t n = (a.kind == "thm2" || a.kind == "lpm") ? 2 : a.dim;
    const PreserverSpec spec = random_preserver_spec(a.kind, n, rng);
    SeededRng probes = rng.derive(1);
    const ProbeSet ps = make_probe_set(spec, a.probes, probes);
    write_json(to_json(ps), a.out);
    std::string sidecar = a.spec_out;
    if (sidecar.empty() && !a.out.empty() && a.out != "-") sidecar = a.out + ".spec.json";
    if (!sidecar.empty()) write_json(to_json(spec), sidecar);
    return kPass;
  }
  if (a.dim < 1) throw InputError("gen: --dim must be >= 1");
  CMat m;
  if (a.what == "unitary") {
    m = haar_unitary(a.dim, rng);
  } else if (a.what == "projection") {
    m = random_projection(a.dim, rng).mat();
  } else if (a.what == "density") {
    m = random_density(a.dim, rng).mat();
  } else {
    m = random_hermitian(a.dim, rng);
  }
  write_json(to_json(m), a.out);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Unitarily invariant norms of commutators: identities, preservers and their reconstruction."};
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run seeded invariant suites");
  verify->add_option("--suite", va.suite, "Suite name")->check(CLI::IsMember(suite_names()));
  verify->add_option("--norm", va.norms, "Norm token (repeatable); default op, tr, fro, schatten:3, kyfan:2");
  verify->add_option("--trials", va.trials, "Trials per check")->check(CLI::PositiveNumber);
  verify->add_option("--dims", va.dims, "Dimension range lo..hi");
  verify->add_option("--seed", va.seed, "Master seed");
  verify->add_option("--json", va.json, "Write the report as JSON ('-' for stdout)");
  verify->add_option("--corrupt-c", va.corrupt_c, "Relative corruption of the norm constant (test hook)")->group("");

  ReconstructArgs ra;
  auto* rec = app.add_subcommand("reconstruct", "Recover the symmetry behind a preserver");
  rec->add_option("kind", ra.kind, "projection | wigner | linear | unitary-pair")
      ->required()
      ->check(CLI::IsMember({"projection", "wigner", "linear", "unitary-pair"}));
  rec->add_option("--input", ra.input, "Probe set JSON file ('-' for stdin)");
  rec->add_option("--oracle", ra.oracle, "Preserver spec JSON used as a black-box oracle");
  rec->add_option("--norm", ra.norm, "Norm for the unitary-pair measure probe");
  rec->add_option("--seed", ra.seed, "Seed for validation probes");
  rec->add_option("--validation", ra.validation, "Validation probes in oracle mode")->check(CLI::Range(100, 100000));
  rec->add_option("--json", ra.json, "Output path (default stdout)");

  ExtremalArgs ea;
  auto* ext = app.add_subcommand("extremal", "Compare closed-form suprema with sampling oracles");
  ext->add_option("which", ea.which, "theta | omega")->required()->check(CLI::IsMember({"theta", "omega"}));
  ext->add_option("--matrix", ea.matrix, "Matrix JSON file ('-' for stdin)")->required();
  ext->add_option("--norm", ea.norm, "Norm token");
  ext->add_option("--budget", ea.budget, "Random samples before refinement (>= 100)");
  ext->add_option("--seed", ea.seed, "Seed");
  ext->add_option("--json", ea.json, "Output path (default stdout)");

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "Generate random operators or preserver probe sets");
  gen->add_option("what", ga.what, "unitary | projection | density | hermitian | preserver")
      ->required()
      ->check(CLI::IsMember({"unitary", "projection", "density", "hermitian", "preserver"}));
  gen->add_option("--dim", ga.dim, "Dimension");
  gen->add_option("--seed", ga.seed, "Seed")->required();
  gen->add_option("--kind", ga.kind, "Preserver kind")
      ->check(CLI::IsMember({"thm1", "thm2", "thm3", "thm4", "lpm", "wigner"}));
  gen->add_option("--probes", ga.probes, "Random probes beyond the anchors");
  gen->add_option("--out", ga.out, "Output path (default stdout)");
  gen->add_option("--spec-out", ga.spec_out, "Hidden spec sidecar path (default <out>.spec.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(va);
    if (rec->parsed()) return cmd_reconstruct(ra);
    if (ext->parsed()) return cmd_extremal(ea);
    if (gen->parsed()) return cmd_gen(ga);
  } catch (const NotAPreserver& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return kFail;
  } catch (const AmbiguousBranch& e) {
    std::cerr << "rejected: ambiguous branch: " << e.what() << "\n";
    return kFail;
  } catch (const MissingAnchors& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
