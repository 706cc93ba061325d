// Acceptance run: one PASS/FAIL line per criterion, exact arithmetic throughout.
//
//   acceptance [--criterion N] [--cli PATH]
//
// Without --criterion every criterion runs. Criterion 11 needs the CLI binary.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "symspec/cli.hpp"
#include "symspec/model_io.hpp"
#include "symspec/sampling.hpp"
#include "symspec/suites.hpp"

using namespace symspec;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
  void require(const std::vector<Check>& checks, const std::string& where) {
    for (const auto& c : checks) {
      if (!c.pass) fail(where + ": " + c.name + (c.witness.empty() ? "" : " [" + c.witness + "]"));
    }
  }
};

std::vector<std::string> all_models() { return builtin_names(); }

const std::vector<std::string> kClosedType{"t2", "t4", "t6", "kt4", "kt4xt2"};

Model solvable_times_torus() {
  std::ifstream in(std::string(SYMSPEC_MODELS_DIR) + "/solv2xt2.json");
  std::stringstream s;
  s << in.rdbuf();
  return parse_model(s.str());
}

bool has_prefix(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

Outcome operator_identities_hold() {
  Outcome o;
  for (const auto& name : all_models()) o.require(operator_identities(OperatorSet(builtin(name))), name);
  if (o.pass) o.detail = "dδ+δd = 0, ⊤d−d⊤ = 0, ⊤δ−δ⊤ = d, ⊥δ−δ⊥ = 0 on all 7 models";
  return o;
}

Outcome hodge_lepage_decomposition() {
  Outcome o;
  for (const auto& name : all_models()) o.require(hodge_lepage_suite(Analysis(builtin(name)), 1000), name);
  if (o.pass) o.detail = "1000 random forms per model; direct-sum dimensions in every degree";
  return o;
}

Outcome effective_forms() {
  Outcome o;
  for (const auto& name : all_models()) o.require(effective_form_checks(Analysis(builtin(name))), name);
  if (o.pass) o.detail = "d(Λ_ε) has components 0 and 1 only; δ(Λ_ε^k) ⊆ Λ_ε^{k-1}";
  return o;
}

Outcome zeroth_page_structure() {
  Outcome o;
  for (const auto& name : all_models()) o.require(page_structure_checks(Analysis(builtin(name))), name);
  if (o.pass) o.detail = "triangle support, E0^{0,q} ≅ Λ_ε^q, τ_0/τ_1 ranges and the τ_r^k window";
  return o;
}

Outcome exact_sequence() {
  Outcome o;
  FormSampler sampler(kDefaultSeed);
  std::size_t maps = 0;
  auto perturbed = [&](const Quotient& q, Vector& coords) {
    coords = sampler.vector(q.dim());
    Vector x = q.lift(coords);
    Vector shift = sampler.in(q.denominator());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += shift[i];
    return x;
  };
  for (const auto& name : all_models()) {
    Analysis a(builtin(name));
    o.require(thm1_suite(a), name);
    const auto& seq = a.sequence();
    for (int p = 0; p <= a.ops().n(); ++p) {
      for (int q = p; q <= a.ops().n(); ++q) {
        Quotient src = seq.phi_source(p, q);
        Matrix phi = seq.phi(p, q);
        const Quotient& e1 = seq.e1(p, q);
        Matrix psi = seq.psi(p, q);
        maps += 2;
        for (int t = 0; t < 100; ++t) {
          Vector c;
          if (src.ambient() > 0) {
            Vector x = perturbed(src, c);
            if (seq.phi_apply(p, q, x) != phi.apply(c)) o.fail(name + ": φ depends on the representative");
          }
          Vector y = perturbed(e1, c);
          Vector got = seq.psi_apply(p, q, y);
          if (got != psi.apply(c) && !(got.empty() && psi.rows() == 0)) o.fail(name + ": ψ depends on the representative");
        }
      }
    }
  }
  if (o.pass) o.detail = "exact at every node; " + std::to_string(maps) + " φ/ψ maps × 100 exact perturbations";
  return o;
}

Outcome exact_omega_pattern() {
  Outcome o;
  for (const auto* name : {"solv2", "solv4"}) {
    Analysis a(builtin(name));
    auto checks = stab_suite(a);
    int found = 0;
    for (const auto& c : checks) found += has_prefix(c.name, "Theorem 2");
    if (found != 4) o.fail(std::string(name) + ": Theorem 2 checks not applied");
    o.require(checks, name);
  }
  if (o.pass) o.detail = "solv2, solv4: s <= 2, support p = 0 or q = n, E2^{0,q} ≅ H^q, E2^{p,n} ≅ H^{n+p}";
  return o;
}

Outcome closed_type_pages() {
  Outcome o;
  for (const auto* name : {"t2", "t4", "t6", "kt4"}) {
    Analysis a(builtin(name));
    auto checks = stab_suite(a);
    int found = 0;
    for (const auto& c : checks) found += has_prefix(c.name, "Theorem 4");
    if (found != 2) o.fail(std::string(name) + ": Theorem 4 checks not applied");
    o.require(checks, name);
  }
  if (o.pass) o.detail = "t2, t4, t6, kt4: s <= 2 and dim E2^{p,p} = 1";
  return o;
}

Outcome convergence() {
  Outcome o;
  std::vector<Model> models;
  for (const auto& name : all_models()) models.push_back(builtin(name));
  models.push_back(solvable_times_torus());
  for (const auto& model : models) {
    Analysis a(model);
    for (const auto& c : stab_suite(a)) {
      if (has_prefix(c.name, "convergence") && !c.pass) o.fail(model.name() + ": " + c.witness);
    }
  }
  if (o.pass) o.detail = "antidiagonal sums at the stabilization page equal Betti numbers on 8 models";
  return o;
}

Outcome harmonicity() {
  Outcome o;
  for (const auto& name : kClosedType) {
    Analysis a(builtin(name));
    HarmonicVerdict v = harmonic_verdict(a.cohomology(), a.spectral());
    if (!v.applicable) o.fail(name + ": expected closed-type");
    if (!v.agree()) o.fail(name + ": oracles disagree");
    if (name[0] == 't') {
      if (!v.harmonic()) o.fail(name + ": torus not harmonic");
      SymmetryReport s = symmetry_check(a.spectral(), true);
      if (!s.pass()) o.fail(name + ": " + s.witness);
    }
    if (name == "kt4") {
      if (v.harmonic()) o.fail("kt4 reported harmonic");
      if (v.thm5.witness_degree < 0) o.fail("kt4: no witness q");
      else o.detail = "kt4 not harmonic, witness q = " + std::to_string(v.thm5.witness_degree);
    }
  }
  if (o.pass) o.detail = "three oracles agree on 5 closed-type models; tori harmonic and symmetric; " + o.detail;
  return o;
}

Outcome star_route() {
  Outcome o;
  std::size_t disagreements = 0, star_failures = 0;
  for (const auto& name : all_models()) {
    OperatorSet ops(builtin(name));
    for (const auto& r : delta_route_check(ops)) {
      if (!r.agree) {
        ++disagreements;
        o.fail(name + " degree " + std::to_string(r.degree) + ": " + r.witness);
      }
    }
    for (const auto& r : star_involution_check(ops)) {
      if (!r.agree) {
        ++star_failures;
        o.fail(name + " degree " + std::to_string(r.degree) + ": " + r.witness);
      }
    }
  }
  if (!o.pass) {
    o.detail += "; " + std::to_string(disagreements) + " degrees with route mismatch, " + std::to_string(star_failures) +
                " degrees with ∗∗ ≠ id";
  } else {
    o.detail = "routes agree for k <= n; ∗∗ = id everywhere";
  }
  return o;
}

struct Process {
  int status = -1;
  std::string out;
};

Process run_process(const std::string& cmd) {
  Process p;
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) return p;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) p.out.append(buf.data(), n);
  int raw = pclose(pipe);
  p.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return p;
}

Outcome cli_contract(const std::string& cli_path) {
  Outcome o;
  if (cli_path.empty()) {
    o.fail("no --cli path given");
    return o;
  }
  const std::vector<std::string> repeated{"pages --model kt4", "pages --model kt4xt2 --format json",
                                          "verify --model kt4 --suites thm1,stab",
                                          "verify --model solv4 --suites eq1,props,thm1,stab --format json"};
  for (const auto& args : repeated) {
    Process a = run_process(cli_path + " " + args), b = run_process(cli_path + " " + args);
    if (a.out.empty() || a.out != b.out || a.status != b.status) o.fail("not byte-identical: " + args);
  }
  for (const auto& name : all_models()) {
    Process p = run_process(cli_path + " pages --model " + name + " --format json");
    cli::RunConfig c;
    c.command = cli::Command::pages;
    c.model_source = name;
    try {
      auto parsed = cli::parse_pages_json(nlohmann::json::parse(p.out)["pages"]);
      if (parsed != cli::run(c).pages) o.fail("JSON round-trip differs for " + name);
    } catch (const std::exception& e) {
      o.fail("JSON round-trip failed for " + name + ": " + e.what());
    }
  }
  auto expect_status = [&](const std::string& args, int status) {
    Process p = run_process(cli_path + " " + args);
    if (p.status != status) {
      o.fail("'" + args + "' exited " + std::to_string(p.status) + ", expected " + std::to_string(status));
    }
  };
  expect_status(std::string("pages --model ") + SYMSPEC_MODELS_DIR + "/broken.json", 2);
  expect_status("verify --model solv2 --suites harmonic", 1);
  expect_status("verify --model solv2 --suites thm1,stab", 0);
  expect_status("verify --model kt4 --suites thm1,stab", 0);
  expect_status("harmonic --model solv2", 0);
  if (o.pass) o.detail = "byte-identical reruns, JSON round-trip on 7 models, exit codes 0/1/2 as specified";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  std::string cli_path;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc) only = std::atoi(argv[++i]);
    else if (!std::strcmp(argv[i], "--cli") && i + 1 < argc) cli_path = argv[++i];
    else {
      std::cerr << "usage: acceptance [--criterion N] [--cli PATH]\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"operator identities", operator_identities_hold},
      {"Hodge-Lepage decomposition", hodge_lepage_decomposition},
      {"effective forms under d and δ", effective_forms},
      {"E0 structure and τ ranges", zeroth_page_structure},
      {"Theorem 1 exact sequence", exact_sequence},
      {"Theorem 2 exact-Ω pattern", exact_omega_pattern},
      {"Theorem 4 closed-type pages", closed_type_pages},
      {"convergence to cohomology", convergence},
      {"harmonicity triple oracle, Theorem 5", harmonicity},
      {"δ star route and ∗∗ = id", star_route},
      {"CLI determinism and exit codes", [&] { return cli_contract(cli_path); }},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " [" << o.detail
              << "]" << std::endl;
  }
  return all ? 0 : 1;
}
