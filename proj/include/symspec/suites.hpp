#pragma once

// Verification suites over one model. Each suite returns pass/fail checks
// with witnesses; a failed check is a finding about the model, while broken
// internal identities surface as InvariantViolation.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "symspec/cohomology.hpp"
#include "symspec/model.hpp"
#include "symspec/operators.hpp"
#include "symspec/sampling.hpp"
#include "symspec/spectral.hpp"

namespace symspec {

/// Everything computed for one model, built once and shared by the suites.
class Analysis {
 public:
  explicit Analysis(Model model, int last_page = -1)
      : ops_(std::make_unique<OperatorSet>(std::move(model))),
        ss_(std::make_unique<SpectralSequence>(*ops_, last_page)),
        coh_(std::make_unique<Cohomology>(*ops_)),
        seq_(std::make_unique<ExactSequence>(*coh_, *ss_)) {}

  const Model& model() const { return ops_->model(); }
  const OperatorSet& ops() const { return *ops_; }
  const SpectralSequence& spectral() const { return *ss_; }
  const Cohomology& cohomology() const { return *coh_; }
  const ExactSequence& sequence() const { return *seq_; }

 private:
  std::unique_ptr<OperatorSet> ops_;
  std::unique_ptr<SpectralSequence> ss_;
  std::unique_ptr<Cohomology> coh_;
  std::unique_ptr<ExactSequence> seq_;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"eq1", "hodge-lepage", "props", "thm1", "stab", "harmonic", "symmetry"};
  return names;
}

inline std::vector<Check> eq1_suite(const Analysis& a) { return operator_identities(a.ops()); }

inline constexpr std::uint64_t kDefaultSeed = 20240611;

inline std::vector<Check> hodge_lepage_suite(const Analysis& a, int samples = 1000, std::uint64_t seed = kDefaultSeed) {
  const auto& ops = a.ops();
  const auto& basis = ops.basis();
  const int m = ops.generators();
  std::vector<Check> out;

  Check dims{"Hodge-Lepage: dim Λ^k = dim Λ_ε^k + dim ⊤Λ^{k-2}", true, {}};
  for (int k = 0; k <= m; ++k) {
    std::size_t lifted = k >= 2 ? rank(ops.top_map().block(k - 2)) : 0;
    if (basis.dim(k) != ops.effective(k).dim() + lifted) {
      dims.pass = false;
      dims.witness = "k = " + std::to_string(k);
      break;
    }
  }
  out.push_back(dims);

  FormSampler sampler(seed);
  Check decomposition{"Hodge-Lepage: " + std::to_string(samples) + " random forms decompose into effective parts", true, {}};
  for (int s = 0; s < samples && decomposition.pass; ++s) {
    Form w = sampler.form(basis, sampler.degree(m));
    HodgeLepage hl = ops.hodge_lepage(w);
    if (!(ops.reassemble(hl) == w)) {
      decomposition.pass = false;
      decomposition.witness = "re-sum differs for " + w.str();
    }
    for (const auto& c : hl.components) {
      if (!ops.bot(c).is_zero()) {
        decomposition.pass = false;
        decomposition.witness = "component " + c.str() + " of " + w.str() + " is not effective";
        break;
      }
    }
  }
  out.push_back(decomposition);
  return out;
}

/// d of an effective form has Hodge-Lepage components 0 and 1 only, and δ
/// maps effective forms to effective forms.
inline std::vector<Check> effective_form_checks(const Analysis& a) {
  const auto& ops = a.ops();
  const auto& basis = ops.basis();
  const int m = ops.generators();
  Check split{"d of an effective form has Hodge-Lepage components 0 and 1 only", true, {}};
  Check delta{"δ maps effective forms to effective forms", true, {}};
  for (int k = 0; k <= m; ++k) {
    for (const auto& v : ops.effective(k).basis()) {
      Form w = Form::from_vector(basis, k, v);
      if (split.pass && k < m) {
        HodgeLepage hl = ops.hodge_lepage(ops.d(w));
        for (std::size_t i = 2; i < hl.components.size(); ++i) {
          if (!hl.components[i].is_zero()) {
            split.pass = false;
            split.witness = "ω = " + w.str() + " has component " + std::to_string(i) + " = " + hl.components[i].str();
            break;
          }
        }
      }
      if (delta.pass && k > 0 && !ops.bot(ops.delta(w)).is_zero()) {
        delta.pass = false;
        delta.witness = "δ(" + w.str() + ") = " + ops.delta(w).str();
      }
    }
  }
  return {split, delta};
}

namespace detail {

inline std::string bidegree(int p, int q) { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }

inline Check tau_check(std::string name, const std::vector<TauCheck>& checks) {
  Check c{std::move(name), true, {}};
  if (checks.empty()) c.witness = "empty range";
  for (const auto& t : checks) {
    if (!t.iso) {
      c.pass = false;
      c.witness = "τ_" + std::to_string(t.r) + "^" + std::to_string(t.k) + " at " + bidegree(t.p, t.q) + ": dims " +
                  std::to_string(t.source_dim) + " → " + std::to_string(t.target_dim);
      break;
    }
  }
  return c;
}

}  // namespace detail

/// Structure of the first pages: triangle support, E_0^{0,q} ≅ Λ_ε^q, the τ
/// isomorphism ranges, and monotonicity of entry dimensions in r.
inline std::vector<Check> page_structure_checks(const Analysis& a) {
  const auto& ss = a.spectral();
  const auto& ops = a.ops();
  const int n = ops.n();
  std::vector<Check> out;

  Check support{"E0 vanishes outside 0 <= p <= q <= n", true, {}};
  for (const auto& [pq, dim] : ss.page(0).dims()) {
    auto [p, q] = pq;
    if (!(0 <= p && p <= q && q <= n)) {
      support.pass = false;
      support.witness = "E0" + detail::bidegree(p, q) + " = " + std::to_string(dim);
      break;
    }
  }
  out.push_back(support);

  Check effective{"dim E0^{0,q} = dim Λ_ε^q", true, {}};
  for (int q = 0; q <= ops.generators(); ++q) {
    if (ss.page(0).dim(0, q) != ops.effective(q).dim()) {
      effective.pass = false;
      effective.witness = "q = " + std::to_string(q);
      break;
    }
  }
  out.push_back(effective);

  out.push_back(detail::tau_check("τ_0^p: E0^{0,q-p} → E0^{p,q} isomorphic for 0 <= p <= q <= n", tau0_range(ss)));
  out.push_back(detail::tau_check("τ_1^p: E1^{0,q-p} → E1^{p,q} isomorphic for 0 <= p <= q < n", tau1_range(ss)));
  for (int r = 1; r <= n + 1; ++r) {
    out.push_back(detail::tau_check("τ_" + std::to_string(r) + "^k isomorphic on the stated window", tau_window(ss, r)));
  }

  Check monotone{"entry dimensions are nonincreasing in r", true, {}};
  for (int r = 0; r < ss.last_page() && monotone.pass; ++r) {
    for (const auto& [pq, e] : ss.page(r + 1).entries) {
      if (e.dim() > ss.page(r).dim(pq.first, pq.second)) {
        monotone.pass = false;
        monotone.witness = "page " + std::to_string(r + 1) + " at " + detail::bidegree(pq.first, pq.second);
        break;
      }
    }
  }
  out.push_back(monotone);
  return out;
}

inline std::vector<Check> props_suite(const Analysis& a) {
  std::vector<Check> out = effective_form_checks(a);
  for (auto& c : page_structure_checks(a)) out.push_back(std::move(c));
  return out;
}

inline std::vector<Check> thm1_suite(const Analysis& a) {
  std::vector<Check> out;
  for (int p = 0; p <= a.ops().n(); ++p) {
    ExactnessReport report = a.sequence().verify(p);
    std::string witness;
    if (!report.exact()) {
      for (const auto& node : report.nodes) {
        if (node.exact) continue;
        witness = "not exact at " + node.label + ": dim " + std::to_string(node.dim) + ", rank in " +
                  std::to_string(node.rank_in) + ", rank out " + std::to_string(node.rank_out) +
                  (node.composite_zero ? "" : ", composite nonzero");
        break;
      }
    }
    out.push_back({"Theorem 1: sequence exact in column p = " + std::to_string(p), report.exact(), witness});
  }
  return out;
}

inline std::vector<Check> stab_suite(const Analysis& a) { return stabilization_verdicts(a.cohomology(), a.spectral()); }

inline Check closed_type_check(const Analysis& a) {
  ClosednessProfile profile = a.cohomology().closedness();
  return {"closed-type hypothesis: [Ω^t] ≠ 0 for all t <= n", profile.closed_type(),
          profile.t_min ? "Ω^" + std::to_string(*profile.t_min) + " is exact" : ""};
}

inline std::string describe(const OracleResult& r) {
  if (r.harmonic) return "harmonic";
  return "not harmonic (witness degree " + std::to_string(r.witness_degree) + ": " + r.witness + ")";
}

inline Check oracle_agreement(const HarmonicVerdict& v) {
  Check c{"Theorem 5: three harmonicity oracles agree", v.agree(), {}};
  if (!v.agree()) {
    c.witness = "direct " + describe(v.direct) + "; components " + describe(v.prop6) + "; page 2 " + describe(v.thm5);
    if (!v.enforced()) {
      c.pass = true;
      c.witness = "not enforced (model is not closed-type nilpotent): " + c.witness;
    }
  }
  return c;
}

inline std::vector<Check> harmonic_suite(const Analysis& a) {
  HarmonicVerdict v = harmonic_verdict(a.cohomology(), a.spectral());
  return {closed_type_check(a), oracle_agreement(v)};
}

inline std::vector<Check> symmetry_suite(const Analysis& a) {
  HarmonicVerdict v = harmonic_verdict(a.cohomology(), a.spectral());
  SymmetryReport s = symmetry_check(a.spectral(), v.harmonic() && v.applicable);
  Check sym{"E2 symmetric about p+q = n via τ_2^{n-p-q}", s.pass(), s.witness};
  if (!s.checked) {
    sym.pass = true;
    sym.witness = "skipped, model is not harmonic; table " + std::string(s.table_symmetric ? "symmetric" : "asymmetric") +
                  (s.table_symmetric ? "" : ": " + s.witness);
  }
  return {closed_type_check(a), sym};
}

/// Runs the named suites in the order given.
inline std::vector<Check> run_suites(const Analysis& a, const std::vector<std::string>& suites) {
  std::vector<Check> out;
  for (const auto& name : suites) {
    std::vector<Check> part;
    if (name == "eq1") part = eq1_suite(a);
    else if (name == "hodge-lepage") part = hodge_lepage_suite(a);
    else if (name == "props") part = props_suite(a);
    else if (name == "thm1") part = thm1_suite(a);
    else if (name == "stab") part = stab_suite(a);
    else if (name == "harmonic") part = harmonic_suite(a);
    else if (name == "symmetry") part = symmetry_suite(a);
    else throw UsageError("unknown suite '" + name + "'");
    for (auto& c : part) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace symspec
