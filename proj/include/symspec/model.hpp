#pragma once

// Symplectic Chevalley-Eilenberg models: an exterior algebra on m = 2n
// degree-1 generators, a derivation differential fixed by its values on the
// generators, and a closed nondegenerate 2-form Ω.

#include <algorithm>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "symspec/errors.hpp"
#include "symspec/exterior.hpp"
#include "symspec/linalg.hpp"

namespace symspec {

class Model {
 public:
  Model() = default;

  /// `d_generators[i]` is d(e^{i+1}); zero forms may carry any degree.
  /// Shape is checked here; symplectic validity is checked by validate().
  Model(std::string name, int generators, std::vector<Form> d_generators, Form omega)
      : name_(std::move(name)), m_(generators), d_gen_(std::move(d_generators)), omega_(std::move(omega)) {
    if (m_ < 2 || m_ % 2 != 0) {
      throw ModelError(ModelError::Kind::odd_dimension,
                       "model needs an even number (>= 2) of generators, got " + std::to_string(m_));
    }
    if (m_ > kMaxGenerators) {
      throw ModelError(ModelError::Kind::schema, "at most 16 generators are supported");
    }
    if (static_cast<int>(d_gen_.size()) != m_) {
      throw ModelError(ModelError::Kind::schema, "differential must be given on every generator");
    }
    for (auto& dg : d_gen_) {
      if (dg.is_zero()) dg = Form(m_, 2);
      if (dg.generators() != m_ || dg.degree() != 2) {
        throw ModelError(ModelError::Kind::schema, "d of a generator must be a 2-form over the model's generators");
      }
    }
    if (omega_.is_zero()) omega_ = Form(m_, 2);
    if (omega_.generators() != m_ || omega_.degree() != 2) {
      throw ModelError(ModelError::Kind::schema, "omega must be a 2-form over the model's generators");
    }
  }

  const std::string& name() const { return name_; }
  int generators() const { return m_; }
  int n() const { return m_ / 2; }
  const Form& omega() const { return omega_; }
  const std::vector<Form>& d_generators() const { return d_gen_; }
  /// d(e^i), 1-based.
  const Form& d_generator(int i) const { return d_gen_.at(i - 1); }

  Model renamed(std::string name) const {
    Model out = *this;
    out.name_ = std::move(name);
    return out;
  }

  friend bool operator==(const Model& a, const Model& b) {
    return a.name_ == b.name_ && a.m_ == b.m_ && a.d_gen_ == b.d_gen_ && a.omega_ == b.omega_;
  }

 private:
  std::string name_;
  int m_ = 0;
  std::vector<Form> d_gen_;
  Form omega_;
};

/// d extended from the generators as a degree +1 graded derivation.
inline Form extend_differential(const Model& model, const Form& w) {
  const int m = model.generators();
  if (w.generators() != m) throw DimensionError("form and model over different generator counts");
  Form out(m, w.degree() + 1);
  for (const auto& [idx, c] : w.terms()) {
    auto gens = idx.indices();
    // d(e^{i1}∧…∧e^{ik}) = Σ_s (-1)^s e^{i1..i(s-1)} ∧ d e^{is} ∧ e^{i(s+1)..ik}
    std::uint32_t before = 0;
    for (std::size_t s = 0; s < gens.size(); ++s) {
      const Form& dg = model.d_generator(gens[s]);
      std::uint32_t after = idx.bits() & ~before & ~(1u << (gens[s] - 1));
      Rational sign = (s % 2 == 0) ? c : Rational(-c);
      for (const auto& [gi, gc] : dg.terms()) {
        int s1 = wedge_sign(MultiIndex(before), gi);
        if (s1 == 0) continue;
        MultiIndex left(before | gi.bits());
        int s2 = wedge_sign(left, MultiIndex(after));
        if (s2 == 0) continue;
        out.add_term(MultiIndex(left.bits() | after), s1 * s2 * sign * gc);
      }
      before |= 1u << (gens[s] - 1);
    }
  }
  return out;
}

inline Form power(const Form& w, int t) {
  Form out = Form::scalar(w.generators(), 1);
  for (int i = 0; i < t; ++i) out = wedge(out, w);
  return out;
}

struct Check {
  std::string name;
  bool pass = false;
  std::string witness;
};

struct Diagnostics {
  std::vector<Check> checks;

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

inline Diagnostics validate(const Model& model) {
  Diagnostics out;
  const int m = model.generators();

  Check dd{"d^2 = 0", true, {}};
  for (int i = 1; i <= m; ++i) {
    Form ddi = extend_differential(model, model.d_generator(i));
    if (!ddi.is_zero()) {
      dd.pass = false;
      dd.witness = "d(d e" + std::to_string(i) + ") = " + ddi.str();
      break;
    }
  }
  out.checks.push_back(dd);

  Form d_omega = extend_differential(model, model.omega());
  out.checks.push_back({"d(omega) = 0", d_omega.is_zero(), d_omega.is_zero() ? "" : d_omega.str()});

  Form top = power(model.omega(), model.n());
  out.checks.push_back({"omega^n != 0", !top.is_zero(), top.is_zero() ? "omega^n = 0" : ""});
  return out;
}

inline Model validated(Model model) {
  auto diag = validate(model);
  if (!diag.ok()) {
    std::string msg = "model '" + model.name() + "' is not symplectic:";
    for (const auto& c : diag.checks) {
      if (!c.pass) msg += " [" + c.name + " fails: " + c.witness + "]";
    }
    throw ModelError(ModelError::Kind::validation, msg);
  }
  return model;
}

/// Shifts every generator index of w up by `offset` into a model with m generators.
inline Form shift_generators(const Form& w, int offset, int m) {
  Form out(m, w.degree());
  for (const auto& [idx, c] : w.terms()) out.add_term(MultiIndex(idx.bits() << offset), c);
  return out;
}

/// Product model: disjoint generators (b's shifted past a's), Ω = Ω_a + Ω_b.
inline Model product(const Model& a, const Model& b) {
  validated(a);
  validated(b);
  const int m = a.generators() + b.generators();
  std::vector<Form> d;
  for (const auto& dg : a.d_generators()) d.push_back(shift_generators(dg, 0, m));
  for (const auto& dg : b.d_generators()) d.push_back(shift_generators(dg, a.generators(), m));
  Form omega = shift_generators(a.omega(), 0, m) + shift_generators(b.omega(), a.generators(), m);
  return validated(Model(a.name() + "x" + b.name(), m, std::move(d), std::move(omega)));
}

namespace detail {

inline Form two_form(int m, std::initializer_list<std::pair<int, int>> pairs) {
  Form out(m, 2);
  for (auto [i, j] : pairs) out.add_term(MultiIndex::of({i, j}), 1);
  return out;
}

inline Model torus(int m) {
  Form omega(m, 2);
  for (int i = 1; i < m; i += 2) omega.add_term(MultiIndex::of({i, i + 1}), 1);
  return Model("t" + std::to_string(m), m, std::vector<Form>(m, Form(m, 2)), omega);
}

}  // namespace detail

inline std::vector<std::string> builtin_names() {
  return {"t2", "t4", "t6", "kt4", "solv2", "solv4", "kt4xt2"};
}

inline Model builtin(std::string_view name) {
  using detail::two_form;
  if (name == "t2") return validated(detail::torus(2));
  if (name == "t4") return validated(detail::torus(4));
  if (name == "t6") return validated(detail::torus(6));
  if (name == "kt4") {
    // Kodaira-Thurston: de4 = e1^e2, Ω = e14 + e23.
    std::vector<Form> d(4, Form(4, 2));
    d[3] = two_form(4, {{1, 2}});
    return validated(Model("kt4", 4, std::move(d), two_form(4, {{1, 4}, {2, 3}})));
  }
  if (name == "solv2") {
    // de2 = e1^e2, Ω = e12 = d(e2).
    std::vector<Form> d(2, Form(2, 2));
    d[1] = two_form(2, {{1, 2}});
    return validated(Model("solv2", 2, std::move(d), two_form(2, {{1, 2}})));
  }
  if (name == "solv4") return product(builtin("solv2"), builtin("solv2")).renamed("solv4");
  if (name == "kt4xt2") return product(builtin("kt4"), builtin("t2"));
  std::string known;
  for (const auto& n : builtin_names()) known += (known.empty() ? "" : ", ") + n;
  throw ModelError(ModelError::Kind::unknown_builtin,
                   "unknown builtin model '" + std::string(name) + "'; available: " + known);
}

/// Matrix of d: Λ^1 → Λ^2.
inline Matrix differential_on_generators(const Model& model, const MonomialBasis& basis) {
  const int m = model.generators();
  Matrix out(basis.dim(2), basis.dim(1));
  for (int i = 1; i <= m; ++i) {
    for (const auto& [idx, c] : model.d_generator(i).terms()) out(basis.position(idx), i - 1) = c;
  }
  return out;
}

/// Whether the underlying Lie algebra is nilpotent: the chain W_1 = ker d|Λ^1,
/// W_{j+1} = {α : dα ∈ Λ^2 W_j} must exhaust Λ^1.
inline bool is_nilpotent(const Model& model) {
  MonomialBasis basis(model.generators());
  Matrix d1 = differential_on_generators(model, basis);
  Subspace w(1, basis.dim(1));
  for (int step = 0; step <= model.generators(); ++step) {
    std::vector<Vector> products;
    const auto& b = w.basis();
    for (std::size_t i = 0; i < b.size(); ++i) {
      for (std::size_t j = i + 1; j < b.size(); ++j) {
        products.push_back(wedge(Form::from_vector(basis, 1, b[i]), Form::from_vector(basis, 1, b[j])).to_vector(basis));
      }
    }
    Subspace next = preimage(d1, Subspace::span(2, basis.dim(2), products), 1);
    if (next == w) break;
    w = std::move(next);
  }
  return w.dim() == basis.dim(1);
}

}  // namespace symspec
