#pragma once

// Operator calculus of a symplectic model: Γ, the Poisson bivector P, the
// Lefschetz pair ⊤ω = ω∧Ω and ⊥ω = P⌟ω, the symplectic star, the
// codifferential δ, effective forms and the Hodge-Lepage decomposition.
//
// δ is defined as the commutator ⊥∘d − d∘⊥. The star route (-1)^{k+1} ∗d∗ is
// kept as an independent diagnostic (delta_route_check).

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symspec/errors.hpp"
#include "symspec/exterior.hpp"
#include "symspec/linalg.hpp"
#include "symspec/model.hpp"

namespace symspec {

struct HodgeLepage {
  int degree = 0;
  /// components[i] is ω_i, an effective form of degree degree − 2i. Components
  /// with i < degree − n are identically zero (⊤^i kills Λ_ε^{degree-2i}).
  std::vector<Form> components;
};

class OperatorSet {
 public:
  explicit OperatorSet(Model model, ContractionConvention convention = kContractionConvention)
      : model_(validated(std::move(model))),
        convention_(convention),
        basis_(std::make_shared<const MonomialBasis>(model_.generators())) {
    const int m = model_.generators();
    const int n = model_.n();

    d_ = GradedMap::from_function(basis_, 1, [&](const Form& w) { return extend_differential(model_, w); });
    top_ = GradedMap::from_function(basis_, 2, [&](const Form& w) { return wedge(w, model_.omega()); });

    build_poisson();
    bot_ = GradedMap::from_function(basis_, -2, [&](const Form& w) { return contract(poisson_, w, convention_); });
    delta_ = compose(bot_, d_) - compose(d_, bot_);

    top_powers_.push_back(GradedMap::from_function(basis_, 0, [](const Form& w) { return w; }));
    for (int p = 1; p <= n + 1; ++p) top_powers_.push_back(compose(top_, top_powers_.back()));

    for (int k = 0; k <= m; ++k) effective_.push_back(kernel(bot_.block(k), k));
    for (int k = 0; k <= m; ++k) build_hodge_lepage(k);
    build_star();
  }

  const Model& model() const { return model_; }
  ContractionConvention convention() const { return convention_; }
  int generators() const { return model_.generators(); }
  int n() const { return model_.n(); }
  const MonomialBasis& basis() const { return *basis_; }
  const std::shared_ptr<const MonomialBasis>& basis_ptr() const { return basis_; }

  /// P with Γ(P) = Ω.
  const Multivector& poisson() const { return poisson_; }

  const GradedMap& d_map() const { return d_; }
  const GradedMap& top_map() const { return top_; }
  const GradedMap& bot_map() const { return bot_; }
  const GradedMap& delta_map() const { return delta_; }
  /// ⊤^p for 0 <= p <= n+1.
  const GradedMap& top_power(int p) const { return top_powers_.at(p); }

  /// ∗ on Λ^k, a matrix Λ^k → Λ^{2n-k}. The star is not a fixed-shift map, so
  /// it is held per degree rather than as a GradedMap.
  const Matrix& star_block(int k) const {
    if (!star_ok_) throw InvariantViolation("symplectic star is degenerate on this model", star_diagnostic_);
    return star_blocks_.at(k);
  }
  bool star_defined() const { return star_ok_; }
  const std::string& star_diagnostic() const { return star_diagnostic_; }

  Form d(const Form& w) const { return d_.apply(w); }
  Form top(const Form& w) const { return top_.apply(w); }
  Form bot(const Form& w) const { return bot_.apply(w); }
  Form delta(const Form& w) const { return delta_.apply(w); }
  Form star(const Form& w) const {
    const int k = w.degree();
    return Form::from_vector(*basis_, generators() - k, star_block(k).apply(w.to_vector(*basis_)));
  }

  /// Γ on multivectors: the algebra extension of V ↦ V⌟Ω.
  Form gamma(const Multivector& v) const {
    const int m = generators();
    Form out(m, v.degree());
    for (const auto& [idx, c] : v.terms()) {
      Form prod = Form::scalar(m, c);
      for (int i : idx.indices()) prod = wedge(prod, gamma_generator(i));
      out += prod;
    }
    return out;
  }

  /// Λ_ε^k = ker ⊥ on Λ^k.
  const Subspace& effective(int k) const { return effective_.at(k); }

  HodgeLepage hodge_lepage(const Form& w) const {
    const int k = w.degree();
    const auto& hl = hodge_lepage_.at(k);
    auto x = hl.solver.solve(w.to_vector(*basis_));
    if (!x) throw InvariantViolation("Hodge-Lepage system is unsolvable", w.str());
    HodgeLepage out{k, {}};
    std::size_t offset = 0;
    for (int i = 0; 2 * i <= k; ++i) {
      Vector comp(basis_->dim(k - 2 * i));
      if (!contributes(k, i)) {
        out.components.push_back(Form::from_vector(*basis_, k - 2 * i, comp));
        continue;
      }
      const Subspace& eff = effective_[k - 2 * i];
      for (std::size_t b = 0; b < eff.dim(); ++b) {
        const Rational& c = (*x)[offset + b];
        if (c == 0) continue;
        for (std::size_t j = 0; j < comp.size(); ++j) comp[j] += c * eff.basis()[b][j];
      }
      offset += eff.dim();
      out.components.push_back(Form::from_vector(*basis_, k - 2 * i, comp));
    }
    return out;
  }

  Form reassemble(const HodgeLepage& hl) const {
    Form out(generators(), hl.degree);
    for (std::size_t i = 0; i < hl.components.size(); ++i) out += top_power(static_cast<int>(i)).apply(hl.components[i]);
    return out;
  }

  /// Matrix of ω ↦ ω_i on Λ^k.
  Matrix hodge_lepage_component(int k, int i) const {
    const auto& monomials = basis_->monomials(k);
    std::vector<Vector> cols;
    for (const auto& mono : monomials) {
      auto hl = hodge_lepage(Form::monomial(generators(), mono));
      cols.push_back(hl.components.at(i).to_vector(*basis_));
    }
    return Matrix::from_columns(basis_->dim(k - 2 * i), cols);
  }

  /// (-1)^{k+1} ∗ d ∗ on Λ^k for 1 <= k <= n (degree 0 maps to nothing).
  Matrix delta_star_route(int k) const {
    const int n2 = 2 * n();
    if (k < 1 || k > n()) throw DimensionError("star route is only evaluated on degrees 1..n");
    Matrix out = star_block(n2 - k + 1) * d_.block(n2 - k) * star_block(k);
    return (k % 2 == 1) ? out : Rational(-1) * out;
  }

 private:
  struct HodgeLepageSystem {
    LinearSolver solver;
  };

  // ⊤^i is injective on Λ_ε^{k-2i} iff i >= k - n; below that it annihilates
  // the whole piece, so the component carries no information and is set to 0.
  bool contributes(int k, int i) const { return i >= k - n(); }

  Form gamma_generator(int i) const {
    Multivector di = Multivector::monomial(generators(), {i});
    return contract(di, model_.omega(), convention_);
  }

  void build_poisson() {
    const int m = generators();
    const auto& pairs = basis_->monomials(2);
    std::vector<Vector> cols;
    for (const auto& idx : pairs) cols.push_back(gamma(Multivector::monomial(m, idx)).to_vector(*basis_));
    LinearSolver solver(pairs.size(), cols);
    if (!solver.full_column_rank()) throw InvariantViolation("Γ is singular on bivectors; Ω is degenerate");
    auto x = solver.solve(model_.omega().to_vector(*basis_));
    if (!x) throw InvariantViolation("Γ(P) = Ω has no solution");
    poisson_ = Multivector(m, 2);
    for (std::size_t j = 0; j < pairs.size(); ++j) poisson_.add_term(pairs[j], (*x)[j]);
    if (gamma(poisson_) != model_.omega()) throw InvariantViolation("Γ(P) does not reproduce Ω", poisson_.str());
  }

  void build_hodge_lepage(int k) {
    std::vector<Vector> cols;
    for (int i = 0; 2 * i <= k; ++i) {
      if (!contributes(k, i)) continue;
      for (const auto& b : effective_[k - 2 * i].basis()) cols.push_back(top_powers_[i].block(k - 2 * i).apply(b));
    }
    LinearSolver solver(basis_->dim(k), cols);
    if (cols.size() != basis_->dim(k) || !solver.full_column_rank()) {
      throw InvariantViolation("Λ^" + std::to_string(k) + " is not the direct sum of ⊤^i Λ_ε^{k-2i}",
                               std::to_string(cols.size()) + " columns, rank " + std::to_string(solver.rank()) +
                                   ", dim " + std::to_string(basis_->dim(k)));
    }
    hodge_lepage_.push_back({std::move(solver)});
  }

  // η∧∗ω = ⊥^k(η∧ω) Ω^n for η, ω ∈ Λ^k, solved per degree k <= n. For k > n
  // the pairing vanishes identically, so ∗ there is the inverse of ∗ on Λ^{2n-k}.
  void build_star() {
    const int m = generators();
    const int n = this->n();
    std::vector<Matrix> blocks(m + 1);
    const MultiIndex top_monomial((1u << m) - 1);
    const Rational volume = power(model_.omega(), n).coeff(top_monomial);

    for (int k = 0; k <= n; ++k) {
      const auto& eta = basis_->monomials(k);
      const auto& dual = basis_->monomials(m - k);
      Matrix pairing(eta.size(), dual.size());
      for (std::size_t i = 0; i < eta.size(); ++i) {
        for (std::size_t j = 0; j < dual.size(); ++j) {
          if ((eta[i].bits() | dual[j].bits()) == top_monomial.bits()) pairing(i, j) = wedge_sign(eta[i], dual[j]);
        }
      }
      Matrix rhs(eta.size(), eta.size());
      for (std::size_t i = 0; i < eta.size(); ++i) {
        for (std::size_t j = 0; j < eta.size(); ++j) {
          Form prod = wedge(Form::monomial(m, eta[i]), Form::monomial(m, eta[j]));
          for (int s = 0; s < k; ++s) prod = bot_.apply(prod);
          rhs(i, j) = volume * prod.coeff(MultiIndex{});
        }
      }
      auto inv = inverse(pairing);
      if (!inv) {
        fail_star("wedge pairing Λ^" + std::to_string(k) + " × Λ^" + std::to_string(m - k) + " is singular");
        return;
      }
      blocks[k] = *inv * rhs;
    }
    for (int k = n + 1; k <= m; ++k) {
      auto inv = inverse(blocks[m - k]);
      if (!inv) {
        fail_star("star on Λ^" + std::to_string(m - k) + " is not invertible, so star on Λ^" + std::to_string(k) +
                  " is undefined");
        return;
      }
      blocks[k] = *inv;
    }
    star_blocks_ = std::move(blocks);
    star_ok_ = true;
  }

  void fail_star(std::string why) {
    star_ok_ = false;
    star_diagnostic_ = std::move(why);
  }

  Model model_;
  ContractionConvention convention_;
  std::shared_ptr<const MonomialBasis> basis_;
  Multivector poisson_;
  GradedMap d_, top_, bot_, delta_;
  std::vector<Matrix> star_blocks_;
  std::vector<GradedMap> top_powers_;
  std::vector<Subspace> effective_;
  std::vector<HodgeLepageSystem> hodge_lepage_;
  bool star_ok_ = false;
  std::string star_diagnostic_;
};

/// Pass/fail of each operator identity as an exact matrix identity per degree:
/// dδ + δd = 0, ⊤d − d⊤ = 0, ⊤δ − δ⊤ = d, ⊥δ − δ⊥ = 0, δ² = 0, Γ(P) = Ω.
inline std::vector<Check> operator_identities(const OperatorSet& ops) {
  const auto& d = ops.d_map();
  const auto& delta = ops.delta_map();
  const auto& top = ops.top_map();
  const auto& bot = ops.bot_map();
  auto first_bad_degree = [&](const GradedMap& lhs, const GradedMap& rhs) -> std::string {
    for (int k = 0; k <= ops.generators(); ++k) {
      if (!(lhs.block(k) == rhs.block(k))) return "degree " + std::to_string(k);
    }
    return {};
  };
  GradedMap zero0(ops.basis_ptr(), 0), zero_m2(ops.basis_ptr(), -2);
  std::vector<Check> out;
  auto add = [&](std::string name, const GradedMap& lhs, const GradedMap& rhs) {
    std::string bad = first_bad_degree(lhs, rhs);
    out.push_back({std::move(name), bad.empty(), bad});
  };
  add("d∘δ + δ∘d = 0", compose(d, delta) + compose(delta, d), zero0);
  add("⊤∘d − d∘⊤ = 0", compose(top, d) - compose(d, top), GradedMap(ops.basis_ptr(), 3));
  add("⊤∘δ − δ∘⊤ = d", compose(top, delta) - compose(delta, top), d);
  add("⊥∘δ − δ∘⊥ = 0", compose(bot, delta) - compose(delta, bot), GradedMap(ops.basis_ptr(), -3));
  add("δ∘δ = 0", compose(delta, delta), zero_m2);
  bool gamma_ok = ops.gamma(ops.poisson()) == ops.model().omega();
  out.push_back({"Γ(P) = Ω", gamma_ok, gamma_ok ? "" : ops.gamma(ops.poisson()).str()});
  return out;
}

struct RouteCheck {
  int degree = 0;
  bool agree = false;
  std::string witness;
};

/// Compares δ = [⊥, d] with (-1)^{k+1} ∗d∗ on every degree 1 <= k <= n.
inline std::vector<RouteCheck> delta_route_check(const OperatorSet& ops) {
  std::vector<RouteCheck> out;
  for (int k = 1; k <= ops.n(); ++k) {
    Matrix via_star = ops.delta_star_route(k);
    const Matrix& via_commutator = ops.delta_map().block(k);
    RouteCheck rc{k, via_star == via_commutator, {}};
    if (!rc.agree) {
      const auto& monomials = ops.basis().monomials(k);
      for (std::size_t j = 0; j < monomials.size(); ++j) {
        if (via_star.column(j) != via_commutator.column(j)) {
          Form w = Form::monomial(ops.generators(), monomials[j]);
          rc.witness = "ω = " + w.str() + ": [⊥,d]ω = " +
                       Form::from_vector(ops.basis(), k - 1, via_commutator.column(j)).str() +
                       ", (-1)^{k+1}∗d∗ω = " + Form::from_vector(ops.basis(), k - 1, via_star.column(j)).str();
          break;
        }
      }
    }
    out.push_back(std::move(rc));
  }
  return out;
}

/// ∗∘∗ = id on every degree 0..2n.
inline std::vector<RouteCheck> star_involution_check(const OperatorSet& ops) {
  std::vector<RouteCheck> out;
  const int m = ops.generators();
  for (int k = 0; k <= m; ++k) {
    Matrix twice = ops.star_block(m - k) * ops.star_block(k);
    RouteCheck rc{k, twice == Matrix::identity(ops.basis().dim(k)), {}};
    if (!rc.agree) {
      const auto& monomials = ops.basis().monomials(k);
      for (std::size_t j = 0; j < monomials.size(); ++j) {
        Vector col = twice.column(j);
        Vector unit(monomials.size());
        unit[j] = 1;
        if (col != unit) {
          rc.witness = "∗∗(" + Form::monomial(m, monomials[j]).str() + ") = " +
                       Form::from_vector(ops.basis(), k, col).str();
          break;
        }
      }
    }
    out.push_back(std::move(rc));
  }
  return out;
}

}  // namespace symspec
