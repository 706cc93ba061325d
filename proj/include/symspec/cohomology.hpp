#pragma once

// Cohomology of a model and the long exact sequence relating it to E_1:
//
//   0 → H^0 →φ E_1^{p,p} →ψ 0 →τ H^1 →φ E_1^{p,p+1} →ψ H^0 →τ H^2 → …
//     → C^{n-p} →φ E_1^{p,n} →ψ C^{n-p-1} →τ^{p+1} H^{n+p+1} → 0
//
// with φ[ω] = [⊤^p ω], ψ[z] = [η] where ⊤^{p+1} η = dz, and τ = ⊤.
// A^k = {ω ∈ Λ^k : dω effective}, C^k = A^k / dΛ^{k-1}.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "symspec/errors.hpp"
#include "symspec/linalg.hpp"
#include "symspec/model.hpp"
#include "symspec/operators.hpp"
#include "symspec/spectral.hpp"

namespace symspec {

struct CohomologyClass {
  int degree = 0;
  Form representative;
  Vector coordinates;
};

struct ClosednessProfile {
  /// class_nonzero[t-1] says whether [Ω^t] ≠ 0, for t = 1..n.
  std::vector<bool> class_nonzero;
  /// Least t with Ω^t exact; empty when every power is cohomologically nonzero.
  std::optional<int> t_min;

  bool closed_type() const { return !t_min.has_value(); }
};

class Cohomology {
 public:
  /// The operator set must outlive this object.
  explicit Cohomology(const OperatorSet& ops) : ops_(&ops) {
    const int m = ops.generators();
    for (int k = 0; k <= m; ++k) {
      Subspace closed = kernel(ops.d_map().block(k), k);
      Subspace exact = exact_forms(k);
      de_rham_.emplace_back(closed, exact);
      a_spaces_.push_back(preimage(ops.d_map().block(k), effective_or_zero(k + 1), k));
      c_spaces_.emplace_back(a_spaces_.back(), exact);
    }
  }

  const OperatorSet& operators() const { return *ops_; }

  /// H^k = ker d_k / im d_{k-1}; the zero space outside 0..2n.
  Quotient de_rham(int k) const {
    if (k < 0 || k > ops_->generators()) return zero_space(k);
    return de_rham_[k];
  }

  std::vector<std::size_t> betti() const {
    std::vector<std::size_t> out;
    for (const auto& h : de_rham_) out.push_back(h.dim());
    return out;
  }

  std::vector<CohomologyClass> classes(int k) const {
    std::vector<CohomologyClass> out;
    Quotient h = de_rham(k);
    for (std::size_t i = 0; i < h.dim(); ++i) {
      Vector coords(h.dim());
      coords[i] = 1;
      out.push_back({k, Form::from_vector(ops_->basis(), k, h.reps()[i]), coords});
    }
    return out;
  }

  /// Coordinates of the class of a closed form.
  Vector class_of(const Form& closed) const {
    const int k = closed.degree();
    Vector v = closed.to_vector(ops_->basis());
    Quotient h = de_rham(k);
    if (!h.in_numerator(v)) throw InvariantViolation("form is not closed", closed.str());
    return h.coordinates(v);
  }

  /// [ω] ↦ [Ω^t ∧ ω].
  CohomologyClass lefschetz(const CohomologyClass& c, int t) const {
    Form image = ops_->top_power(t).apply(c.representative);
    return {image.degree(), image, class_of(image)};
  }

  /// Matrix of [ω] ↦ [Ω^t ∧ ω] from H^k to H^{k+2t}.
  Matrix lefschetz_matrix(int k, int t) const {
    return induced_map(de_rham(k), de_rham(k + 2 * t), power_block(t, k), "Lefschetz map");
  }

  /// A^k = d^{-1}(Λ_ε^{k+1}) ∩ Λ^k.
  Subspace a_space(int k) const {
    if (k < 0 || k > ops_->generators()) return Subspace(k, 0);
    return a_spaces_[k];
  }

  /// C^k = A^k / im d_{k-1}.
  Quotient c_space(int k) const {
    if (k < 0 || k > ops_->generators()) return zero_space(k);
    return c_spaces_[k];
  }

  ClosednessProfile closedness() const {
    ClosednessProfile out;
    const Form& omega = ops_->model().omega();
    for (int t = 1; t <= ops_->n(); ++t) {
      Form w = power(omega, t);
      bool nonzero = !de_rham(2 * t).is_zero_class(w.to_vector(ops_->basis()));
      out.class_nonzero.push_back(nonzero);
      if (!nonzero && !out.t_min) out.t_min = t;
    }
    return out;
  }

  /// ⊤^t as a matrix Λ^k → Λ^{k+2t}; empty when either side is out of range.
  Matrix power_block(int t, int k) const {
    const int m = ops_->generators();
    if (k < 0 || k > m) return Matrix(k + 2 * t >= 0 && k + 2 * t <= m ? ops_->basis().dim(k + 2 * t) : 0, 0);
    return ops_->top_power(t).block(k);
  }

  /// Matrix of the map induced on quotients by `f`, asserting that f sends
  /// the source numerator into the target numerator and the source denominator
  /// to zero classes.
  static Matrix induced_map(const Quotient& src, const Quotient& dst, const Matrix& f, const std::string& what) {
    Matrix out(dst.dim(), src.dim());
    if (src.ambient() == 0 || dst.ambient() == 0) return out;
    if (f.cols() != src.ambient() || f.rows() != dst.ambient()) throw DimensionError(what + ": shape mismatch");
    for (std::size_t j = 0; j < src.dim(); ++j) {
      Vector image_v = f.apply(src.reps()[j]);
      if (!dst.in_numerator(image_v)) throw InvariantViolation(what + " leaves the target space");
      Vector c = dst.coordinates(image_v);
      for (std::size_t i = 0; i < dst.dim(); ++i) out(i, j) = c[i];
    }
    for (const auto& b : src.denominator().basis()) {
      Vector image_b = f.apply(b);
      if (!dst.in_numerator(image_b) || !dst.is_zero_class(image_b)) {
        throw InvariantViolation(what + " depends on the representative");
      }
    }
    return out;
  }

 private:
  static Quotient zero_space(int k) { return Quotient(Subspace(k, 0), Subspace(k, 0)); }

  Subspace exact_forms(int k) const {
    const auto& basis = ops_->basis();
    if (k == 0) return Subspace(0, basis.dim(0));
    return image(ops_->d_map().block(k - 1), k);
  }

  Subspace effective_or_zero(int k) const {
    if (k > ops_->generators()) return Subspace(k, 0);
    return ops_->effective(k);
  }

  const OperatorSet* ops_;
  std::vector<Quotient> de_rham_;
  std::vector<Subspace> a_spaces_;
  std::vector<Quotient> c_spaces_;
};

inline ClosednessProfile closedness_profile(const Model& model) {
  OperatorSet ops(model);
  return Cohomology(ops).closedness();
}

// ---------------------------------------------------------------------------
// The exact sequence for one column p.

struct SequenceNode {
  std::string label;
  std::size_t dim = 0;
  std::size_t rank_in = 0;
  std::size_t rank_out = 0;
  bool composite_zero = true;
  bool exact = false;
};

struct ExactnessReport {
  int p = 0;
  std::vector<SequenceNode> nodes;

  bool exact() const {
    for (const auto& node : nodes) {
      if (!node.exact) return false;
    }
    return true;
  }
  /// Label of the first inexact node, or empty.
  std::string first_failure() const {
    for (const auto& node : nodes) {
      if (!node.exact) return node.label;
    }
    return {};
  }
};

class ExactSequence {
 public:
  ExactSequence(const Cohomology& coh, const SpectralSequence& ss) : coh_(&coh), ss_(&ss) {
    if (&coh.operators() != &ss.operators()) throw Error("cohomology and spectral sequence built from different operator sets");
  }

  /// Source of φ_{p,q}: H^{q-p}, or C^{n-p} at q = n.
  Quotient phi_source(int p, int q) const {
    return q == n() ? coh_->c_space(n() - p) : coh_->de_rham(q - p);
  }
  /// Target of ψ_{p,q}: H^{q-p-1}, or C^{n-p-1} at q = n.
  Quotient psi_target(int p, int q) const {
    return q == n() ? coh_->c_space(n() - p - 1) : coh_->de_rham(q - p - 1);
  }
  const Quotient& e1(int p, int q) const {
    const PageEntry* e = ss_->page(1).entry(p, q);
    if (!e) throw DimensionError("E_1 entry out of range");
    return e->quotient;
  }

  /// φ_{p,q} applied to one representative; returns E_1^{p,q} coordinates.
  Vector phi_apply(int p, int q, const Vector& w) const {
    const Quotient& dst = e1(p, q);
    Vector image_v = coh_->power_block(p, q - p).apply(w);
    if (!dst.in_numerator(image_v)) throw InvariantViolation("φ: image is not an E_1 cycle");
    return dst.coordinates(image_v);
  }

  /// ψ_{p,q} applied to one E_1 representative z; returns target coordinates.
  Vector psi_apply(int p, int q, const Vector& z) const {
    Quotient dst = psi_target(p, q);
    Vector eta = solve_eta(p, q, z);
    if (dst.ambient() == 0) return {};
    if (!dst.in_numerator(eta)) {
      throw InvariantViolation("ψ: η is not in the target space", "(p,q) = (" + std::to_string(p) + "," + std::to_string(q) + ")");
    }
    return dst.coordinates(eta);
  }

  Matrix phi(int p, int q) const {
    Quotient src = phi_source(p, q);
    const Quotient& dst = e1(p, q);
    Matrix out(dst.dim(), src.dim());
    if (src.ambient() == 0) return out;
    for (std::size_t j = 0; j < src.dim(); ++j) set_column(out, j, phi_apply(p, q, src.reps()[j]));
    for (const auto& b : src.denominator().basis()) {
      if (!is_zero(phi_apply(p, q, b))) throw InvariantViolation("φ depends on the representative");
    }
    return out;
  }

  Matrix psi(int p, int q) const {
    const Quotient& src = e1(p, q);
    Quotient dst = psi_target(p, q);
    Matrix out(dst.dim(), src.dim());
    if (dst.ambient() == 0) return out;
    // η is unique up to ker ⊤^{p+1}; only its class may enter.
    const int deg = q - p - 1;
    Subspace slack = kernel(coh_->power_block(p + 1, deg), deg);
    for (const auto& v : slack.basis()) {
      if (!dst.in_numerator(v) || !dst.is_zero_class(v)) throw InvariantViolation("ψ: class of η is not unique");
    }
    for (std::size_t j = 0; j < src.dim(); ++j) set_column(out, j, psi_apply(p, q, src.reps()[j]));
    for (const auto& b : src.denominator().basis()) {
      if (!is_zero(psi_apply(p, q, b))) throw InvariantViolation("ψ depends on the representative");
    }
    return out;
  }

  /// τ out of T_q: ⊤ into S_{q+1} for q < n, ⊤^{p+1} into H^{n+p+1} for q = n.
  Matrix tau(int p, int q) const {
    Quotient src = psi_target(p, q);
    const int deg = q - p - 1;
    if (q < n()) return Cohomology::induced_map(src, phi_source(p, q + 1), coh_->power_block(1, deg), "τ");
    return Cohomology::induced_map(src, coh_->de_rham(n() + p + 1), coh_->power_block(p + 1, deg), "τ^{p+1}");
  }

  ExactnessReport verify(int p) const {
    if (p < 0 || p > n()) throw DimensionError("column p must lie in 0..n");
    std::vector<std::string> labels;
    std::vector<std::size_t> dims;
    std::vector<Matrix> maps;  // maps[i] : node i → node i+1
    for (int q = p; q <= n(); ++q) {
      labels.push_back(q == n() ? "C^" + std::to_string(n() - p) : "H^" + std::to_string(q - p));
      dims.push_back(phi_source(p, q).dim());
      maps.push_back(phi(p, q));
      labels.push_back("E1^{" + std::to_string(p) + "," + std::to_string(q) + "}");
      dims.push_back(e1(p, q).dim());
      maps.push_back(psi(p, q));
      labels.push_back(q == n() ? "C^" + std::to_string(n() - p - 1) : "H^" + std::to_string(q - p - 1));
      dims.push_back(psi_target(p, q).dim());
      maps.push_back(tau(p, q));
    }
    labels.push_back("H^" + std::to_string(n() + p + 1));
    dims.push_back(coh_->de_rham(n() + p + 1).dim());

    ExactnessReport report{p, {}};
    for (std::size_t i = 0; i < labels.size(); ++i) {
      SequenceNode node{labels[i], dims[i], 0, 0, true, false};
      if (i > 0) node.rank_in = rank(maps[i - 1]);
      if (i < maps.size()) node.rank_out = rank(maps[i]);
      if (i > 0 && i < maps.size() && maps[i].rows() && maps[i - 1].cols()) {
        node.composite_zero = (maps[i] * maps[i - 1]).is_zero();
      }
      node.exact = node.composite_zero && node.rank_in + node.rank_out == node.dim;
      report.nodes.push_back(std::move(node));
    }
    return report;
  }

 private:
  int n() const { return coh_->operators().n(); }

  static void set_column(Matrix& m, std::size_t j, const Vector& c) {
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = c[i];
  }

  Vector solve_eta(int p, int q, const Vector& z) const {
    const auto& ops = coh_->operators();
    const int k = p + q;
    const int deg = q - p - 1;
    Vector dz = ops.d_map().block(k).apply(z);
    if (deg < 0) {
      if (!is_zero(dz)) throw InvariantViolation("ψ: dz ≠ 0 with no room for η");
      return {};
    }
    Matrix lift = coh_->power_block(p + 1, deg);
    LinearSolver solver(lift.rows(), lift.columns());
    auto eta = solver.solve(dz);
    if (!eta) throw InvariantViolation("ψ: ⊤^{p+1}η = dz has no solution");
    return *eta;
  }

  const Cohomology* coh_;
  const SpectralSequence* ss_;
};

// ---------------------------------------------------------------------------
// Verdicts on stabilization and harmonicity.

/// Σ_{p+q=k} dim E_r^{p,q}.
inline std::size_t antidiagonal(const Page& page, int k) {
  std::size_t total = 0;
  for (const auto& [pq, e] : page.entries) {
    if (pq.first + pq.second == k) total += e.dim();
  }
  return total;
}

inline std::vector<Check> stabilization_verdicts(const Cohomology& coh, const SpectralSequence& ss) {
  std::vector<Check> out;
  const int n = coh.operators().n();
  const int m = coh.operators().generators();
  const int s = ss.stabilization_page();
  const Page& stable = ss.page(std::min(s, ss.last_page()));
  const Page& e2 = ss.page(2);
  const auto betti = coh.betti();
  const auto profile = coh.closedness();
  auto pq = [](int p, int q) { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; };

  {
    Check c{"convergence: antidiagonal sums equal Betti numbers", true, {}};
    for (int k = 0; k <= m; ++k) {
      std::size_t sum_k = antidiagonal(stable, k);
      if (sum_k != betti[k]) {
        c.pass = false;
        c.witness = "k = " + std::to_string(k) + ": page sum " + std::to_string(sum_k) + ", b_k = " + std::to_string(betti[k]);
        break;
      }
    }
    out.push_back(c);
  }

  if (profile.t_min == 1) {
    out.push_back({"Theorem 2: stabilizes by page 2", s <= 2, "s = " + std::to_string(s)});
    Check support{"Theorem 2: E2 supported on p = 0 or q = n", true, {}};
    for (const auto& [key, dim] : e2.dims()) {
      if (key.first != 0 && key.second != n) {
        support.pass = false;
        support.witness = "E2" + pq(key.first, key.second) + " = " + std::to_string(dim);
        break;
      }
    }
    out.push_back(support);
    Check left{"Theorem 2: dim E2^{0,q} = dim H^q for q <= n", true, {}};
    for (int q = 0; q <= n; ++q) {
      if (e2.dim(0, q) != betti[q]) {
        left.pass = false;
        left.witness = "q = " + std::to_string(q) + ": " + std::to_string(e2.dim(0, q)) + " vs " + std::to_string(betti[q]);
        break;
      }
    }
    out.push_back(left);
    Check top_row{"Theorem 2: dim E2^{p,n} = dim H^{n+p}", true, {}};
    for (int p = 0; p <= n; ++p) {
      if (e2.dim(p, n) != betti[n + p]) {
        top_row.pass = false;
        top_row.witness = "p = " + std::to_string(p) + ": " + std::to_string(e2.dim(p, n)) + " vs " +
                          std::to_string(betti[n + p]);
        break;
      }
    }
    out.push_back(top_row);
  } else if (profile.t_min) {
    // Admissible pages are t - r + 1 for 0 <= r <= max(0, 2t - (n+1)).
    const int t = *profile.t_min;
    const int r_max = std::max(0, 2 * t - (n + 1));
    const bool in_window = s >= t - r_max + 1 && s <= t + 1;
    std::ostringstream w;
    w << "t = " << t << ", s = " << s << ", admissible pages " << (t - r_max + 1) << ".." << (t + 1);
    out.push_back({"Theorem 3: stabilization page in the admissible window", in_window, w.str()});
  } else {
    out.push_back({"Theorem 4: stabilizes by page 2", s <= 2, "s = " + std::to_string(s)});
    Check diag{"Theorem 4: dim E2^{p,p} = 1 for 0 <= p <= n", true, {}};
    for (int p = 0; p <= n; ++p) {
      if (e2.dim(p, p) != 1) {
        diag.pass = false;
        diag.witness = "E2" + pq(p, p) + " = " + std::to_string(e2.dim(p, p));
        break;
      }
    }
    out.push_back(diag);
  }
  return out;
}

struct OracleResult {
  bool harmonic = true;
  /// Degree of the first failing class (or q for the page-2 test); -1 when harmonic.
  int witness_degree = -1;
  std::string witness;
};

struct HarmonicVerdict {
  /// Closed-type model: [Ω^t] ≠ 0 for every t <= n.
  bool applicable = false;
  bool nilpotent = false;
  OracleResult direct;
  OracleResult prop6;
  OracleResult thm5;

  bool agree() const { return direct.harmonic == prop6.harmonic && prop6.harmonic == thm5.harmonic; }
  /// Agreement is only claimed on closed-type nilpotent models.
  bool enforced() const { return applicable && nilpotent; }
  bool harmonic() const { return direct.harmonic; }
};

namespace detail {

// Is `target` in the column span of `m`?
inline bool in_span(const Matrix& m, const Vector& target) {
  if (m.cols() == 0) return is_zero(target);
  return LinearSolver(m.rows(), m.columns()).solve(target).has_value();
}

inline Matrix stack(const std::vector<Matrix>& blocks, std::size_t cols) {
  std::size_t rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  Matrix out(rows, cols);
  std::size_t offset = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i) {
      for (std::size_t j = 0; j < cols; ++j) out(offset + i, j) = b(i, j);
    }
    offset += b.rows();
  }
  return out;
}

// Classes are fixed up to exact forms, so harmonicity of a class asks for some
// α with F(ω + dα) = 0, i.e. F(ω) ∈ im(F∘d). The condition is linear in ω, so
// checking a basis of H^k suffices.
template <class ConditionMatrix>
OracleResult feasibility_oracle(const Cohomology& coh, ConditionMatrix condition, const std::string& what) {
  const auto& ops = coh.operators();
  for (int k = 0; k <= ops.generators(); ++k) {
    Quotient h = coh.de_rham(k);
    if (h.dim() == 0) continue;
    Matrix f = condition(k);
    Matrix fd = k > 0 ? f * ops.d_map().block(k - 1) : Matrix(f.rows(), 0);
    for (std::size_t i = 0; i < h.dim(); ++i) {
      if (!in_span(fd, f.apply(h.reps()[i]))) {
        Form w = Form::from_vector(ops.basis(), k, h.reps()[i]);
        return {false, k, "no " + what + " representative in the class of " + w.str()};
      }
    }
  }
  return {};
}

}  // namespace detail

inline HarmonicVerdict harmonic_verdict(const Cohomology& coh, const SpectralSequence& ss) {
  const auto& ops = coh.operators();
  const int n = ops.n();
  HarmonicVerdict v;
  v.applicable = coh.closedness().closed_type();
  v.nilpotent = is_nilpotent(ops.model());

  v.direct = detail::feasibility_oracle(
      coh, [&](int k) { return ops.delta_map().block(k); }, "δ-closed");

  v.prop6 = detail::feasibility_oracle(
      coh,
      [&](int k) {
        std::vector<Matrix> rows;
        for (int i = 0; 2 * i <= k; ++i) rows.push_back(ops.d_map().block(k - 2 * i) * ops.hodge_lepage_component(k, i));
        return detail::stack(rows, ops.basis().dim(k));
      },
      "componentwise closed");

  for (int q = 0; q <= n; ++q) {
    Matrix t = ss.tau(2, n - q, 0, q);
    if (!is_isomorphism(t)) {
      v.thm5 = {false, q,
                "τ_2^" + std::to_string(n - q) + ": E2^{0," + std::to_string(q) + "} → E2^{" + std::to_string(n - q) + "," +
                    std::to_string(n) + "} has rank " + std::to_string(rank(t)) + " (dims " + std::to_string(t.cols()) +
                    " → " + std::to_string(t.rows()) + ")"};
      break;
    }
  }
  return v;
}

struct SymmetryReport {
  /// False when the model is not harmonic; the maps are then not examined.
  bool checked = false;
  bool maps_iso = false;
  bool table_symmetric = false;
  std::string witness;

  bool pass() const { return checked && maps_iso && table_symmetric; }
};

/// τ_2^{n-p-q} : E2^{p,q} → E2^{n-q,n-p} for 0 <= p <= q, p+q <= n, and the
/// mirror symmetry of the page-2 table about p+q = n.
inline SymmetryReport symmetry_check(const SpectralSequence& ss, bool harmonic) {
  const int n = ss.operators().n();
  const Page& e2 = ss.page(2);
  SymmetryReport out;
  out.table_symmetric = true;
  for (const auto& [pq, e] : e2.entries) {
    auto [p, q] = pq;
    if (e.dim() != e2.dim(n - q, n - p)) {
      out.table_symmetric = false;
      out.witness = "dim E2^{" + std::to_string(p) + "," + std::to_string(q) + "} = " + std::to_string(e.dim()) +
                    " but dim E2^{" + std::to_string(n - q) + "," + std::to_string(n - p) + "} = " +
                    std::to_string(e2.dim(n - q, n - p));
      break;
    }
  }
  if (!harmonic) {
    if (out.witness.empty()) out.witness = "not harmonic; maps not examined";
    return out;
  }
  out.checked = true;
  out.maps_iso = true;
  for (int p = 0; p <= n && out.maps_iso; ++p) {
    for (int q = p; p + q <= n; ++q) {
      Matrix t = ss.tau(2, n - p - q, p, q);
      if (!is_isomorphism(t)) {
        out.maps_iso = false;
        out.witness = "τ_2^" + std::to_string(n - p - q) + " at (" + std::to_string(p) + "," + std::to_string(q) +
                      ") is not an isomorphism";
        break;
      }
    }
  }
  return out;
}

}  // namespace symspec
