#pragma once

// Dense exact linear algebra over Q and the subspace toolkit (span, kernel,
// image, intersection, sum, preimage, quotient) every other module is built on.
// Matrices are small (dim Λ^k = C(2n, k) <= 70 for n <= 4), so everything is
// dense Gauss-Jordan elimination.

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symspec/errors.hpp"
#include "symspec/exterior.hpp"
#include "symspec/rational.hpp"

namespace symspec {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1;
    return out;
  }

  static Matrix from_columns(std::size_t rows, const std::vector<Vector>& columns) {
    Matrix out(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) throw DimensionError("column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) out(i, j) = columns[j][i];
    }
    return out;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector column(std::size_t j) const {
    Vector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  std::vector<Vector> columns() const {
    std::vector<Vector> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  Vector apply(const Vector& v) const {
    if (v.size() != cols_) throw DimensionError("matrix-vector size mismatch");
    Vector out(rows_);
    for (std::size_t j = 0; j < cols_; ++j) {
      if (v[j] == 0) continue;
      for (std::size_t i = 0; i < rows_; ++i) {
        const Rational& a = (*this)(i, j);
        if (a != 0) out[i] += a * v[j];
      }
    }
    return out;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Rational& x) { return x == 0; });
  }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionError("matrix product size mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (b(k, j) != 0) out(i, j) += aik * b(k, j);
        }
      }
    }
    return out;
  }

  friend Matrix operator*(const Rational& s, Matrix a) {
    for (auto& x : a.data_) x *= s;
    return a;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    a.check_same_shape(b);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend Matrix operator-(Matrix a, const Matrix& b) {
    a.check_same_shape(b);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void check_same_shape(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw DimensionError("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Gauss-Jordan elimination to reduced row echelon form, in place.
/// Returns the pivot column of each nonzero row, in row order.
inline std::vector<std::size_t> row_reduce(Matrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t sel = row;
    while (sel < a.rows() && a(sel, col) == 0) ++sel;
    if (sel == a.rows()) continue;
    if (sel != row) {
      for (std::size_t j = col; j < a.cols(); ++j) std::swap(a(sel, j), a(row, j));
    }
    Rational inv = 1 / a(row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col) == 0) continue;
      Rational f = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) {
        if (a(row, j) != 0) a(i, j) -= f * a(row, j);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(Matrix a) { return row_reduce(a).size(); }

inline std::optional<Matrix> inverse(const Matrix& a) {
  if (a.rows() != a.cols()) return std::nullopt;
  const std::size_t n = a.rows();
  Matrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  auto pivots = row_reduce(aug);
  if (pivots.size() < n || (n > 0 && pivots[n - 1] >= n)) return std::nullopt;
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
  return out;
}

/// Solves Σ x_j c_j = v for a fixed list of columns c_j, many right-hand sides.
/// Columns may be dependent; free variables are set to zero.
class LinearSolver {
 public:
  LinearSolver() = default;
  LinearSolver(std::size_t rows, const std::vector<Vector>& columns) : rows_(rows), unknowns_(columns.size()) {
    Matrix aug(rows, unknowns_ + rows);
    for (std::size_t j = 0; j < unknowns_; ++j) {
      if (columns[j].size() != rows) throw DimensionError("solver column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) aug(i, j) = columns[j][i];
    }
    for (std::size_t i = 0; i < rows; ++i) aug(i, unknowns_ + i) = 1;
    auto pivots = row_reduce(aug);
    for (std::size_t r = 0; r < pivots.size() && pivots[r] < unknowns_; ++r) pivot_cols_.push_back(pivots[r]);
    transform_ = Matrix(rows, rows);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < rows; ++j) transform_(i, j) = aug(i, unknowns_ + j);
  }

  std::size_t unknowns() const { return unknowns_; }
  std::size_t rank() const { return pivot_cols_.size(); }
  bool full_column_rank() const { return rank() == unknowns_; }

  std::optional<Vector> solve(const Vector& v) const {
    if (v.size() != rows_) throw DimensionError("solver right-hand side length mismatch");
    Vector y = transform_.apply(v);
    for (std::size_t r = pivot_cols_.size(); r < rows_; ++r) {
      if (y[r] != 0) return std::nullopt;
    }
    Vector x(unknowns_);
    for (std::size_t r = 0; r < pivot_cols_.size(); ++r) x[pivot_cols_[r]] = y[r];
    return x;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t unknowns_ = 0;
  std::vector<std::size_t> pivot_cols_;
  Matrix transform_;
};

/// Linear subspace of a fixed graded piece Λ^k, held as a canonical basis in
/// reduced echelon form (leading 1 at each pivot, zeros at the other pivots).
/// Equal subspaces therefore compare equal.
class Subspace {
 public:
  Subspace() = default;
  Subspace(int degree, std::size_t ambient) : degree_(degree), ambient_(ambient) {}

  static Subspace span(int degree, std::size_t ambient, const std::vector<Vector>& vectors) {
    Subspace out(degree, ambient);
    if (vectors.empty() || ambient == 0) return out;
    Matrix rows(vectors.size(), ambient);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (vectors[i].size() != ambient) throw DimensionError("vector length does not match ambient dimension");
      for (std::size_t j = 0; j < ambient; ++j) rows(i, j) = vectors[i][j];
    }
    out.pivots_ = row_reduce(rows);
    for (std::size_t r = 0; r < out.pivots_.size(); ++r) {
      Vector b(ambient);
      for (std::size_t j = 0; j < ambient; ++j) b[j] = rows(r, j);
      out.basis_.push_back(std::move(b));
    }
    return out;
  }

  static Subspace full(int degree, std::size_t ambient) {
    std::vector<Vector> unit;
    for (std::size_t i = 0; i < ambient; ++i) {
      Vector e(ambient);
      e[i] = 1;
      unit.push_back(std::move(e));
    }
    return span(degree, ambient, unit);
  }

  int degree() const { return degree_; }
  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  bool is_zero() const { return basis_.empty(); }
  const std::vector<Vector>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// v minus its component along the basis, measured at the pivots.
  Vector reduce(Vector v) const {
    if (v.size() != ambient_) throw DimensionError("vector length does not match ambient dimension");
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      Rational c = v[pivots_[i]];
      if (c == 0) continue;
      for (std::size_t j = 0; j < ambient_; ++j) {
        if (basis_[i][j] != 0) v[j] -= c * basis_[i][j];
      }
    }
    return v;
  }

  bool contains(const Vector& v) const { return is_zero_vector(reduce(v)); }

  bool contains(const Subspace& other) const {
    check_same_piece(other);
    return std::all_of(other.basis_.begin(), other.basis_.end(), [&](const Vector& v) { return contains(v); });
  }

  Subspace with(const std::vector<Vector>& extra) const {
    std::vector<Vector> all = basis_;
    all.insert(all.end(), extra.begin(), extra.end());
    return span(degree_, ambient_, all);
  }

  void check_same_piece(const Subspace& other) const {
    if (other.degree_ != degree_ || other.ambient_ != ambient_) {
      throw DimensionError("subspaces live in different graded pieces (degree " + std::to_string(degree_) +
                           " vs " + std::to_string(other.degree_) + ")");
    }
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.degree_ == b.degree_ && a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

 private:
  static bool is_zero_vector(const Vector& v) { return symspec::is_zero(v); }

  int degree_ = 0;
  std::size_t ambient_ = 0;
  std::vector<Vector> basis_;
  std::vector<std::size_t> pivots_;
};

inline Subspace kernel(const Matrix& f, int degree) {
  Matrix r = f;
  auto pivots = row_reduce(r);
  std::vector<bool> is_pivot(f.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < f.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(f.cols());
    v[free] = 1;
    for (std::size_t row = 0; row < pivots.size(); ++row) v[pivots[row]] = -r(row, free);
    basis.push_back(std::move(v));
  }
  return Subspace::span(degree, f.cols(), basis);
}

inline Subspace image(const Matrix& f, int degree) { return Subspace::span(degree, f.rows(), f.columns()); }

/// f(S) for a subspace S of the source of f.
inline Subspace image(const Matrix& f, const Subspace& s, int target_degree) {
  if (s.ambient() != f.cols()) throw DimensionError("subspace does not live in the source of the map");
  std::vector<Vector> out;
  for (const auto& v : s.basis()) out.push_back(f.apply(v));
  return Subspace::span(target_degree, f.rows(), out);
}

inline Subspace sum(const Subspace& a, const Subspace& b) {
  a.check_same_piece(b);
  return a.with(b.basis());
}

inline Subspace intersect(const Subspace& a, const Subspace& b) {
  a.check_same_piece(b);
  if (a.is_zero() || b.is_zero()) return Subspace(a.degree(), a.ambient());
  // x = Σ c_i a_i lies in B iff Σ c_i reduce_B(a_i) = 0.
  std::vector<Vector> residues;
  for (const auto& v : a.basis()) residues.push_back(b.reduce(v));
  Subspace coeffs = kernel(Matrix::from_columns(a.ambient(), residues), a.degree());
  std::vector<Vector> out;
  for (const auto& c : coeffs.basis()) {
    Vector x(a.ambient());
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0) continue;
      for (std::size_t j = 0; j < x.size(); ++j) x[j] += c[i] * a.basis()[i][j];
    }
    out.push_back(std::move(x));
  }
  return Subspace::span(a.degree(), a.ambient(), out);
}

/// {x in source : f x ∈ S}.
inline Subspace preimage(const Matrix& f, const Subspace& s, int source_degree) {
  if (s.ambient() != f.rows()) throw DimensionError("target subspace does not live in the target of the map");
  std::vector<Vector> residues;
  for (std::size_t j = 0; j < f.cols(); ++j) residues.push_back(s.reduce(f.column(j)));
  return kernel(Matrix::from_columns(f.rows(), residues), source_degree);
}

/// A / B for B ⊆ A, with deterministic coset representatives: the basis
/// vectors of A (in canonical order) that are not reducible into B plus the
/// representatives already chosen.
class Quotient {
 public:
  Quotient() = default;
  Quotient(Subspace numerator, Subspace denominator)
      : numerator_(std::move(numerator)), denominator_(std::move(denominator)) {
    numerator_.check_same_piece(denominator_);
    if (!numerator_.contains(denominator_)) {
      throw ContainmentError("quotient denominator is not contained in the numerator");
    }
    Subspace running = denominator_;
    for (const auto& v : numerator_.basis()) {
      if (running.contains(v)) continue;
      reps_.push_back(v);
      running = running.with({v});
    }
    std::vector<Vector> cols = reps_;
    cols.insert(cols.end(), denominator_.basis().begin(), denominator_.basis().end());
    solver_ = std::make_shared<LinearSolver>(numerator_.ambient(), cols);
  }

  std::size_t dim() const { return reps_.size(); }
  int degree() const { return numerator_.degree(); }
  std::size_t ambient() const { return numerator_.ambient(); }
  const Subspace& numerator() const { return numerator_; }
  const Subspace& denominator() const { return denominator_; }
  const std::vector<Vector>& reps() const { return reps_; }

  bool in_numerator(const Vector& v) const { return numerator_.contains(v); }

  /// Coordinates of the class of v in the representative basis.
  Vector coordinates(const Vector& v) const {
    auto x = solver_->solve(v);
    if (!x) throw ContainmentError("vector does not lie in the quotient's numerator");
    x->resize(reps_.size());
    return *x;
  }

  bool is_zero_class(const Vector& v) const { return symspec::is_zero(coordinates(v)); }

  Vector lift(const Vector& coords) const {
    if (coords.size() != reps_.size()) throw DimensionError("class coordinate length mismatch");
    Vector out(ambient());
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (coords[i] == 0) continue;
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += coords[i] * reps_[i][j];
    }
    return out;
  }

 private:
  Subspace numerator_;
  Subspace denominator_;
  std::vector<Vector> reps_;
  std::shared_ptr<const LinearSolver> solver_;
};

/// dim A − dim B with containment checked.
inline std::size_t quotient_dim(const Subspace& a, const Subspace& b) { return Quotient(a, b).dim(); }

/// A degree-shifting linear map on Λ, stored as one matrix per source degree:
/// block k maps Λ^k to Λ^{k+shift} (zero rows when k+shift is out of range).
class GradedMap {
 public:
  GradedMap() = default;
  GradedMap(std::shared_ptr<const MonomialBasis> basis, int shift) : basis_(std::move(basis)), shift_(shift) {
    int m = basis_->generators();
    for (int k = 0; k <= m; ++k) blocks_.emplace_back(basis_->dim(k + shift_), basis_->dim(k));
  }

  template <class Fn>
  static GradedMap from_function(std::shared_ptr<const MonomialBasis> basis, int shift, Fn&& fn) {
    GradedMap out(basis, shift);
    int m = basis->generators();
    for (int k = 0; k <= m; ++k) {
      if (basis->dim(k + shift) == 0) continue;
      const auto& monomials = basis->monomials(k);
      for (std::size_t j = 0; j < monomials.size(); ++j) {
        Form image = fn(Form::monomial(m, monomials[j]));
        if (image.is_zero()) continue;
        if (image.degree() != k + shift) throw DimensionError("graded map produced the wrong degree");
        for (const auto& [idx, c] : image.terms()) out.blocks_[k](basis->position(idx), j) = c;
      }
    }
    return out;
  }

  int shift() const { return shift_; }
  int generators() const { return basis_->generators(); }
  const MonomialBasis& basis() const { return *basis_; }
  const std::shared_ptr<const MonomialBasis>& basis_ptr() const { return basis_; }

  const Matrix& block(int k) const { return blocks_.at(k); }
  Matrix& block(int k) { return blocks_.at(k); }

  Form apply(const Form& w) const {
    int k = w.degree();
    if (w.generators() != generators()) throw DimensionError("form and map over different generator counts");
    if (k + shift_ < 0 || k + shift_ > generators()) return Form(generators(), std::max(0, k + shift_));
    return Form::from_vector(*basis_, k + shift_, blocks_.at(k).apply(w.to_vector(*basis_)));
  }

  bool is_zero() const {
    return std::all_of(blocks_.begin(), blocks_.end(), [](const Matrix& b) { return b.is_zero(); });
  }

  /// (f∘g) with shift f.shift + g.shift.
  friend GradedMap compose(const GradedMap& f, const GradedMap& g) {
    GradedMap out(g.basis_, f.shift_ + g.shift_);
    int m = g.generators();
    for (int k = 0; k <= m; ++k) {
      int mid = k + g.shift_;
      if (mid < 0 || mid > m) continue;
      out.blocks_[k] = f.blocks_[mid] * g.blocks_[k];
    }
    return out;
  }

  friend GradedMap operator+(GradedMap a, const GradedMap& b) {
    a.check_same_shift(b);
    for (std::size_t k = 0; k < a.blocks_.size(); ++k) a.blocks_[k] = a.blocks_[k] + b.blocks_[k];
    return a;
  }
  friend GradedMap operator-(GradedMap a, const GradedMap& b) {
    a.check_same_shift(b);
    for (std::size_t k = 0; k < a.blocks_.size(); ++k) a.blocks_[k] = a.blocks_[k] - b.blocks_[k];
    return a;
  }
  friend GradedMap operator*(const Rational& s, GradedMap a) {
    for (auto& b : a.blocks_) b = s * b;
    return a;
  }
  friend bool operator==(const GradedMap& a, const GradedMap& b) {
    return a.shift_ == b.shift_ && a.blocks_ == b.blocks_;
  }

 private:
  void check_same_shift(const GradedMap& b) const {
    if (shift_ != b.shift_ || blocks_.size() != b.blocks_.size()) throw DimensionError("graded maps differ in shift");
  }

  std::shared_ptr<const MonomialBasis> basis_;
  int shift_ = 0;
  std::vector<Matrix> blocks_;
};

/// Kernel in degree k and image in degree k+shift, rank-nullity asserted.
inline std::pair<Subspace, Subspace> kernel_image(const GradedMap& f, int k) {
  const Matrix& b = f.block(k);
  Subspace ker = kernel(b, k);
  Subspace im = image(b, k + f.shift());
  if (ker.dim() + im.dim() != b.cols()) {
    throw InvariantViolation("rank-nullity failed in degree " + std::to_string(k));
  }
  return {std::move(ker), std::move(im)};
}

}  // namespace symspec
