#pragma once

// Spectral sequence of the filtration F^pΛ = ⊤^pΛ = Ω^p ∧ Λ.
//
// E_r^{p,q} sits in total degree p+q with d_r : (p,q) → (p+r, q−r+1):
//
//   Z_r^{p,q} = F^pΛ^{p+q} ∩ d^{-1}(F^{p+r}Λ^{p+q+1})
//   E_r^{p,q} = Z_r^{p,q} / (Z_{r-1}^{p+1,q-1} + d Z_{r-1}^{p-r+1,q+r-2})
//
// with F^p = Λ for p <= 0 and F^p = 0 for p > n. Since F^{n+1} = 0 the
// filtration has length n+1, so d_r = 0 for r > n and E_{n+1} = E_∞.

#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "symspec/errors.hpp"
#include "symspec/linalg.hpp"
#include "symspec/operators.hpp"

namespace symspec {

using Bidegree = std::pair<int, int>;
using DimTable = std::map<Bidegree, std::size_t>;

struct PageEntry {
  int r = 0;
  int p = 0;
  int q = 0;
  Subspace cycles;
  Subspace boundaries;
  Quotient quotient;

  std::size_t dim() const { return quotient.dim(); }
  const std::vector<Vector>& reps() const { return quotient.reps(); }
};

struct Page {
  int r = 0;
  std::map<Bidegree, PageEntry> entries;
  /// d_r out of (p,q), as a matrix in the representative bases.
  std::map<Bidegree, Matrix> differentials;

  const PageEntry* entry(int p, int q) const {
    auto it = entries.find({p, q});
    return it == entries.end() ? nullptr : &it->second;
  }
  std::size_t dim(int p, int q) const {
    const PageEntry* e = entry(p, q);
    return e ? e->dim() : 0;
  }
  bool differential_zero() const {
    for (const auto& [pq, m] : differentials) {
      if (!m.is_zero()) return false;
    }
    return true;
  }
  /// Nonzero entries only.
  DimTable dims() const {
    DimTable out;
    for (const auto& [pq, e] : entries) {
      if (e.dim()) out[pq] = e.dim();
    }
    return out;
  }
};

class SpectralSequence {
 public:
  /// Computes pages 0..max(last_page, n+1). The operator set must outlive this object.
  explicit SpectralSequence(const OperatorSet& ops, int last_page = -1) : ops_(&ops) {
    const int n = ops.n();
    last_page_ = std::max(last_page, n + 1);
    for (int r = 0; r <= last_page_; ++r) pages_.push_back(build_page(r));
    for (auto& page : pages_) build_differentials(page);
    check_homology_of_pages();

    stabilization_ = 0;
    for (int r = 0; r <= last_page_; ++r) {
      if (!pages_[r].differential_zero()) stabilization_ = r + 1;
    }
  }

  const OperatorSet& operators() const { return *ops_; }
  int last_page() const { return last_page_; }
  const Page& page(int r) const { return pages_.at(r); }

  /// Page from which every d_r vanishes (and hence entries stay constant).
  int stabilization_page() const { return stabilization_; }

  /// E_∞, read off the last computed page.
  const Page& limit() const { return pages_.back(); }

  std::map<int, DimTable> dimension_tables() const {
    std::map<int, DimTable> out;
    for (const auto& page : pages_) out[page.r] = page.dims();
    return out;
  }

  /// F^pΛ^k = ⊤^p Λ^{k-2p}.
  Subspace filtration(int p, int k) const {
    const auto& basis = ops_->basis();
    if (k < 0 || k > ops_->generators()) return Subspace(k, 0);
    if (p <= 0) return Subspace::full(k, basis.dim(k));
    if (p > ops_->n() || k - 2 * p < 0) return Subspace(k, basis.dim(k));
    return image(ops_->top_power(p).block(k - 2 * p), k);
  }

  const Matrix& differential(int r, int p, int q) const { return pages_.at(r).differentials.at({p, q}); }

  /// τ_r^k : E_r^{p,q} → E_r^{p+k,q+k}, induced by ⊤^k.
  Matrix tau(int r, int k, int p, int q) const {
    const Page& page = pages_.at(r);
    const PageEntry* src = page.entry(p, q);
    if (!src) throw DimensionError("no page entry at (" + std::to_string(p) + "," + std::to_string(q) + ")");
    if (k < 0 || k > ops_->n() + 1) throw DimensionError("τ power out of range");
    const PageEntry* dst = page.entry(p + k, q + k);
    const Matrix& topk = ops_->top_power(k).block(p + q);
    return induced(*src, dst, topk, "τ_" + std::to_string(r) + "^" + std::to_string(k));
  }

 private:
  Subspace cycles(int r, int p, int k) {
    auto key = std::make_tuple(r, p, k);
    if (auto it = cycle_cache_.find(key); it != cycle_cache_.end()) return it->second;
    Subspace z;
    if (k < 0 || k > ops_->generators()) {
      z = Subspace(k, 0);
    } else {
      z = intersect(filtration(p, k), preimage(ops_->d_map().block(k), filtration(p + r, k + 1), k));
    }
    cycle_cache_.emplace(key, z);
    return z;
  }

  Page build_page(int r) {
    Page page{r, {}, {}};
    const int m = ops_->generators();
    for (int k = 0; k <= m; ++k) {
      for (int p = 0; p <= ops_->n() + 1; ++p) {
        const int q = k - p;
        Subspace z = cycles(r, p, k);
        Subspace b = cycles(r - 1, p + 1, k);
        if (k > 0) b = sum(b, image(ops_->d_map().block(k - 1), cycles(r - 1, p - r + 1, k - 1), k));
        try {
          Quotient quot(z, b);
          page.entries.emplace(Bidegree{p, q}, PageEntry{r, p, q, std::move(z), std::move(b), std::move(quot)});
        } catch (const ContainmentError&) {
          throw InvariantViolation("boundaries not contained in cycles on page " + std::to_string(r),
                                   "(p,q) = (" + std::to_string(p) + "," + std::to_string(q) + ")");
        }
      }
    }
    return page;
  }

  // Matrix of the map induced by `f` from src to dst (nullptr = zero target),
  // asserting that f carries cycles to cycles and boundaries to boundaries.
  Matrix induced(const PageEntry& src, const PageEntry* dst, const Matrix& f, const std::string& what) const {
    const std::size_t rows = dst ? dst->dim() : 0;
    Matrix out(rows, src.dim());
    auto where = [&] {
      return what + " at (" + std::to_string(src.p) + "," + std::to_string(src.q) + ") on page " +
             std::to_string(src.r);
    };
    if (!dst) {
      for (const auto& v : src.cycles.basis()) {
        if (!is_zero(f.apply(v))) throw InvariantViolation("map leaves the filtration", where());
      }
      return out;
    }
    for (std::size_t j = 0; j < src.dim(); ++j) {
      Vector image_v = f.apply(src.reps()[j]);
      if (!dst->quotient.in_numerator(image_v)) throw InvariantViolation("image of a cycle is not a cycle", where());
      Vector c = dst->quotient.coordinates(image_v);
      for (std::size_t i = 0; i < rows; ++i) out(i, j) = c[i];
    }
    for (const auto& b : src.boundaries.basis()) {
      Vector image_b = f.apply(b);
      if (!dst->quotient.in_numerator(image_b) || !dst->quotient.is_zero_class(image_b)) {
        throw InvariantViolation("induced map depends on the coset representative", where());
      }
    }
    return out;
  }

  void build_differentials(Page& page) {
    const int r = page.r;
    for (const auto& [pq, entry] : page.entries) {
      auto [p, q] = pq;
      const int k = p + q;
      const PageEntry* dst = page.entry(p + r, q - r + 1);
      Matrix dk = k < ops_->generators() ? ops_->d_map().block(k) : Matrix(0, ops_->basis().dim(k));
      if (!dst && k < ops_->generators()) {
        // Target outside the table: filtration index beyond n+1, so F is zero there.
        page.differentials.emplace(pq, induced(entry, nullptr, dk, "d_" + std::to_string(r)));
        continue;
      }
      if (!dst) {
        page.differentials.emplace(pq, Matrix(0, entry.dim()));
        continue;
      }
      page.differentials.emplace(pq, induced(entry, dst, dk, "d_" + std::to_string(r)));
    }
  }

  // E_{r+1} must be the homology of (E_r, d_r), and d_r ∘ d_r = 0.
  void check_homology_of_pages() const {
    for (int r = 0; r + 1 <= last_page_; ++r) {
      const Page& page = pages_[r];
      for (const auto& [pq, entry] : page.entries) {
        auto [p, q] = pq;
        const Matrix& out = page.differentials.at(pq);
        std::size_t rank_out = rank(out);
        std::size_t rank_in = 0;
        if (const PageEntry* src = page.entry(p - r, q + r - 1)) {
          const Matrix& in = page.differentials.at({p - r, q + r - 1});
          rank_in = rank(in);
          if (out.rows() && in.cols() && !(out * in).is_zero()) {
            throw InvariantViolation("d_r ∘ d_r ≠ 0", "page " + std::to_string(r) + " through (" + std::to_string(p) +
                                                          "," + std::to_string(q) + ")");
          }
          (void)src;
        }
        std::size_t homology = entry.dim() - rank_out - rank_in;
        if (homology != pages_[r + 1].dim(p, q)) {
          throw InvariantViolation("E_{r+1} is not the homology of (E_r, d_r)",
                                   "page " + std::to_string(r) + " at (" + std::to_string(p) + "," +
                                       std::to_string(q) + ")");
        }
      }
    }
  }

  const OperatorSet* ops_;
  int last_page_ = 0;
  int stabilization_ = 0;
  std::vector<Page> pages_;
  std::map<std::tuple<int, int, int>, Subspace> cycle_cache_;
};

inline bool is_isomorphism(const Matrix& m) { return m.rows() == m.cols() && rank(m) == m.rows(); }

struct TauCheck {
  int r = 0;
  int k = 0;
  int p = 0;
  int q = 0;
  std::size_t source_dim = 0;
  std::size_t target_dim = 0;
  bool iso = false;
};

/// τ_0^p : E_0^{0,q-p} → E_0^{p,q} for 0 <= p <= q <= n.
inline std::vector<TauCheck> tau0_range(const SpectralSequence& ss) {
  std::vector<TauCheck> out;
  const int n = ss.operators().n();
  for (int q = 0; q <= n; ++q) {
    for (int p = 0; p <= q; ++p) {
      Matrix t = ss.tau(0, p, 0, q - p);
      out.push_back({0, p, 0, q - p, t.cols(), t.rows(), is_isomorphism(t)});
    }
  }
  return out;
}

/// τ_1^p : E_1^{0,q-p} → E_1^{p,q} for 0 <= p <= q < n.
inline std::vector<TauCheck> tau1_range(const SpectralSequence& ss) {
  std::vector<TauCheck> out;
  const int n = ss.operators().n();
  for (int q = 0; q < n; ++q) {
    for (int p = 0; p <= q; ++p) {
      Matrix t = ss.tau(1, p, 0, q - p);
      out.push_back({1, p, 0, q - p, t.cols(), t.rows(), is_isomorphism(t)});
    }
  }
  return out;
}

/// Every τ_r^k : E_r^{p,q} → E_r^{p+k,q+k} (k >= 1) inside the window
///   Σ_{i=1}^r (i−1) <= p <= q <= q+k <= n − (2 + Σ_{i=1}^r (i−2)),
/// evaluated verbatim. An empty result means the window is empty for this r.
inline std::vector<TauCheck> tau_window(const SpectralSequence& ss, int r) {
  std::vector<TauCheck> out;
  const int n = ss.operators().n();
  const int lower = r * (r - 1) / 2;
  const int upper = n - (2 + r * (r - 3) / 2);
  for (int p = lower; p <= upper; ++p) {
    for (int q = p; q <= upper; ++q) {
      for (int k = 1; q + k <= upper; ++k) {
        Matrix t = ss.tau(r, k, p, q);
        out.push_back({r, k, p, q, t.cols(), t.rows(), is_isomorphism(t)});
      }
    }
  }
  return out;
}

}  // namespace symspec
