#pragma once

// Exterior algebra on m degree-1 generators with exact rational coefficients.
//
// Monomials are stored as bitmasks (bit i-1 <-> generator i). Within a degree
// the fixed monomial order is lexicographic on the increasing index tuples;
// every matrix and canonical form in the library uses that order.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "symspec/errors.hpp"
#include "symspec/rational.hpp"

namespace symspec {

inline constexpr int kMaxGenerators = 16;

class MultiIndex {
 public:
  constexpr MultiIndex() = default;
  constexpr explicit MultiIndex(std::uint32_t bits) : bits_(bits) {}

  /// From 1-based generator indices; they must be strictly increasing.
  static MultiIndex of(std::initializer_list<int> indices) {
    return of(std::vector<int>(indices));
  }
  static MultiIndex of(const std::vector<int>& indices) {
    std::uint32_t bits = 0;
    int last = 0;
    for (int i : indices) {
      if (i <= last || i > kMaxGenerators) {
        throw DimensionError("multi-index must be strictly increasing in 1..16");
      }
      bits |= 1u << (i - 1);
      last = i;
    }
    return MultiIndex(bits);
  }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr int degree() const { return std::popcount(bits_); }
  constexpr bool contains(int generator) const { return (bits_ >> (generator - 1)) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }

  std::vector<int> indices() const {
    std::vector<int> out;
    for (std::uint32_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
    return out;
  }

  constexpr bool operator==(const MultiIndex&) const = default;

  // Degree first, then lexicographic on the increasing index tuples: the tuple
  // owning the smallest differing generator sorts first.
  constexpr std::strong_ordering operator<=>(const MultiIndex& other) const {
    if (auto c = degree() <=> other.degree(); c != 0) return c;
    if (bits_ == other.bits_) return std::strong_ordering::equal;
    std::uint32_t low = (bits_ ^ other.bits_) & (~(bits_ ^ other.bits_) + 1);
    return (bits_ & low) ? std::strong_ordering::less : std::strong_ordering::greater;
  }

 private:
  std::uint32_t bits_ = 0;
};

/// Sign of e^a ∧ e^b relative to e^{a∪b}; 0 when the monomials overlap.
inline int wedge_sign(MultiIndex a, MultiIndex b) {
  if (a.bits() & b.bits()) return 0;
  int inversions = 0;
  for (std::uint32_t rest = b.bits(); rest; rest &= rest - 1) {
    int j = std::countr_zero(rest);
    inversions += std::popcount(a.bits() >> (j + 1));
  }
  return (inversions & 1) ? -1 : 1;
}

/// Per-degree list of monomials in the fixed order, with reverse lookup.
class MonomialBasis {
 public:
  explicit MonomialBasis(int generators) : m_(generators) {
    if (generators < 0 || generators > kMaxGenerators) {
      throw DimensionError("unsupported generator count " + std::to_string(generators));
    }
    by_degree_.resize(m_ + 1);
    position_.assign(std::size_t{1} << m_, 0);
    for (std::uint32_t bits = 0; bits < (1u << m_); ++bits) {
      by_degree_[std::popcount(bits)].emplace_back(bits);
    }
    for (auto& monomials : by_degree_) {
      std::sort(monomials.begin(), monomials.end());
      for (std::size_t i = 0; i < monomials.size(); ++i) position_[monomials[i].bits()] = i;
    }
  }

  int generators() const { return m_; }

  /// dim Λ^k; zero outside 0..m.
  std::size_t dim(int k) const {
    return (k < 0 || k > m_) ? 0 : by_degree_[k].size();
  }
  const std::vector<MultiIndex>& monomials(int k) const { return by_degree_.at(k); }
  std::size_t position(MultiIndex idx) const { return position_.at(idx.bits()); }

 private:
  int m_;
  std::vector<std::vector<MultiIndex>> by_degree_;
  std::vector<std::size_t> position_;
};

struct FormTag {};
struct MultivectorTag {};

/// Homogeneous element of the exterior algebra with sparse rational terms.
/// Canonical: no zero coefficients are stored, so equal elements compare equal.
template <class Tag>
class Homogeneous {
 public:
  using Terms = std::map<MultiIndex, Rational>;

  Homogeneous() = default;
  Homogeneous(int generators, int degree) : m_(generators), degree_(degree) {
    if (generators < 0 || generators > kMaxGenerators) {
      throw DimensionError("unsupported generator count " + std::to_string(generators));
    }
  }

  static Homogeneous monomial(int generators, MultiIndex idx, Rational coeff = 1) {
    Homogeneous out(generators, idx.degree());
    out.add_term(idx, coeff);
    return out;
  }
  static Homogeneous monomial(int generators, std::initializer_list<int> idx, Rational coeff = 1) {
    return monomial(generators, MultiIndex::of(idx), std::move(coeff));
  }
  static Homogeneous scalar(int generators, Rational value) {
    return monomial(generators, MultiIndex{}, std::move(value));
  }
  static Homogeneous from_vector(const MonomialBasis& basis, int degree, const Vector& coords) {
    Homogeneous out(basis.generators(), degree);
    const auto& monomials = basis.monomials(degree);
    if (coords.size() != monomials.size()) throw DimensionError("coordinate vector has wrong length");
    for (std::size_t i = 0; i < coords.size(); ++i) out.add_term(monomials[i], coords[i]);
    return out;
  }

  int generators() const { return m_; }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rational coeff(MultiIndex idx) const {
    auto it = terms_.find(idx);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(MultiIndex idx, const Rational& c) {
    if (c == 0) return;
    if (idx.degree() != degree_) throw DimensionError("term degree does not match form degree");
    if (idx.bits() >> m_) throw DimensionError("generator index exceeds generator count");
    auto [it, inserted] = terms_.try_emplace(idx, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Vector to_vector(const MonomialBasis& basis) const {
    if (basis.generators() != m_) throw DimensionError("basis generator count mismatch");
    Vector out(basis.dim(degree_));
    for (const auto& [idx, c] : terms_) out[basis.position(idx)] = c;
    return out;
  }

  Homogeneous& operator+=(const Homogeneous& other) {
    check_compatible(other);
    for (const auto& [idx, c] : other.terms_) add_term(idx, c);
    return *this;
  }
  Homogeneous& operator-=(const Homogeneous& other) {
    check_compatible(other);
    for (const auto& [idx, c] : other.terms_) add_term(idx, -c);
    return *this;
  }
  Homogeneous& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
    } else {
      for (auto& [idx, c] : terms_) c *= s;
    }
    return *this;
  }

  friend Homogeneous operator+(Homogeneous a, const Homogeneous& b) { return a += b; }
  friend Homogeneous operator-(Homogeneous a, const Homogeneous& b) { return a -= b; }
  friend Homogeneous operator-(Homogeneous a) { return a *= Rational(-1); }
  friend Homogeneous operator*(const Rational& s, Homogeneous a) { return a *= s; }

  friend bool operator==(const Homogeneous& a, const Homogeneous& b) {
    return a.m_ == b.m_ && (a.degree_ == b.degree_ || (a.is_zero() && b.is_zero())) &&
           a.terms_ == b.terms_;
  }

  /// Human-readable form such as "e1^e2 - 1/2 e3^e4" (d1^d2 for multivectors).
  std::string str() const {
    if (terms_.empty()) return "0";
    const char* symbol = std::is_same_v<Tag, FormTag> ? "e" : "d";
    std::ostringstream os;
    bool first = true;
    for (const auto& [idx, c] : terms_) {
      Rational mag = abs(c);
      if (first) {
        if (c < 0) os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      bool unit = mag == 1;
      if (!unit || idx.empty()) os << mag.get_str();
      if (!unit && !idx.empty()) os << " ";
      bool inner = false;
      for (int i : idx.indices()) {
        os << (inner ? "^" : "") << symbol << i;
        inner = true;
      }
    }
    return os.str();
  }

 private:
  void check_compatible(const Homogeneous& other) {
    if (other.m_ != m_) throw DimensionError("generator count mismatch");
    if (other.degree_ != degree_) {
      if (!other.is_zero() && !is_zero()) throw DimensionError("degree mismatch in sum");
      if (is_zero()) degree_ = other.degree_;
    }
  }

  int m_ = 0;
  int degree_ = 0;
  Terms terms_;
};

using Form = Homogeneous<FormTag>;
using Multivector = Homogeneous<MultivectorTag>;

template <class Tag>
Homogeneous<Tag> wedge(const Homogeneous<Tag>& a, const Homogeneous<Tag>& b) {
  if (a.generators() != b.generators()) throw DimensionError("wedge of elements over different generator counts");
  Homogeneous<Tag> out(a.generators(), a.degree() + b.degree());
  for (const auto& [ia, ca] : a.terms()) {
    for (const auto& [ib, cb] : b.terms()) {
      if (int s = wedge_sign(ia, ib)) out.add_term(MultiIndex(ia.bits() | ib.bits()), s * ca * cb);
    }
  }
  return out;
}

/// Order in which the factors of a multivector monomial act on a form.
///
/// `nested` reads (V∧W)⌟ω = V⌟(W⌟ω) literally, so the last factor acts first.
/// `reversed` lets the first factor act first, which differs from `nested` by
/// the global sign (-1)^{j(j-1)/2} on degree-j multivectors; it is the
/// convention under which ∂_I ⌟ e^I = 1. The operator identities
/// [⊤,δ] = d etc. hold only under `reversed` (see the calibration test).
enum class ContractionConvention { nested, reversed };

inline constexpr ContractionConvention kContractionConvention = ContractionConvention::reversed;

/// ∂_i ⌟ e^J as a signed monomial; sign 0 if i ∉ J.
inline int contract_generator(int i, MultiIndex& idx) {
  if (!idx.contains(i)) return 0;
  std::uint32_t below = idx.bits() & ((1u << (i - 1)) - 1);
  idx = MultiIndex(idx.bits() & ~(1u << (i - 1)));
  return (std::popcount(below) & 1) ? -1 : 1;
}

inline Form contract(const Multivector& v, const Form& w,
                     ContractionConvention convention = kContractionConvention) {
  if (v.generators() != w.generators()) throw DimensionError("contraction over different generator counts");
  int degree = w.degree() - v.degree();
  if (degree < 0) return Form(w.generators(), 0);
  Form out(w.generators(), degree);
  for (const auto& [iv, cv] : v.terms()) {
    auto factors = iv.indices();
    if (convention == ContractionConvention::nested) std::reverse(factors.begin(), factors.end());
    for (const auto& [iw, cw] : w.terms()) {
      MultiIndex idx = iw;
      int sign = 1;
      for (int i : factors) {
        sign *= contract_generator(i, idx);
        if (sign == 0) break;
      }
      if (sign) out.add_term(idx, sign * cv * cw);
    }
  }
  return out;
}

}  // namespace symspec
