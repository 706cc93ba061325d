#pragma once

// Seeded random forms for property checks. Coefficients are small rationals
// so that exact arithmetic stays cheap.

#include <random>

#include "symspec/exterior.hpp"
#include "symspec/linalg.hpp"
#include "symspec/rational.hpp"

namespace symspec {

class FormSampler {
 public:
  explicit FormSampler(std::uint64_t seed) : rng_(seed) {}

  Rational coefficient() {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 6);
    Rational out(num(rng_), den(rng_));
    out.canonicalize();
    return out;
  }

  /// About half the coefficients are zero.
  Vector vector(std::size_t dim) {
    std::bernoulli_distribution keep(0.5);
    Vector out(dim);
    for (auto& c : out) {
      if (keep(rng_)) c = coefficient();
    }
    return out;
  }

  Form form(const MonomialBasis& basis, int k) { return Form::from_vector(basis, k, vector(basis.dim(k))); }

  /// A random element of a subspace.
  Vector in(const Subspace& s) {
    Vector out(s.ambient());
    for (const auto& b : s.basis()) {
      Rational c = coefficient();
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * b[j];
    }
    return out;
  }

  int degree(int max_degree) { return std::uniform_int_distribution<int>(0, max_degree)(rng_); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace symspec
