#include <gtest/gtest.h>

#include "symspec/model.hpp"
#include "symspec/operators.hpp"
#include "symspec/sampling.hpp"

using namespace symspec;

namespace {

Rational factorial(int k) {
  Rational out = 1;
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

bool all_pass(const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

Model torus_with_omega(Form omega) {
  return Model("t4'", 4, std::vector<Form>(4, Form(4, 2)), std::move(omega));
}

}  // namespace

TEST(Poisson, TorusBivectors) {
  OperatorSet t2(builtin("t2"));
  EXPECT_EQ(t2.poisson(), Multivector::monomial(2, {1, 2}));
  OperatorSet t4(builtin("t4"));
  EXPECT_EQ(t4.poisson(), Multivector::monomial(4, {1, 2}) + Multivector::monomial(4, {3, 4}));
}

TEST(Poisson, KodairaThurstonBivector) {
  OperatorSet kt(builtin("kt4"));
  EXPECT_EQ(kt.poisson(), Multivector::monomial(4, {1, 4}) + Multivector::monomial(4, {2, 3}));
}

TEST(Poisson, GammaOfPoissonIsOmegaOnEveryBuiltin) {
  for (const auto& name : builtin_names()) {
    OperatorSet ops(builtin(name));
    EXPECT_EQ(ops.gamma(ops.poisson()), ops.model().omega()) << name;
  }
}

TEST(TopBot, BasicValues) {
  OperatorSet t4(builtin("t4"));
  EXPECT_EQ(t4.top(Form::scalar(4, 1)), t4.model().omega());
  EXPECT_EQ(t4.bot(t4.model().omega()), Form::scalar(4, 2));
  EXPECT_TRUE(t4.bot(Form::monomial(4, {1})).is_zero());
  OperatorSet t2(builtin("t2"));
  EXPECT_EQ(t2.bot(Form::monomial(2, {1, 2}, -1)), Form::scalar(2, -1));
}

// [⊥, ⊤] acts on Λ^k as multiplication by n − k.
TEST(TopBot, CommutatorIsDegreeCounting) {
  for (const auto& name : builtin_names()) {
    OperatorSet ops(builtin(name));
    GradedMap comm = compose(ops.bot_map(), ops.top_map()) - compose(ops.top_map(), ops.bot_map());
    for (int k = 0; k <= ops.generators(); ++k) {
      Matrix expected = Rational(ops.n() - k) * Matrix::identity(ops.basis().dim(k));
      EXPECT_EQ(comm.block(k), expected) << name << " degree " << k;
    }
  }
}

TEST(Identities, HoldOnEveryBuiltin) {
  for (const auto& name : builtin_names()) {
    OperatorSet ops(builtin(name));
    for (const auto& c : operator_identities(ops)) EXPECT_TRUE(c.pass) << name << ": " << c.name << " " << c.witness;
  }
}

// Regression for the frozen contraction convention: the nested reading breaks
// ⊤δ − δ⊤ = d as soon as d ≠ 0, and both agree on tori.
TEST(Identities, ContractionCalibration) {
  EXPECT_EQ(kContractionConvention, ContractionConvention::reversed);
  for (const auto& name : builtin_names()) {
    OperatorSet nested(builtin(name), ContractionConvention::nested);
    bool abelian = name[0] == 't';
    EXPECT_EQ(all_pass(operator_identities(nested)), abelian) << name;
  }
}

TEST(Effective, Dimensions) {
  OperatorSet t4(builtin("t4"));
  EXPECT_EQ(t4.effective(0).dim(), 1u);
  EXPECT_EQ(t4.effective(1).dim(), 4u);
  EXPECT_EQ(t4.effective(2).dim(), 5u);
  EXPECT_EQ(t4.effective(3).dim(), 0u);
  EXPECT_EQ(t4.effective(4).dim(), 0u);
  OperatorSet t6(builtin("t6"));
  EXPECT_EQ(t6.effective(3).dim(), 14u);
}

TEST(HodgeLepage, EffectiveFormIsItsOwnExpansion) {
  OperatorSet t4(builtin("t4"));
  for (const auto& v : t4.effective(2).basis()) {
    Form w = Form::from_vector(t4.basis(), 2, v);
    HodgeLepage hl = t4.hodge_lepage(w);
    ASSERT_EQ(hl.components.size(), 2u);
    EXPECT_EQ(hl.components[0], w);
    EXPECT_TRUE(hl.components[1].is_zero());
  }
}

TEST(HodgeLepage, OmegaIsTopOfOne) {
  OperatorSet t4(builtin("t4"));
  HodgeLepage hl = t4.hodge_lepage(t4.model().omega());
  EXPECT_TRUE(hl.components[0].is_zero());
  EXPECT_EQ(hl.components[1], Form::scalar(4, 1));
}

TEST(HodgeLepage, AlternativeOmegaOnFourTorus) {
  OperatorSet ops(torus_with_omega(Form::monomial(4, {1, 3}) + Form::monomial(4, {2, 4})));
  Form e12 = Form::monomial(4, {1, 2});
  HodgeLepage hl = ops.hodge_lepage(e12);
  EXPECT_EQ(hl.components[0], e12);
  EXPECT_TRUE(hl.components[1].is_zero());
  EXPECT_EQ(ops.reassemble(hl), e12);

  Form e13 = Form::monomial(4, {1, 3});
  HodgeLepage h13 = ops.hodge_lepage(e13);
  EXPECT_EQ(h13.components[1], Form::scalar(4, Rational(1, 2)));
  EXPECT_TRUE(ops.bot(h13.components[0]).is_zero());
  EXPECT_EQ(ops.reassemble(h13), e13);
}

TEST(HodgeLepage, RandomFormsReassembleExactly) {
  FormSampler sampler(5);
  for (const auto& name : builtin_names()) {
    OperatorSet ops(builtin(name));
    for (int trial = 0; trial < 100; ++trial) {
      Form w = sampler.form(ops.basis(), sampler.degree(ops.generators()));
      HodgeLepage hl = ops.hodge_lepage(w);
      EXPECT_EQ(ops.reassemble(hl), w) << name;
      for (const auto& c : hl.components) EXPECT_TRUE(ops.bot(c).is_zero()) << name;
    }
  }
}

TEST(HodgeLepage, ComponentMatrixMatchesFormLevelCall) {
  OperatorSet kt(builtin("kt4"));
  Matrix c1 = kt.hodge_lepage_component(2, 1);
  Form w = Form::monomial(4, {1, 4}) + Form::monomial(4, {3, 4}, 2);
  EXPECT_EQ(Form::from_vector(kt.basis(), 0, c1.apply(w.to_vector(kt.basis()))), kt.hodge_lepage(w).components[1]);
}

TEST(Delta, VanishesOnTori) {
  for (const auto* name : {"t2", "t4", "t6"}) EXPECT_TRUE(OperatorSet(builtin(name)).delta_map().is_zero()) << name;
}

TEST(Delta, KodairaThurstonValues) {
  OperatorSet kt(builtin("kt4"));
  Form e12 = Form::monomial(4, {1, 2});
  EXPECT_EQ(kt.delta(e12), kt.bot(kt.d(e12)) - kt.d(kt.bot(e12)));
  EXPECT_EQ(kt.d(Form::monomial(4, {3, 4})), Form::monomial(4, {1, 2, 3}, -1));
  EXPECT_EQ(kt.delta(Form::monomial(4, {3, 4})), Form::monomial(4, {1}, -1));
}

TEST(Delta, SquaresToZero) {
  for (const auto& name : builtin_names()) {
    OperatorSet ops(builtin(name));
    EXPECT_TRUE(compose(ops.delta_map(), ops.delta_map()).is_zero()) << name;
  }
}

TEST(Star, OneMapsToTopPowerOfOmega) {
  for (const auto& name : builtin_names()) {
    OperatorSet ops(builtin(name));
    EXPECT_EQ(ops.star(Form::scalar(ops.generators(), 1)), power(ops.model().omega(), ops.n())) << name;
  }
}

TEST(Star, SatisfiesDefiningIdentityOnTwoTorus) {
  OperatorSet t2(builtin("t2"));
  Form e1 = Form::monomial(2, {1}), e2 = Form::monomial(2, {2});
  Form s = t2.star(e1);
  EXPECT_EQ(s, e1);
  EXPECT_TRUE(wedge(e1, s).is_zero());
  Rational pairing = t2.bot(wedge(e2, e1)).coeff(MultiIndex());
  EXPECT_EQ(wedge(e2, s), pairing * t2.model().omega());
}

// The defining identity forces ∗ = c_k ⊤^{n-k} on Λ^k (k <= n) with
// c_k = k! n! / (n-k)!. On Λ^n this makes ∗∗ the scalar (n!)^4, not the identity.
TEST(Star, IsScaledLefschetzPower) {
  for (const auto& name : builtin_names()) {
    OperatorSet ops(builtin(name));
    const int n = ops.n();
    for (int k = 0; k <= n; ++k) {
      Rational c = factorial(k) * factorial(n) / factorial(n - k);
      EXPECT_EQ(ops.star_block(k), c * ops.top_power(n - k).block(k)) << name << " degree " << k;
    }
    Matrix twice = ops.star_block(n) * ops.star_block(n);
    Rational n4 = factorial(n) * factorial(n) * factorial(n) * factorial(n);
    EXPECT_EQ(twice, n4 * Matrix::identity(ops.basis().dim(n))) << name;
  }
}

TEST(Star, CommutatorAndStarRoutesAgreeInDegreeOne) {
  for (const auto& name : builtin_names()) {
    auto routes = delta_route_check(OperatorSet(builtin(name)));
    ASSERT_FALSE(routes.empty());
    EXPECT_TRUE(routes[0].agree) << name << " " << routes[0].witness;
  }
}

TEST(Star, RoutesDisagreeOnKodairaThurstonTwoForms) {
  auto routes = delta_route_check(OperatorSet(builtin("kt4")));
  ASSERT_EQ(routes.size(), 2u);
  EXPECT_FALSE(routes[1].agree);
  EXPECT_EQ(routes[1].witness, "ω = e3^e4: [⊥,d]ω = -e1, (-1)^{k+1}∗d∗ω = 2 e1");
}
