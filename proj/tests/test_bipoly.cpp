#include <multideriv/bipoly.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace multideriv;

namespace {

using P = Poly2<Rational>;

P x1() { return P::variable(Var::X1, Rational(1)); }
P x2() { return P::variable(Var::X2, Rational(1)); }
P c(long v) { return P::constant(Rational(v)); }

P random_poly(std::mt19937& rng, int max_deg) {
  std::uniform_int_distribution<int> e(0, max_deg), n(-4, 4);
  P p;
  for (int k = 0; k < 5; ++k) p.add_term({e(rng), e(rng)}, Rational(n(rng)));
  return p;
}

const CyclotomicField& k8() { return CyclotomicField::get(8); }

}  // namespace

TEST(Poly2, Arithmetic) {
  EXPECT_EQ((x1() + x2()) * (x1() - x2()), x1() * x1() - x2() * x2());
  EXPECT_EQ(x1() + P(), x1());
  EXPECT_EQ((x1() * x2()) * (x1() * x1() - x2() * x2()),
            P::monomial(1, 3, 1) - P::monomial(1, 1, 3));
  EXPECT_TRUE((x1() - x1()).is_zero());
  EXPECT_EQ((x1() + x2()).pow(3), x1().pow(3) + P::monomial(3, 2, 1) + P::monomial(3, 1, 2) + x2().pow(3));
}

TEST(Poly2, NoStoredZeros) {
  P p = x1() + x2();
  p.add_term({1, 0}, Rational(-1));
  EXPECT_EQ(p.size(), 1u);
  EXPECT_EQ(P::monomial(Rational(), 3, 3).size(), 0u);
  EXPECT_THROW(P::monomial(1, -1, 0), std::domain_error);
}

TEST(Poly2, LexLeadingTerm) {
  P p = x2().pow(5) + P::monomial(2, 1, 0) + P::monomial(-3, 1, 4);
  auto [m, coef] = p.leading();
  EXPECT_EQ(m, (Monomial{1, 4}));
  EXPECT_EQ(coef, Rational(-3));
  EXPECT_EQ(p.str(), "-3*x1*x2^4 + 2*x1 + x2^5");
}

TEST(Poly2, PartialDerivatives) {
  EXPECT_EQ(P::monomial(1, 2, 1).derivative(Var::X1), P::monomial(2, 1, 1));
  P p1 = (x1() * x1() + x2() * x2()).scaled(Rational(1, 2));
  EXPECT_EQ(p1.derivative(Var::X2), x2());
  P q2 = x1() * x1() - x2() * x2();
  EXPECT_EQ(q2.derivative(Var::X1), x1().scaled(Rational(2)));
}

TEST(Poly2, DerivativeDropsHomogeneousDegree) {
  std::mt19937 rng(3);
  for (int t = 0; t < 50; ++t) {
    P p = random_poly(rng, 6);
    for (const auto& [d, comp] : p.homogeneous_components()) {
      for (Var v : {Var::X1, Var::X2}) {
        P dp = comp.derivative(v);
        if (!dp.is_zero()) {
          EXPECT_EQ(dp.homogeneous_degree(), d - 1);
        }
      }
    }
  }
}

TEST(Poly2, ExactDivision) {
  std::mt19937 rng(5);
  for (int t = 0; t < 50; ++t) {
    P a = random_poly(rng, 4), b = random_poly(rng, 3);
    if (b.is_zero()) continue;
    auto q = (a * b).exact_divide(b);
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(*q, a);
  }
  EXPECT_FALSE((x1() + c(1)).exact_divide(x2()).has_value());
  EXPECT_FALSE((x1() * x1() + x2() * x2()).exact_divide(x1() + x2()).has_value());
  EXPECT_THROW(x1().exact_divide(P()), std::domain_error);
}

TEST(Valuation, Examples) {
  EXPECT_EQ(valuation_along(P::monomial(1, 2, 1), LinearForm<Rational>(0, 1)), 1);
  EXPECT_EQ(valuation_along(x1() * x2(), LinearForm<Rational>(1, 0)), 1);
  EXPECT_EQ(valuation_along(x1() * x1() + x2() * x2(), LinearForm<Rational>(1, 0)), 0);
  EXPECT_EQ(valuation_along(P(), LinearForm<Rational>(1, 1)), std::nullopt);
  EXPECT_EQ(valuation_along((x1() + x2()).pow(3) * (x1() - x2()), LinearForm<Rational>(2, 2)), 3);
  // inhomogeneous: the minimum over components
  EXPECT_EQ(valuation_along((x1() - x2()).pow(2) + (x1() - x2()).pow(5), LinearForm<Rational>(1, -1)), 2);
  EXPECT_THROW(LinearForm<Rational>(0, 0), std::domain_error);
}

TEST(Valuation, IrrationalLine) {
  // alpha = -sin(pi/4) x1 + cos(pi/4) x2 over Q(zeta_8)
  auto s = trig_constant(Trig::Sin, 1, 4), co = trig_constant(Trig::Cos, 1, 4);
  LinearForm<FieldScalar> alpha(-s, co);
  auto p = lift(x1() * x1() - x2() * x2(), k8());
  EXPECT_EQ(valuation_along(p, alpha), 1);
  EXPECT_EQ(valuation_along(p * p * alpha.poly(), alpha), 3);
  EXPECT_EQ(valuation_along(lift(x1() * x2(), k8()), alpha), 0);
}

TEST(Valuation, IsAdditive) {
  std::mt19937 rng(9);
  std::vector<LinearForm<Rational>> lines{{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 3}};
  for (int t = 0; t < 40; ++t) {
    P p = random_poly(rng, 4) * (x1() + x2()).pow(t % 3);
    P q = random_poly(rng, 4) * (x1() - x2()).pow(t % 2) * x2().pow(t % 4);
    if (p.is_zero() || q.is_zero()) continue;
    for (const auto& a : lines) {
      EXPECT_EQ(*valuation_along(p * q, a), *valuation_along(p, a) + *valuation_along(q, a));
    }
  }
}

TEST(SubstituteLinear, Examples) {
  auto co = trig_constant(Trig::Cos, 1, 4), s = trig_constant(Trig::Sin, 1, 4);
  Matrix2<FieldScalar> rot{co, -s, s, co};
  auto p1 = lift((x1() * x1() + x2() * x2()).scaled(Rational(1, 2)), k8());
  EXPECT_EQ(substitute_linear(p1, rot), p1);

  Matrix2<Rational> refl{1, 0, 0, -1};
  P q = x1() * x2() * (x1() * x1() - x2() * x2());
  EXPECT_EQ(substitute_linear(q, refl), -q);

  auto x = lift(x1(), k8());
  Poly2<FieldScalar> expect;
  expect.add_term({1, 0}, co);
  expect.add_term({0, 1}, -s);
  EXPECT_EQ(substitute_linear(x, rot), expect);
  EXPECT_THROW(substitute_linear(q, Matrix2<Rational>{1, 2, 2, 4}), std::domain_error);
}

TEST(SubstituteLinear, RingHomomorphismAndComposition) {
  std::mt19937 rng(13);
  Matrix2<Rational> m{2, 1, -1, 3}, n{0, 1, 1, 1};
  for (int t = 0; t < 30; ++t) {
    P a = random_poly(rng, 4), b = random_poly(rng, 4);
    EXPECT_EQ(substitute_linear(a * b, m), substitute_linear(a, m) * substitute_linear(b, m));
    EXPECT_EQ(substitute_linear(a + b, m), substitute_linear(a, m) + substitute_linear(b, m));
    // (p o M) o N = p o (M N)
    EXPECT_EQ(substitute_linear(substitute_linear(a, m), n), substitute_linear(a, m * n));
  }
}

TEST(Matrix2, Basics) {
  Matrix2<Rational> m{1, 2, 3, 4};
  EXPECT_EQ(m.det(), Rational(-2));
  EXPECT_EQ(m * m.inverse(), Matrix2<Rational>::identity(1));
  EXPECT_FALSE(m.is_orthogonal());
  EXPECT_TRUE((Matrix2<Rational>{0, 1, 1, 0}).is_orthogonal());
  EXPECT_THROW((Matrix2<Rational>{1, 1, 1, 1}).inverse(), std::domain_error);
}
