#include <multideriv/ratfn.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace multideriv;

namespace {

using P = Poly2<Rational>;

P mono(long c, int i, int j) { return P::monomial(Rational(c), i, j); }

// V = -x2 d1 + x1 d2 on polynomials
template <Scalar K>
Poly2<K> rot_field(const Poly2<K>& f) {
  return Poly2<K>::variable(Var::X2, one_like(f.some_coeff())) * f.derivative(Var::X1) * Poly2<K>::constant(-one_like(f.some_coeff())) +
         Poly2<K>::variable(Var::X1, one_like(f.some_coeff())) * f.derivative(Var::X2);
}

}  // namespace

TEST(Arrangement, RejectsOddOrSmallH) {
  EXPECT_THROW(Arrangement::build(5), std::domain_error);
  EXPECT_THROW(Arrangement::build(2), std::domain_error);
  EXPECT_THROW(Arrangement::build(32), std::domain_error);
  EXPECT_NO_THROW(Arrangement::build(32, 40));
}

TEST(Arrangement, OrbitPolynomialsSmallH) {
  const auto& a4 = Arrangement::build(4);
  EXPECT_EQ(a4.q1(), mono(2, 1, 1));
  EXPECT_EQ(a4.q2(), mono(1, 2, 0) - mono(1, 0, 2));
  const auto& a6 = Arrangement::build(6);
  EXPECT_EQ(a6.q1(), mono(3, 2, 1) - mono(1, 0, 3));
  EXPECT_EQ(a6.q2(), mono(1, 3, 0) - mono(3, 1, 2));
  for (int h = 4; h <= 20; h += 2) {
    const auto& a = Arrangement::build(h);
    EXPECT_EQ(a.q().homogeneous_degree(), h);
    EXPECT_EQ(a.p2().homogeneous_degree(), h);
    EXPECT_EQ(a.q(), a.q1() * a.q2());
    EXPECT_EQ(a.p2(), a.q1() * a.q1());
    EXPECT_EQ(a.orbit(1).size(), static_cast<std::size_t>(h / 2));
    EXPECT_EQ(a.orbit(2).size(), static_cast<std::size_t>(h / 2));
  }
}

TEST(Arrangement, ValuationCensus) {
  for (int h : {4, 6, 8, 10, 12}) {
    const auto& a = Arrangement::build(h);
    auto q1 = lift(a.q1(), a.field()), q2 = lift(a.q2(), a.field());
    for (int j = 0; j < h; ++j) {
      EXPECT_EQ(valuation_along(q1, a.lines()[j]), j % 2 == 0 ? 1 : 0);
      EXPECT_EQ(valuation_along(q2, a.lines()[j]), j % 2 == 0 ? 0 : 1);
    }
  }
}

TEST(Arrangement, RotationIdentities) {
  for (int h = 4; h <= 16; h += 2) {
    const auto& a = Arrangement::build(h);
    EXPECT_EQ(rot_field(a.q1()), a.q2().scaled(Rational(h / 2)));
    EXPECT_EQ(rot_field(a.q2()), a.q1().scaled(Rational(-h / 2)));
    // Jacobian of (P1, Q2) is V(Q2)
    P jac = a.p1().derivative(Var::X1) * a.q2().derivative(Var::X2) - a.p1().derivative(Var::X2) * a.q2().derivative(Var::X1);
    EXPECT_EQ(jac, a.q1().scaled(Rational(-h / 2)));
  }
}

TEST(Arrangement, GroupPreservesOrbitsAndQ) {
  for (int h : {4, 6, 8, 12}) {
    const auto& a = Arrangement::build(h);
    ASSERT_EQ(a.group().size(), static_cast<std::size_t>(2 * h));
    auto q = lift(a.q(), a.field());
    for (const auto& w : a.group()) {
      EXPECT_TRUE(w.is_orthogonal());
      auto image = substitute_linear(q, w);
      EXPECT_EQ(image, q.scaled(w.det()));
      // each line goes to a line of the same parity
      for (int j = 0; j < h; ++j) {
        const auto& l = a.lines()[j];
        FieldScalar ca = l.a * w.a + l.b * w.b, cb = l.a * w.c + l.b * w.d;
        int hits = 0;
        for (int k = 0; k < h; ++k) {
          if ((ca * a.lines()[k].b - cb * a.lines()[k].a).is_zero()) {
            ++hits;
            EXPECT_EQ(k % 2, j % 2);
          }
        }
        EXPECT_EQ(hits, 1);
      }
    }
  }
}

TEST(Arrangement, QPowerCache) {
  const auto& a = Arrangement::build(8);
  EXPECT_EQ(a.q_pow<Rational>(1, 3), a.q1() * a.q1() * a.q1());
  EXPECT_EQ(a.q_pow<Rational>(2, 0), P::constant(1));
  EXPECT_EQ(a.q_pow<Rational>(1, 5), a.q_pow<Rational>(1, 3) * a.q1() * a.q1());
  EXPECT_EQ(a.q_pow<FieldScalar>(2, 2), lift(a.q2() * a.q2(), a.field()));
}

TEST(QPower, Examples) {
  const auto& a = Arrangement::build(6);
  EXPECT_EQ(q_power(a, {0, 0}), RatFn<Rational>::constant(a, 1));
  EXPECT_EQ(q_power(a, {1, 1}), RatFn<Rational>(a, a.q()));
  auto r = q_power(a, {2, -1});
  EXPECT_EQ(r.num(), a.q1() * a.q1());
  EXPECT_EQ(r.den_q1(), 0);
  EXPECT_EQ(r.den_q2(), 1);
}

TEST(RatFn, Normalization) {
  const auto& a = Arrangement::build(4);
  P x1 = mono(1, 1, 0);
  auto full = RatFn<Rational>(a, a.q1() * x1, 1, 0);
  EXPECT_EQ(full.num(), x1);
  EXPECT_TRUE(full.is_polynomial());
  auto partial = RatFn<Rational>(a, x1, 1, 0);
  EXPECT_EQ(partial.num(), x1);
  EXPECT_EQ(partial.den_q1(), 1);
  auto zero = RatFn<Rational>(a, P(), 3, 2);
  EXPECT_TRUE(zero.is_zero());
  EXPECT_EQ(zero.den_q1(), 0);
  EXPECT_EQ(zero.den_q2(), 0);
  EXPECT_EQ(RatFn<Rational>(a, a.q() * a.q2(), 1, 3), RatFn<Rational>(a, P::constant(1), 0, 1));
  EXPECT_EQ(partial.degree(), -1);
  EXPECT_EQ(partial.valuation(0), -1);
  EXPECT_EQ(partial.valuation(1), 0);
}

TEST(RatFn, ArithmeticAgreesWithClearedDenominators) {
  const auto& a = Arrangement::build(6);
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> e(0, 3), n(-3, 3), ex(0, 2);
  auto random_fn = [&] {
    P p;
    for (int k = 0; k < 4; ++k) p.add_term({e(rng), e(rng)}, Rational(n(rng)));
    return RatFn<Rational>(a, p, ex(rng), ex(rng));
  };
  for (int t = 0; t < 30; ++t) {
    auto r = random_fn(), s = random_fn();
    const int c1 = 4, c2 = 4;  // a common denominator Q1^4 Q2^4
    auto cleared = [&](const RatFn<Rational>& f) { return f.times_q_power(c1, c2); };
    auto sum = cleared(r + s), diff = cleared(r - s);
    ASSERT_TRUE(sum.is_polynomial());
    EXPECT_EQ(sum.num(), cleared(r).num() + cleared(s).num());
    EXPECT_EQ(diff.num(), cleared(r).num() - cleared(s).num());
    auto prod = (r * s).times_q_power(2 * c1, 2 * c2);
    EXPECT_EQ(prod.num(), cleared(r).num() * cleared(s).num());
    EXPECT_EQ(r - r, RatFn<Rational>(a));
  }
}

TEST(RatFn, QuotientRule) {
  const auto& a = Arrangement::build(4);
  // d/dx1 of 1/Q1 = -(dQ1/dx1)/Q1^2
  auto f = RatFn<Rational>(a, P::constant(1), 1, 0);
  auto df = f.derivative(Var::X1);
  EXPECT_EQ(df, RatFn<Rational>(a, -a.q1().derivative(Var::X1), 2, 0));
  // product rule against an independent expansion
  auto g = RatFn<Rational>(a, mono(1, 3, 0), 0, 2);
  auto lhs = (f * g).derivative(Var::X2);
  auto rhs = f.derivative(Var::X2) * g + f * g.derivative(Var::X2);
  EXPECT_EQ(lhs, rhs);
}

TEST(RatFn, SubstituteTracksOrbitSigns) {
  const auto& a = Arrangement::build(4);
  Matrix2<Rational> s{1, 0, 0, -1};
  auto f = RatFn<Rational>(a, mono(1, 1, 0), 1, 0);  // x1 / Q1
  EXPECT_EQ(f.substitute(s), -f);
  Matrix2<Rational> bad{2, 0, 0, 1};
  EXPECT_THROW(f.substitute(bad), std::domain_error);
}
