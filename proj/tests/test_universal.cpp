#include <multideriv/universal.hpp>

#include <gtest/gtest.h>

using namespace multideriv;

namespace {

using P = Poly2<Rational>;
using R = RatFn<Rational>;
using Der = Derivation<Rational>;

long odd_double_factorial(long n) {
  long r = 1;
  for (long k = n; k > 1; k -= 2) r *= k;
  return r;
}

long ipow(long b, int e) {
  long r = 1;
  for (int k = 0; k < e; ++k) r *= b;
  return r;
}

// x1^-k d1 + x2^-k d2 for h = 4, where Q1 = 2 x1 x2: x1^-k = (2 x2)^k / Q1^k
Der inverse_power_pair(const Arrangement& a, int k) {
  return {R(a, P::monomial(Rational(ipow(2, k)), 0, k), k, 0), R(a, P::monomial(Rational(ipow(2, k)), k, 0), k, 0)};
}

bool invariant(const Der& t) {
  const auto& a = t.arrangement();
  auto tk = lift(t);
  return w_action(a.rotation(), tk) == tk && w_action(lift(a.reflection(), a.field()), tk) == tk;
}

}  // namespace

TEST(ForwardPower, ZeroIsIdentity) {
  const auto& a = Arrangement::build(6);
  EXPECT_EQ(forward_power(Primitive::D, 0, euler(a)), euler(a));
  EXPECT_THROW(forward_power(Primitive::D, -1, euler(a)), std::domain_error);
}

TEST(ForwardPower, B2ClosedForm) {
  // -(4n-3)!! (x1^(1-4n) d1 + x2^(1-4n) d2) for D1 = V/(x1 x2); ours is D1/8
  const auto& a = Arrangement::build(4);
  for (int n = 1; n <= 3; ++n) {
    auto v = forward_power(Primitive::D1, 2 * n, euler(a));
    Rational c = Rational(-odd_double_factorial(4 * n - 3)) / Rational(ipow(64, n));
    EXPECT_EQ(v, inverse_power_pair(a, 4 * n - 1).scaled(c)) << n;
    EXPECT_EQ(v.pdeg(), 1 - 4 * n);
  }
}

TEST(ForwardPower, DegreeDrops) {
  for (int h : {4, 6, 8}) {
    const auto& a = Arrangement::build(h);
    EXPECT_EQ(forward_power(Primitive::D, 2, euler(a)).pdeg(), 1 - 2 * h);
    EXPECT_EQ(forward_power(Primitive::D2, 3, euler(a)).pdeg(), 1 - 3 * h / 2);
  }
}

TEST(InvertD, RoundTripOnEuler) {
  for (int h : {4, 6, 8}) {
    const auto& a = Arrangement::build(h);
    Engine eng(a);
    auto d = connection(primitive(a, Primitive::D), euler(a));
    EXPECT_EQ(eng.invert_D(d, {1, 1}), euler(a));
    auto eta = eng.invert_D(euler(a), {3, 3});
    EXPECT_EQ(eta.pdeg(), 1 + h);
    EXPECT_EQ(eng.invert_D(connection(primitive(a, Primitive::D), eta), {3, 3}), eta);
    for (const auto& r : eng.inversion_log()) {
      EXPECT_TRUE(r.ok());
      EXPECT_EQ(r.pdeg_out - r.pdeg_in, h);
    }
  }
}

TEST(InvertD, B2EulerPreimageCertifies) {
  const auto& a = Arrangement::build(4);
  Engine eng(a);
  auto eta = eng.invert_D(euler(a), {3, 3});
  EXPECT_EQ(eta.pdeg(), 5);
  EXPECT_TRUE(invariant(eta));
  auto res = universality_check(eta, 1, 1);
  ASSERT_TRUE(res) << res.reason;
  EXPECT_EQ(res.exponents, std::make_pair(4, 4));
}

TEST(InvertD, Errors) {
  const auto& a = Arrangement::build(4);
  Engine eng(a, 0);
  auto pole = forward_power(Primitive::D1, 2, euler(a));
  try {
    eng.invert_D(pole, {3, 3});
    FAIL() << "expected exhaustion";
  } catch (const InternalError& e) {
    EXPECT_NE(std::string(e.what()).find("exhausted"), std::string::npos);
  }
  // d1 has a preimage P2 d1 + c P1^2 d2 family, none of them W-invariant
  EXPECT_THROW(eng.invert_D(partial(a, Var::X1), {1, 1}), InternalError);
  Der inhom(R(a, P::monomial(1, 1, 0) + P::constant(1)), R(a));
  EXPECT_THROW(eng.invert_D(inhom, {1, 1}), std::domain_error);
  EXPECT_THROW(Engine(a, -1), std::domain_error);
}

TEST(BuildE, SmallCases) {
  const auto& a = Arrangement::build(4);
  Engine eng(a);
  EXPECT_EQ(eng.build_E({0, 0, Variant::E1}), euler(a));
  EXPECT_EQ(eng.build_E({0, 0, Variant::E2}), euler(a));
  EXPECT_EQ(eng.build_E({-2, 0, Variant::E1}), inverse_power_pair(a, 3).scaled(Rational(-1, 64)));
  auto e2 = eng.build_E({2, 0, Variant::E2});
  EXPECT_EQ(e2.pdeg(), 5);
  EXPECT_TRUE(universality_check(e2, 2, 0));
  EXPECT_THROW(eng.build_E({1, 0, Variant::E1}), std::domain_error);
  EXPECT_THROW(eng.build_E({2, 0, Variant::E1}), std::domain_error);
  EXPECT_THROW(eng.build_E({0, 2, Variant::E2}), std::domain_error);
}

TEST(BuildE, VariantChoice) {
  EXPECT_EQ(UniversalSpec::choose(0, 0)->variant, Variant::E1);
  EXPECT_EQ(UniversalSpec::choose(2, 0)->variant, Variant::E2);
  EXPECT_EQ(UniversalSpec::choose(-3, 1)->variant, Variant::E1);
  EXPECT_FALSE(UniversalSpec::choose(-2, -2).has_value());
  EXPECT_FALSE(UniversalSpec::choose(1, 0).has_value());
}

TEST(Universality, Examples) {
  const auto& a = Arrangement::build(4);
  EXPECT_TRUE(universality_check(euler(a), 0, 0));
  EXPECT_TRUE(universality_check(forward_power(Primitive::D1, 2, euler(a)), -2, 0));
  Der x1sq(R(a, P::monomial(1, 2, 0)), R(a));
  EXPECT_FALSE(universality_check(x1sq, 1, 0));
}

TEST(Universality, PropertiesAcrossSpecs) {
  for (int h : {4, 6, 8}) {
    const auto& a = Arrangement::build(h);
    Engine eng(a);
    auto [dp1, dp2] = invariant_partials(a);
    EXPECT_EQ(apply(dp1, a.p1()), R::constant(a, 1));
    EXPECT_TRUE(apply(dp1, a.p2()).is_zero());
    for (auto [s, t] : {std::pair{0, 0}, {1, 1}, {2, 0}, {0, 2}, {-2, 0}, {-1, 1}, {3, 1}, {-3, 1}, {1, -1}, {2, 2}}) {
      auto spec = *UniversalSpec::choose(s, t);
      auto z = eng.build_E(spec);
      EXPECT_EQ(z.pdeg(), spec.expected_pdeg(h));
      EXPECT_TRUE(invariant(z)) << spec.str();
      auto u = universality_check(z, s, t);
      EXPECT_TRUE(u) << h << " " << spec.str() << " " << u.reason;
      EXPECT_TRUE(membership(z, {2 * s + 1, 2 * t + 1}));
      for (const auto& gap : unit_valuation_gaps(z, s, t)) EXPECT_EQ(gap, 0) << spec.str();
      // images of d/dP1, d/dP2 form a basis of D(A, 2k - 1)
      auto res = saito_check(connection(dp1, z), connection(dp2, z), {2 * s - 1, 2 * t - 1});
      EXPECT_TRUE(res) << spec.str() << " " << res.reason;
    }
    for (const auto& r : eng.inversion_log()) EXPECT_TRUE(r.ok());
  }
}

TEST(Universality, InverseRaisesUniversality) {
  for (int h : {4, 6}) {
    const auto& a = Arrangement::build(h);
    Engine eng(a);
    Der z = euler(a);
    for (int k = 0; k < 2; ++k) {
      z = eng.invert_D(z, {2 * k + 3, 2 * k + 3});
      EXPECT_TRUE(universality_check(z, k + 1, k + 1));
    }
    EXPECT_EQ(z, eng.build_E({2, 2, Variant::E1}));
  }
}
