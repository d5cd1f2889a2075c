#include <multideriv/multideriv.hpp>

#include <gtest/gtest.h>

using namespace multideriv;

namespace {

using P = Poly2<Rational>;
using R = RatFn<Rational>;

}  // namespace

TEST(Json, DerivationRoundTrip) {
  const auto& a = Arrangement::build(6);
  Engine eng(a);
  for (const Multiplicity m : {Multiplicity{-3, -5}, {2, 0}, {5, 1}, {-1, 0}}) {
    auto cert = construct(eng, m.a1, m.a2);
    Json j = to_json(cert);
    EXPECT_EQ(j["a1"], m.a1);
    EXPECT_EQ(j["verified"], true);
    EXPECT_EQ(j["saito_scalar"].size(), 4u);
    auto back = basis_from_json(a, Json::parse(j.dump()));
    EXPECT_EQ(back.first, cert.basis.first);
    EXPECT_EQ(back.second, cert.basis.second);
  }
}

TEST(Json, PolynomialShape) {
  P p = P::monomial(Rational(-3, 2), 2, 1) + P::monomial(Rational(4), 0, 0);
  Json j = to_json(p);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["i"], 2);
  EXPECT_EQ(j[0]["c"], "-3/2");
  EXPECT_EQ(j[1]["c"], "4");
  EXPECT_EQ(poly_from_json(j), p);
  EXPECT_EQ(poly_from_json(Json::parse(R"([{"i":1,"j":0,"c":3}])")), P::monomial(Rational(3), 1, 0));
}

TEST(Json, RejectsMalformedInput) {
  const auto& a = Arrangement::build(4);
  EXPECT_THROW(poly_from_json(Json::parse(R"([{"i":-1,"j":0,"c":"1"}])")), std::invalid_argument);
  EXPECT_THROW(poly_from_json(Json::parse(R"([{"i":1,"c":"1"}])")), std::invalid_argument);
  EXPECT_THROW(rational_from_json(Json::parse(R"("1/0")")), std::domain_error);
  EXPECT_THROW(rational_from_json(Json::parse("1.5")), std::invalid_argument);
  EXPECT_THROW(basis_from_json(a, Json::parse("[]")), std::invalid_argument);
  Json d = to_json(euler(a));
  d["pdeg"] = 3;
  EXPECT_THROW(derivation_from_json(a, d), std::invalid_argument);
}

TEST(Json, RationalFunctionDenominators) {
  const auto& a = Arrangement::build(4);
  R f(a, P::monomial(Rational(1), 3, 0), 1, 2);
  Json j = to_json(f);
  EXPECT_EQ(j["den_q1"], 1);
  EXPECT_EQ(j["den_q2"], 2);
  EXPECT_EQ(ratfn_from_json(a, j), f);
}

TEST(Format, LatexPieces) {
  P p = P::monomial(Rational(1), 2, 0) - P::monomial(Rational(1, 2), 1, 3) + P::constant(Rational(-5));
  EXPECT_EQ(latex_poly(p), "x_{1}^{2} - \\frac{1}{2} x_{1}x_{2}^{3} - 5");
  const auto& a = Arrangement::build(4);
  EXPECT_EQ(latex_ratfn(R(a, P::monomial(Rational(1), 1, 0), 2, 1)), "\\frac{x_{1}}{Q_{1}^{2} Q_{2}}");
  EXPECT_EQ(latex_rational(Rational(-3, 4)), "-\\frac{3}{4}");
}

TEST(Format, ParityRows) {
  EXPECT_EQ(parity_row(1, 5), 0);
  EXPECT_EQ(parity_row(3, 1), 1);
  EXPECT_EQ(parity_row(-1, 2), 2);
  EXPECT_EQ(parity_row(0, -3), 3);
  EXPECT_EQ(parity_row(-2, 4), 4);
}

TEST(Format, UnitBoxTextOrder) {
  Engine eng(Arrangement::build(8));
  std::vector<BasisCertificate> certs;
  for (const auto& m : unit_box_order()) certs.push_back(construct(eng, m.a1, m.a2));
  std::string text = unit_box_text(8, certs, false);
  EXPECT_NE(text.find("E, I*(dP2)"), std::string::npos);
  EXPECT_LT(text.find("(0, -1)"), text.find("(-1, 0)"));
  std::string tex = unit_box_text(8, certs, true);
  EXPECT_NE(tex.find("$D_{1}, I^{*}(dQ_{1}/Q_{1})$ & $-3, -1$ & $2$"), std::string::npos);
}

TEST(Selftest, ParallelForPropagatesErrors) {
  std::atomic<int> n{0};
  parallel_for(50, 4, [&](std::size_t) { ++n; });
  EXPECT_EQ(n, 50);
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

TEST(Selftest, SingleCriteriaRunStandalone) {
  Selftest suite;
  EXPECT_TRUE(suite.b2_closed_forms().ok);
  EXPECT_TRUE(suite.phi_determinant().ok);
  auto r = suite.inversion_round_trips();
  EXPECT_TRUE(r.ok) << r.detail;
}
