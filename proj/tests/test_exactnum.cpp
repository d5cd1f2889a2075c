#include <multideriv/cyclotomic.hpp>
#include <multideriv/linsolve.hpp>
#include <multideriv/rational.hpp>
#include <multideriv/upoly.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace multideriv;

namespace {

UPoly poly(std::initializer_list<long> cs) {
  std::vector<Rational> v;
  for (long c : cs) v.emplace_back(c);
  return UPoly(v);
}

FieldScalar random_element(const CyclotomicField& f, std::mt19937& rng) {
  std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
  std::vector<Rational> c;
  for (int k = 0; k < f.degree(); ++k) c.emplace_back(num(rng), den(rng));
  return FieldScalar(f, c);
}

}  // namespace

TEST(Rational, NormalizesEagerly) {
  Rational q(6, -4);
  EXPECT_EQ(q.str(), "-3/2");
  EXPECT_EQ(q.denominator(), 2);
  EXPECT_EQ(Rational::parse("10/4"), Rational(5, 2));
  EXPECT_EQ(Rational(3).str(), "3/1");
  EXPECT_THROW(Rational(1, 0), std::domain_error);
  EXPECT_THROW(Rational().inverse(), std::domain_error);
  EXPECT_THROW(Rational::parse("x"), std::invalid_argument);
}

TEST(CyclotomicPoly, KnownValues) {
  EXPECT_EQ(cyclotomic_poly(1), poly({-1, 1}));
  EXPECT_EQ(cyclotomic_poly(4), poly({1, 0, 1}));
  EXPECT_EQ(cyclotomic_poly(8), poly({1, 0, 0, 0, 1}));
  EXPECT_EQ(cyclotomic_poly(12), poly({1, 0, -1, 0, 1}));
  EXPECT_EQ(cyclotomic_poly(20), poly({1, 0, -1, 0, 1, 0, -1, 0, 1}));
}

TEST(CyclotomicPoly, DegreeIsTotientAndMonic) {
  for (int n = 1; n <= 60; ++n) {
    UPoly p = cyclotomic_poly(n);
    EXPECT_EQ(p.degree(), euler_phi(n)) << n;
    EXPECT_TRUE(p.is_monic()) << n;
    for (const auto& c : p.coeffs()) EXPECT_TRUE(c.is_integer());
  }
}

TEST(CyclotomicPoly, GeneratorIsARoot) {
  for (int n : {4, 8, 12, 16, 24, 60}) {
    const auto& f = CyclotomicField::get(n);
    const auto& m = f.modulus();
    FieldScalar acc(f, Rational());
    FieldScalar power(f, Rational(1));
    FieldScalar z = FieldScalar::zeta_power(f, 1);
    for (int k = 0; k <= m.degree(); ++k) {
      acc += power * m.coeff(k);
      power *= z;
    }
    EXPECT_TRUE(acc.is_zero()) << n;
  }
}

TEST(FieldScalar, RootOfUnityArithmetic) {
  for (int h : {4, 6, 8, 12}) {
    const auto& f = CyclotomicField::get(2 * h);
    auto z = FieldScalar::zeta_power(f, 1);
    EXPECT_TRUE((z * FieldScalar::zeta_power(f, 2 * h - 1)).is_one());
    auto i = FieldScalar::zeta_power(f, h / 2);
    EXPECT_EQ(i * i, FieldScalar(f, Rational(-1)));
    EXPECT_EQ(z.inverse(), FieldScalar::zeta_power(f, 2 * h - 1));
  }
  const auto& f8 = CyclotomicField::get(8);
  auto s = FieldScalar::zeta_power(f8, 1) + FieldScalar::zeta_power(f8, -1);
  EXPECT_EQ(s * s, FieldScalar(f8, Rational(2)));
  EXPECT_EQ(s.inverse(), s * Rational(1, 2));
  EXPECT_EQ(FieldScalar(f8, Rational(2)).inverse(), FieldScalar(f8, Rational(1, 2)));
}

TEST(FieldScalar, MismatchedFieldsThrow) {
  auto a = FieldScalar::zeta_power(CyclotomicField::get(8), 1);
  auto b = FieldScalar::zeta_power(CyclotomicField::get(12), 1);
  EXPECT_THROW(a + b, std::domain_error);
  EXPECT_THROW(a * b, std::domain_error);
  EXPECT_THROW(FieldScalar(CyclotomicField::get(8), Rational()).inverse(), std::domain_error);
}

TEST(FieldScalar, DetachedZeroAdoptsField) {
  const auto& f = CyclotomicField::get(12);
  FieldScalar zero;
  auto z = FieldScalar::zeta_power(f, 1);
  EXPECT_EQ(zero + z, z);
  EXPECT_TRUE((zero * z).is_zero());
  EXPECT_TRUE((z * zero).is_zero());
  EXPECT_EQ(zero, FieldScalar(f, Rational()));
}

TEST(FieldScalar, FieldAxiomsOnRandomSamples) {
  std::mt19937 rng(20261015);
  for (int h : {4, 6, 8, 12}) {
    const auto& f = CyclotomicField::get(2 * h);
    for (int n = 0; n < 100; ++n) {
      auto a = random_element(f, rng), b = random_element(f, rng), c = random_element(f, rng);
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ((a + b) * c, a * c + b * c);
      EXPECT_EQ(a * b, b * a);
      if (!a.is_zero()) {
        EXPECT_TRUE((a * a.inverse()).is_one());
      }
      EXPECT_EQ(a * a, [&] { auto x = a; x *= x; return x; }());
    }
  }
}

TEST(FieldScalar, NumericEmbedding) {
  const auto& f = CyclotomicField::get(12);
  auto z = FieldScalar::zeta_power(f, 1).to_complex();
  EXPECT_NEAR(z.real(), std::cos(M_PI / 6), 1e-12);
  EXPECT_NEAR(z.imag(), std::sin(M_PI / 6), 1e-12);
}

TEST(TrigConstant, Values) {
  EXPECT_TRUE(trig_constant(Trig::Cos, 0, 8).is_one());
  EXPECT_TRUE(trig_constant(Trig::Sin, 8, 8).is_zero());
  auto c = trig_constant(Trig::Cos, 1, 6);
  EXPECT_NEAR(c.to_complex().real(), 0.8660254037844386, 1e-12);
  EXPECT_NEAR(c.to_complex().imag(), 0.0, 1e-12);
  EXPECT_EQ(c * c, FieldScalar(CyclotomicField::get(12), Rational(3, 4)));
  EXPECT_THROW(trig_constant(Trig::Sin, 1, 5), std::domain_error);
}

TEST(TrigConstant, PythagoreanIdentityAndRealness) {
  for (int h : {4, 6, 8, 10, 12}) {
    const auto& f = CyclotomicField::get(2 * h);
    for (int j = 0; j <= 2 * h; ++j) {
      auto c = trig_constant(Trig::Cos, j, h);
      auto s = trig_constant(Trig::Sin, j, h);
      EXPECT_TRUE((c * c + s * s).is_one()) << h << " " << j;
      EXPECT_EQ(c.conj(), c);
      EXPECT_EQ(s.conj(), s);
      EXPECT_NEAR(s.to_complex().real(), std::sin(j * M_PI / h), 1e-12);
    }
    EXPECT_EQ(trig_constant(Trig::Sin, h / 2, h), FieldScalar(f, Rational(1)));
  }
}

TEST(SolveLinear, Identity) {
  LinSystem<Rational> sys(0, 3, Rational());
  sys.add_row({1, 0, 0}, 4);
  sys.add_row({0, 1, 0}, -2);
  sys.add_row({0, 0, 1}, Rational(1, 3));
  auto sol = solve_linear(sys);
  ASSERT_EQ(sol.status, SolveStatus::Unique);
  EXPECT_EQ(sol.particular, (std::vector<Rational>{4, -2, Rational(1, 3)}));
}

TEST(SolveLinear, OneEquationTwoUnknowns) {
  LinSystem<Rational> sys(0, 2, Rational());
  sys.add_row({1, 1}, 0);
  auto sol = solve_linear(sys);
  ASSERT_EQ(sol.status, SolveStatus::Parametric);
  EXPECT_EQ(sol.particular, (std::vector<Rational>{0, 0}));
  ASSERT_EQ(sol.nullspace.size(), 1u);
  const auto& v = sol.nullspace[0];
  EXPECT_EQ(v[0] + v[1], Rational());
  EXPECT_FALSE(v[0].is_zero());
}

TEST(SolveLinear, Inconsistent) {
  LinSystem<Rational> sys(0, 1, Rational());
  sys.add_row({2}, 1);
  sys.add_row({4}, 3);
  EXPECT_EQ(solve_linear(sys).status, SolveStatus::NoSolution);
  LinSystem<Rational> empty(0, 0, Rational());
  empty.add_row({}, 1);
  EXPECT_EQ(solve_linear(empty).status, SolveStatus::NoSolution);
}

TEST(SolveLinear, RandomSystemsMultiplyBack) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> d(-5, 5);
  const auto& f = CyclotomicField::get(16);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t rows = 3 + trial % 4, cols = 5;
    LinSystem<FieldScalar> sys(0, cols, FieldScalar(f, Rational()));
    std::vector<FieldScalar> x0;
    for (std::size_t c = 0; c < cols; ++c) x0.push_back(trial % 2 ? random_element(f, rng) : FieldScalar(f, Rational(d(rng))));
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<FieldScalar> row;
      FieldScalar b(f, Rational());
      for (std::size_t c = 0; c < cols; ++c) {
        row.emplace_back(f, Rational(d(rng)));
        b += row.back() * x0[c];
      }
      sys.add_row(row, b);
    }
    auto sol = solve_linear(sys);
    ASSERT_NE(sol.status, SolveStatus::NoSolution);
    EXPECT_EQ(sol.nullspace.size(), cols - sol.rank);
    for (std::size_t r = 0; r < rows; ++r) {
      FieldScalar lhs(f, Rational());
      for (std::size_t c = 0; c < cols; ++c) lhs += sys.matrix[r][c] * sol.particular[c];
      EXPECT_EQ(lhs, sys.rhs[r]);
      for (const auto& v : sol.nullspace) {
        FieldScalar hv(f, Rational());
        for (std::size_t c = 0; c < cols; ++c) hv += sys.matrix[r][c] * v[c];
        EXPECT_TRUE(hv.is_zero());
      }
    }
  }
}

TEST(SolveLinear, InvertibleRationalSystem) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> d(-7, 7);
  for (int trial = 0; trial < 10; ++trial) {
    LinSystem<Rational> sys(0, 5, Rational());
    for (int r = 0; r < 5; ++r) {
      std::vector<Rational> row;
      for (int c = 0; c < 5; ++c) row.emplace_back(d(rng) + (r == c ? 40 : 0));
      sys.add_row(row, d(rng));
    }
    auto sol = solve_linear(sys);
    ASSERT_EQ(sol.status, SolveStatus::Unique);
    for (int r = 0; r < 5; ++r) {
      Rational lhs;
      for (int c = 0; c < 5; ++c) lhs += sys.matrix[r][c] * sol.particular[c];
      EXPECT_EQ(lhs, sys.rhs[r]);
    }
  }
}
