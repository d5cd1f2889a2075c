#pragma once

// Rational vector fields c1 d1 + c2 d2 in the orthonormal coordinates x1, x2, the flat
// connection, the group action, membership in D(A, k) and Saito's criterion.

#include <multideriv/ratfn.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace multideriv {

template <Scalar K>
class Derivation {
 public:
  Derivation() = default;
  Derivation(RatFn<K> c1, RatFn<K> c2) : c1_(std::move(c1)), c2_(std::move(c2)) {
    if (c1_.arrangement_ptr() && c2_.arrangement_ptr() && c1_.arrangement_ptr() != c2_.arrangement_ptr()) {
      throw std::domain_error("derivation coefficients over different arrangements");
    }
  }

  const RatFn<K>& c1() const { return c1_; }
  const RatFn<K>& c2() const { return c2_; }
  const RatFn<K>& coeff(int i) const { return i == 1 ? c1_ : c2_; }
  const Arrangement& arrangement() const { return c1_.arrangement_ptr() ? c1_.arrangement() : c2_.arrangement(); }
  bool is_zero() const { return c1_.is_zero() && c2_.is_zero(); }

  /// Polynomial degree when both nonzero coefficients are homogeneous of one degree.
  std::optional<int> pdeg() const {
    std::optional<int> d;
    for (const auto* c : {&c1_, &c2_}) {
      if (c->is_zero()) continue;
      auto e = c->degree();
      if (!e || (d && *d != *e)) return std::nullopt;
      d = e;
    }
    return d;
  }

  Derivation operator-() const { return {-c1_, -c2_}; }
  friend Derivation operator+(const Derivation& a, const Derivation& b) { return {a.c1_ + b.c1_, a.c2_ + b.c2_}; }
  friend Derivation operator-(const Derivation& a, const Derivation& b) { return {a.c1_ - b.c1_, a.c2_ - b.c2_}; }
  Derivation scaled(const K& s) const { return {c1_.scaled(s), c2_.scaled(s)}; }
  /// f * theta.
  friend Derivation operator*(const RatFn<K>& f, const Derivation& t) { return {f * t.c1_, f * t.c2_}; }
  friend bool operator==(const Derivation&, const Derivation&) = default;

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    if (!c1_.is_zero()) s += "[" + c1_.str() + "] d1";
    if (!c2_.is_zero()) s += (s.empty() ? "" : " + ") + ("[" + c2_.str() + "] d2");
    return s;
  }

 private:
  RatFn<K> c1_;
  RatFn<K> c2_;
};

template <Scalar K>
struct OneForm {
  RatFn<K> c1;
  RatFn<K> c2;
  friend bool operator==(const OneForm&, const OneForm&) = default;
};

inline Derivation<FieldScalar> lift(const Derivation<Rational>& t) { return {lift(t.c1()), lift(t.c2())}; }
inline const Derivation<FieldScalar>& lift(const Derivation<FieldScalar>& t) { return t; }

/// Rational coefficients back from field coefficients, or nullopt.
inline std::optional<Derivation<Rational>> to_rational(const Derivation<FieldScalar>& t) {
  auto n1 = to_rational(t.c1().num());
  auto n2 = to_rational(t.c2().num());
  if (!n1 || !n2) return std::nullopt;
  const auto& arr = t.arrangement();
  return Derivation<Rational>(RatFn<Rational>(arr, *n1, t.c1().den_q1(), t.c1().den_q2()),
                              RatFn<Rational>(arr, *n2, t.c2().den_q1(), t.c2().den_q2()));
}

template <Scalar K = Rational>
Derivation<K> partial(const Arrangement& arr, Var v) {
  RatFn<K> one = RatFn<K>::constant(arr, arr.one<K>());
  RatFn<K> zero(arr);
  return v == Var::X1 ? Derivation<K>(one, zero) : Derivation<K>(zero, one);
}

/// E = x1 d1 + x2 d2.
template <Scalar K = Rational>
Derivation<K> euler(const Arrangement& arr) {
  return {RatFn<K>(arr, Poly2<K>::variable(Var::X1, arr.one<K>())),
          RatFn<K>(arr, Poly2<K>::variable(Var::X2, arr.one<K>()))};
}

enum class Primitive { D, D1, D2 };

inline const char* primitive_name(Primitive p) {
  switch (p) {
    case Primitive::D: return "D";
    case Primitive::D1: return "D1";
    case Primitive::D2: return "D2";
  }
  return "?";
}

/// D = V/(h Q), D1 = V/(h Q1), D2 = V/(h Q2) with V = -x2 d1 + x1 d2; D(P2) = 1.
template <Scalar K = Rational>
Derivation<K> primitive(const Arrangement& arr, Primitive which) {
  const K inv_h = arr.one<K>() * Rational(1, arr.h());
  const int e1 = which == Primitive::D2 ? 0 : 1;
  const int e2 = which == Primitive::D1 ? 0 : 1;
  return {RatFn<K>(arr, Poly2<K>::monomial(-inv_h, 0, 1), e1, e2), RatFn<K>(arr, Poly2<K>::monomial(inv_h, 1, 0), e1, e2)};
}

/// df = d1 f dx1 + d2 f dx2.
template <Scalar K>
OneForm<K> differential(const RatFn<K>& f) {
  return {f.derivative(Var::X1), f.derivative(Var::X2)};
}

/// The Gram matrix is the identity, so I* transposes coefficients.
template <Scalar K>
Derivation<K> istar(const OneForm<K>& w) {
  return {w.c1, w.c2};
}
template <Scalar K>
OneForm<K> flat(const Derivation<K>& t) {
  return {t.c1(), t.c2()};
}

template <Scalar K>
RatFn<K> apply(const Derivation<K>& t, const RatFn<K>& f) {
  RatFn<K> out(f.arrangement());
  if (!t.c1().is_zero()) out += t.c1() * f.derivative(Var::X1);
  if (!t.c2().is_zero()) out += t.c2() * f.derivative(Var::X2);
  return out;
}
template <Scalar K>
RatFn<K> apply(const Derivation<K>& t, const Poly2<K>& f) {
  return apply(t, RatFn<K>(t.arrangement(), f));
}

/// (nabla_theta delta) has coefficients theta(delta.c_i).
template <Scalar K>
Derivation<K> connection(const Derivation<K>& theta, const Derivation<K>& delta) {
  return {apply(theta, delta.c1()), apply(theta, delta.c2())};
}

/// Push-forward by an orthogonal w: (w theta)(x) = w theta(w^T x).
template <Scalar K>
Derivation<K> w_action(const Matrix2<K>& w, const Derivation<K>& t) {
  if (!w.is_orthogonal()) throw std::domain_error("w_action: matrix is not orthogonal");
  Matrix2<K> wt = w.transpose();
  RatFn<K> a = t.c1().substitute(wt), b = t.c2().substitute(wt);
  return {a.scaled(w.a) + b.scaled(w.b), a.scaled(w.c) + b.scaled(w.d)};
}

/// Outcome of a membership test; on failure, the first offending line in index order.
struct MembershipResult {
  bool ok = true;
  int line = -1;
  int deficit = 0;
  bool pole_transverse = false;  // failure of the no-pole condition on theta(beta_j)

  explicit operator bool() const { return ok; }
  std::string str() const {
    if (ok) return "member";
    if (pole_transverse) {
      return "pole of order " + std::to_string(deficit) + " transverse to line " + std::to_string(line);
    }
    return "line " + std::to_string(line) + " (orbit " + std::to_string(Arrangement::orbit_of(line)) +
           ") short by " + std::to_string(deficit);
  }
};

/// theta in D(A, m): for every line, theta(alpha_j) vanishes to order >= m(orbit of j)
/// and theta(beta_j) has no pole along alpha_j.
template <Scalar K>
MembershipResult membership(const Derivation<K>& t, const Multiplicity& m) {
  const auto& arr = t.arrangement();
  const int e1 = std::max(t.c1().den_q1(), t.c2().den_q1());
  const int e2 = std::max(t.c1().den_q2(), t.c2().den_q2());
  auto common_num = [&](const RatFn<K>& c) {
    Poly2<K> n = c.num();
    if (c.is_zero()) return Poly2<FieldScalar>();
    if (e1 > c.den_q1()) n = n * arr.template q_pow<K>(1, e1 - c.den_q1());
    if (e2 > c.den_q2()) n = n * arr.template q_pow<K>(2, e2 - c.den_q2());
    return Poly2<FieldScalar>(lift(n, arr.field()));
  };
  const Poly2<FieldScalar> n1 = common_num(t.c1()), n2 = common_num(t.c2());
  auto val = [&](const LinearForm<FieldScalar>& form, const LinearForm<FieldScalar>& along, int j) -> std::optional<int> {
    Poly2<FieldScalar> f = n1.scaled(form.a) + n2.scaled(form.b);
    auto v = valuation_along(f, along);
    if (!v) return std::nullopt;
    return *v - (Arrangement::orbit_of(j) == 1 ? e1 : e2);
  };
  for (int j = 0; j < arr.h(); ++j) {
    const auto& alpha = arr.lines()[j];
    const int need = Arrangement::orbit_of(j) == 1 ? m.a1 : m.a2;
    auto v = val(alpha, alpha, j);
    if (v && *v < need) return {false, j, need - *v, false};
    auto w = val(arr.normals()[j], alpha, j);
    if (w && *w < 0) return {false, j, -*w, true};
  }
  return {};
}

/// det [[theta1(x1), theta1(x2)], [theta2(x1), theta2(x2)]].
template <Scalar K>
RatFn<K> coefficient_det(const Derivation<K>& t1, const Derivation<K>& t2) {
  return t1.c1() * t2.c2() - t1.c2() * t2.c1();
}

template <Scalar K>
struct SaitoResult {
  bool ok = false;
  K scalar{};                                   // det = scalar * Q1^a1 Q2^a2
  std::optional<std::pair<int, int>> exponents;  // (pdeg theta1, pdeg theta2)
  std::string reason;
  explicit operator bool() const { return ok; }
};

/// Generalized Saito criterion: both in D(A, m) and det = c * Q1^a1 Q2^a2 with c != 0.
template <Scalar K>
SaitoResult<K> saito_check(const Derivation<K>& t1, const Derivation<K>& t2, const Multiplicity& m) {
  SaitoResult<K> out;
  auto d1 = t1.pdeg(), d2 = t2.pdeg();
  if (d1 && d2) out.exponents = std::make_pair(*d1, *d2);
  if (auto r = membership(t1, m); !r) {
    out.reason = "first derivation not in D(A, " + m.str() + "): " + r.str();
    return out;
  }
  if (auto r = membership(t2, m); !r) {
    out.reason = "second derivation not in D(A, " + m.str() + "): " + r.str();
    return out;
  }
  RatFn<K> ratio = coefficient_det(t1, t2).times_q_power(-m.a1, -m.a2);
  if (ratio.is_zero()) {
    out.reason = "coefficient determinant vanishes";
    return out;
  }
  if (!ratio.is_polynomial() || !ratio.num().is_constant()) {
    out.reason = "determinant / Q^k = " + ratio.str() + " is not a nonzero constant";
    return out;
  }
  out.scalar = ratio.num().some_coeff();
  out.ok = true;
  return out;
}

}  // namespace multideriv
