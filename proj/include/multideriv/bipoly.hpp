#pragma once

// Sparse polynomials in x1, x2 over a Scalar field, plus linear forms and 2x2 matrices.

#include <multideriv/scalar.hpp>

#include <algorithm>
#include <compare>
#include <concepts>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace multideriv {

/// x1^i * x2^j. Ordered lexicographically with x1 > x2.
struct Monomial {
  int i = 0;
  int j = 0;
  int degree() const { return i + j; }
  bool divides(const Monomial& o) const { return i <= o.i && j <= o.j; }
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

enum class Var { X1, X2 };

template <Scalar K>
class Poly2 {
 public:
  // leading (lex-largest) term first
  using TermMap = std::map<Monomial, K, std::greater<>>;

  Poly2() = default;

  static Poly2 constant(const K& c) { return monomial(c, 0, 0); }
  static Poly2 monomial(const K& c, int i, int j) {
    if (i < 0 || j < 0) throw std::domain_error("negative exponent in polynomial");
    Poly2 p;
    if (!c.is_zero()) p.t_.emplace(Monomial{i, j}, c);
    return p;
  }
  /// The coordinate function x1 or x2 with coefficient `one`.
  static Poly2 variable(Var v, const K& one) { return v == Var::X1 ? monomial(one, 1, 0) : monomial(one, 0, 1); }

  const TermMap& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }

  K coeff(const Monomial& m) const {
    auto it = t_.find(m);
    return it == t_.end() ? K{} : it->second;
  }
  std::pair<Monomial, K> leading() const {
    if (t_.empty()) throw std::domain_error("leading term of the zero polynomial");
    return *t_.begin();
  }
  /// Any stored coefficient; used as a field prototype.
  const K& some_coeff() const { return t_.begin()->second; }

  /// Total degree; -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (const auto& [m, c] : t_) d = std::max(d, m.degree());
    return d;
  }
  std::optional<int> homogeneous_degree() const {
    if (t_.empty()) return std::nullopt;
    int d = t_.begin()->first.degree();
    for (const auto& [m, c] : t_) {
      if (m.degree() != d) return std::nullopt;
    }
    return d;
  }
  bool is_homogeneous() const { return homogeneous_degree().has_value(); }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first == Monomial{0, 0}); }

  std::map<int, Poly2> homogeneous_components() const {
    std::map<int, Poly2> out;
    for (const auto& [m, c] : t_) out[m.degree()].t_.emplace(m, c);
    return out;
  }

  Poly2 operator-() const {
    Poly2 r(*this);
    for (auto& [m, c] : r.t_) c = -c;
    return r;
  }
  Poly2& operator+=(const Poly2& o) {
    for (const auto& [m, c] : o.t_) add_term(m, c);
    return *this;
  }
  Poly2& operator-=(const Poly2& o) {
    for (const auto& [m, c] : o.t_) add_term(m, -c);
    return *this;
  }
  friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
  friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }

  friend Poly2 operator*(const Poly2& a, const Poly2& b) {
    Poly2 r;
    if (a.is_zero() || b.is_zero()) return r;
    for (const auto& [ma, ca] : a.t_) {
      for (const auto& [mb, cb] : b.t_) r.add_term(Monomial{ma.i + mb.i, ma.j + mb.j}, ca * cb);
    }
    return r;
  }
  Poly2& operator*=(const Poly2& o) { return *this = *this * o; }

  Poly2 scaled(const K& s) const {
    if (s.is_zero()) return {};
    Poly2 r(*this);
    for (auto& [m, c] : r.t_) c = c * s;
    return r;
  }
  Poly2 scaled(const Rational& q) const
    requires(!std::same_as<K, Rational>)
  {
    if (q.is_zero()) return {};
    Poly2 r(*this);
    for (auto& [m, c] : r.t_) c = c * q;
    return r;
  }
  /// Multiplication by x1^di * x2^dj.
  Poly2 shifted(int di, int dj) const {
    Poly2 r;
    for (const auto& [m, c] : t_) r.t_.emplace_hint(r.t_.end(), Monomial{m.i + di, m.j + dj}, c);
    return r;
  }

  Poly2 pow(int n) const {
    if (n < 0) throw std::domain_error("negative polynomial power");
    if (n == 0) {
      if (t_.empty()) throw std::domain_error("0^0 without a field prototype");
      return constant(one_like(some_coeff()));
    }
    Poly2 result = *this;
    for (int k = 1; k < n; ++k) result = result * *this;
    return result;
  }

  Poly2 derivative(Var v) const {
    Poly2 r;
    for (const auto& [m, c] : t_) {
      int e = v == Var::X1 ? m.i : m.j;
      if (e == 0) continue;
      Monomial nm = v == Var::X1 ? Monomial{m.i - 1, m.j} : Monomial{m.i, m.j - 1};
      r.add_term(nm, c * Rational(e));
    }
    return r;
  }

  /// Exact quotient by `d`, or nullopt when `d` does not divide. Division by a single
  /// polynomial in lex order leaves a zero remainder exactly when it divides.
  std::optional<Poly2> exact_divide(const Poly2& d) const {
    if (d.is_zero()) throw std::domain_error("polynomial division by zero");
    Poly2 rem(*this);
    Poly2 quot;
    auto [dm, dc] = d.leading();
    K dinv = dc.inverse();
    while (!rem.is_zero()) {
      auto [rm, rc] = rem.leading();
      if (!dm.divides(rm)) return std::nullopt;
      Monomial qm{rm.i - dm.i, rm.j - dm.j};
      K qc = rc * dinv;
      quot.add_term(qm, qc);
      for (const auto& [m, c] : d.t_) rem.add_term(Monomial{m.i + qm.i, m.j + qm.j}, -(c * qc));
    }
    return quot;
  }

  friend bool operator==(const Poly2& a, const Poly2& b) { return a.t_ == b.t_; }

  std::string str() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : t_) {
      bool neg = !is_compound(c) && sign_of_rational_part(c) < 0;
      K mag = neg ? -c : c;
      os << (neg ? (first ? "-" : " - ") : (first ? "" : " + "));
      std::string mono = monomial_str(m);
      if (mono.empty()) {
        os << (is_compound(mag) ? "(" + display(mag) + ")" : display(mag));
      } else {
        if (!mag.is_one()) os << (is_compound(mag) ? "(" + display(mag) + ")" : display(mag)) << "*";
        os << mono;
      }
      first = false;
    }
    return os.str();
  }

  void add_term(const Monomial& m, const K& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = t_.try_emplace(m, c);
    if (inserted) return;
    it->second = it->second + c;
    if (it->second.is_zero()) t_.erase(it);
  }

 private:
  static std::string monomial_str(const Monomial& m) {
    std::string s;
    auto part = [&](const char* v, int e) {
      if (e == 0) return;
      if (!s.empty()) s += "*";
      s += v;
      if (e > 1) s += "^" + std::to_string(e);
    };
    part("x1", m.i);
    part("x2", m.j);
    return s;
  }

  TermMap t_;
};

inline Poly2<FieldScalar> lift(const Poly2<Rational>& p, const CyclotomicField& f) {
  Poly2<FieldScalar> r;
  for (const auto& [m, c] : p.terms()) r.add_term(m, FieldScalar(f, c));
  return r;
}
inline const Poly2<FieldScalar>& lift(const Poly2<FieldScalar>& p, const CyclotomicField&) { return p; }

/// Rational coefficients back from field coefficients; nullopt if some coefficient is irrational.
inline std::optional<Poly2<Rational>> to_rational(const Poly2<FieldScalar>& p) {
  Poly2<Rational> r;
  for (const auto& [m, c] : p.terms()) {
    if (!c.is_rational()) return std::nullopt;
    r.add_term(m, c.rational_part());
  }
  return r;
}

/// a*x1 + b*x2 with (a, b) != (0, 0).
template <Scalar K>
struct LinearForm {
  K a;
  K b;
  LinearForm(K a_, K b_) : a(std::move(a_)), b(std::move(b_)) {
    if (a.is_zero() && b.is_zero()) throw std::domain_error("zero linear form");
  }
  Poly2<K> poly() const {
    Poly2<K> p;
    p.add_term({1, 0}, a);
    p.add_term({0, 1}, b);
    return p;
  }
};

/// Order of vanishing of p along the line a*x1 + b*x2 = 0; nullopt (infinity) for p = 0.
template <Scalar K>
std::optional<int> valuation_along(const Poly2<K>& p, const LinearForm<K>& alpha) {
  if (p.is_zero()) return std::nullopt;
  int best = std::numeric_limits<int>::max();
  for (const auto& [d, comp] : p.homogeneous_components()) {
    int v = 0;
    if (alpha.b.is_zero()) {
      v = std::numeric_limits<int>::max();
      for (const auto& [m, c] : comp.terms()) v = std::min(v, m.i);
    } else {
      // p(1, y) has a root of multiplicity v at y0 = -a/b
      K zero = zero_like(comp.some_coeff());
      std::vector<K> f(d + 1, zero);
      for (const auto& [m, c] : comp.terms()) f[m.j] = c;
      K y0 = -(alpha.a * alpha.b.inverse());
      while (f.size() > 1) {
        // synthetic division by (y - y0), highest coefficient first
        std::vector<K> q(f.size() - 1, zero);
        K acc = f.back();
        for (std::size_t k = f.size() - 1; k-- > 0;) {
          q[k] = acc;
          acc = f[k] + acc * y0;
        }
        if (!acc.is_zero()) break;
        f = std::move(q);
        ++v;
      }
    }
    best = std::min(best, v);
  }
  return best;
}

/// Row-major 2x2 matrix [[a, b], [c, d]].
template <Scalar K>
struct Matrix2 {
  K a, b, c, d;

  static Matrix2 identity(const K& one) {
    K z = zero_like(one);
    return {one, z, z, one};
  }
  K det() const { return a * d - b * c; }
  Matrix2 transpose() const { return {a, c, b, d}; }
  Matrix2 inverse() const {
    K dt = det();
    if (dt.is_zero()) throw std::domain_error("singular matrix");
    K inv = dt.inverse();
    return {d * inv, -(b * inv), -(c * inv), a * inv};
  }
  friend Matrix2 operator*(const Matrix2& x, const Matrix2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend bool operator==(const Matrix2&, const Matrix2&) = default;
  bool is_orthogonal() const {
    Matrix2 p = *this * transpose();
    return p.a.is_one() && p.d.is_one() && p.b.is_zero() && p.c.is_zero();
  }
};

inline Matrix2<FieldScalar> lift(const Matrix2<Rational>& m, const CyclotomicField& f) {
  return {FieldScalar(f, m.a), FieldScalar(f, m.b), FieldScalar(f, m.c), FieldScalar(f, m.d)};
}

namespace detail {

// dense homogeneous form: v[k] is the coefficient of x1^k x2^(deg-k)
template <Scalar K>
std::vector<K> mul_dense(const std::vector<K>& x, const std::vector<K>& y, const K& zero) {
  std::vector<K> r(x.size() + y.size() - 1, zero);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (!y[j].is_zero()) r[i + j] = r[i + j] + x[i] * y[j];
    }
  }
  return r;
}

}  // namespace detail

/// p composed with (x1, x2) -> M (x1, x2), i.e. x1 -> a x1 + b x2, x2 -> c x1 + d x2.
template <Scalar K>
Poly2<K> substitute_linear(const Poly2<K>& p, const Matrix2<K>& m) {
  if (m.det().is_zero()) throw std::domain_error("substitute_linear: singular matrix");
  Poly2<K> out;
  if (p.is_zero()) return out;
  const K zero = zero_like(p.some_coeff());
  const std::vector<K> l1{m.b, m.a};  // image of x1
  const std::vector<K> l2{m.d, m.c};  // image of x2
  for (const auto& [deg, comp] : p.homogeneous_components()) {
    std::vector<K> c(deg + 1, zero);
    for (const auto& [mono, v] : comp.terms()) c[mono.i] = v;
    // T_deg = c_deg; T_k = T_{k+1} * l1 + c_k * l2^(deg-k)
    std::vector<K> t{c[deg]};
    std::vector<K> l2pow{one_like(zero)};
    for (int k = deg - 1; k >= 0; --k) {
      l2pow = detail::mul_dense(l2pow, l2, zero);
      t = detail::mul_dense(t, l1, zero);
      if (!c[k].is_zero()) {
        for (std::size_t e = 0; e < l2pow.size(); ++e) t[e] = t[e] + c[k] * l2pow[e];
      }
    }
    for (int k = 0; k <= deg; ++k) out.add_term(Monomial{k, deg - k}, t[k]);
  }
  return out;
}

}  // namespace multideriv
