#pragma once

// Dense univariate polynomials over the rationals.

#include <multideriv/rational.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace multideriv {

class UPoly {
 public:
  UPoly() = default;
  /// Coefficients listed from the constant term upwards.
  explicit UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static UPoly monomial(const Rational& c, std::size_t deg) {
    std::vector<Rational> v(deg + 1);
    v[deg] = c;
    return UPoly(std::move(v));
  }

  bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(); }
  const Rational& leading() const { return c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back().is_one(); }

  friend UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < a.c_.size(); ++k) v[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) v[k] += b.c_[k];
    return UPoly(std::move(v));
  }
  friend UPoly operator-(const UPoly& a, const UPoly& b) {
    std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < a.c_.size(); ++k) v[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) v[k] -= b.c_[k];
    return UPoly(std::move(v));
  }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> v(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    }
    return UPoly(std::move(v));
  }
  friend UPoly operator*(const Rational& s, const UPoly& a) {
    std::vector<Rational> v(a.c_);
    for (auto& x : v) x *= s;
    return UPoly(std::move(v));
  }
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  /// Quotient and remainder; divisor must be nonzero.
  static std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    if (a.degree() < b.degree()) return {UPoly(), a};
    std::vector<Rational> r(a.c_);
    std::vector<Rational> q(a.c_.size() - b.c_.size() + 1);
    Rational lead_inv = b.leading().inverse();
    for (int k = a.degree() - b.degree(); k >= 0; --k) {
      Rational f = r[k + b.degree()] * lead_inv;
      q[k] = f;
      if (f.is_zero()) continue;
      for (int j = 0; j <= b.degree(); ++j) r[k + j] -= f * b.c_[j];
    }
    r.resize(b.c_.size() - 1);
    return {UPoly(std::move(q)), UPoly(std::move(r))};
  }

  Rational evaluate(const Rational& t) const {
    Rational acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  std::string str(const std::string& var = "t") const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
      const Rational& c = c_[k];
      if (c.is_zero()) continue;
      Rational mag = c.sign() < 0 ? -c : c;
      os << (c.sign() < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
      if (!mag.is_one() || k == 0) os << mag.short_str();
      if (k > 0) os << (mag.is_one() ? "" : "*") << var << (k > 1 ? "^" + std::to_string(k) : "");
      first = false;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<Rational> c_;
};

/// The n-th cyclotomic polynomial, by dividing t^n - 1 by every Phi_d with d | n, d < n.
inline UPoly cyclotomic_poly(int n) {
  if (n < 1) throw std::domain_error("cyclotomic_poly: n must be positive");
  UPoly num = UPoly::monomial(1, n) - UPoly::monomial(1, 0);
  for (int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    auto [q, r] = UPoly::divmod(num, cyclotomic_poly(d));
    if (!r.is_zero()) throw std::logic_error("cyclotomic_poly: inexact division");
    num = std::move(q);
  }
  return num;
}

/// Euler's totient.
inline int euler_phi(int n) {
  int result = n;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

}  // namespace multideriv
