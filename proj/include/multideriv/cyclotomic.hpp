#pragma once

// The cyclotomic field Q(zeta_n) in the power basis of zeta = exp(2*pi*i/n).
// For the dihedral arrangement of h lines we use n = 2h, so zeta = exp(i*pi/h)
// and every cos(j*pi/h), sin(j*pi/h) and the imaginary unit are exact elements.

#include <multideriv/rational.hpp>
#include <multideriv/upoly.hpp>

#include <cmath>
#include <algorithm>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace multideriv {

class CyclotomicField {
 public:
  /// Interned instance for Q(zeta_order); lives for the whole program.
  static const CyclotomicField& get(int order) {
    if (order < 1) throw std::domain_error("cyclotomic field order must be positive");
    static std::mutex mu;
    static std::map<int, std::unique_ptr<CyclotomicField>> registry;
    std::lock_guard lock(mu);
    auto& slot = registry[order];
    if (!slot) slot.reset(new CyclotomicField(order));
    return *slot;
  }

  int order() const { return order_; }
  int degree() const { return degree_; }
  const UPoly& modulus() const { return modulus_; }

  /// Power-basis coordinates of zeta^k for any k >= 0.
  const std::vector<Rational>& power(int k) const {
    return powers_[k < static_cast<int>(powers_.size()) ? k : k % order_];
  }

 private:
  explicit CyclotomicField(int order)
      : order_(order), degree_(euler_phi(order)), modulus_(cyclotomic_poly(order)) {
    // zeta^k for k < degree is a basis vector; higher powers are reduced once here.
    const int top_power = std::max(order_ - 1, 2 * degree_ - 2);
    powers_.reserve(top_power + 1);
    for (int k = 0; k < degree_; ++k) {
      std::vector<Rational> e(degree_);
      e[k] = 1;
      powers_.push_back(std::move(e));
    }
    for (int k = degree_; k <= top_power; ++k) {
      const auto& prev = powers_.back();
      std::vector<Rational> next(degree_);
      // multiply prev by zeta, then replace zeta^degree using the monic modulus
      Rational top = prev[degree_ - 1];
      for (int m = degree_ - 1; m > 0; --m) next[m] = prev[m - 1];
      if (!top.is_zero()) {
        for (int m = 0; m < degree_; ++m) next[m] -= top * modulus_.coeff(m);
      }
      powers_.push_back(std::move(next));
    }
  }

  int order_;
  int degree_;
  UPoly modulus_;
  std::vector<std::vector<Rational>> powers_;
};

class FieldScalar {
 public:
  /// A zero not yet attached to any field; it adopts the field of whatever it meets.
  FieldScalar() = default;
  FieldScalar(const CyclotomicField& f, const Rational& q) : field_(&f), c_(f.degree()) { c_[0] = q; }
  /// Arbitrary-length coefficient list in powers of zeta, reduced modulo the cyclotomic polynomial.
  FieldScalar(const CyclotomicField& f, const std::vector<Rational>& coeffs) : field_(&f), c_(f.degree()) {
    reduce_into(coeffs);
  }

  static FieldScalar zeta_power(const CyclotomicField& f, long k) {
    long n = f.order();
    long e = ((k % n) + n) % n;
    std::vector<Rational> v(e + 1);
    v[e] = 1;
    return FieldScalar(f, v);
  }

  const CyclotomicField* field() const { return field_; }
  /// The integer n identifying Q(zeta_n); 0 for a detached zero.
  int field_tag() const { return field_ ? field_->order() : 0; }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const {
    for (const auto& x : c_) {
      if (!x.is_zero()) return false;
    }
    return true;
  }
  bool is_rational() const {
    for (std::size_t k = 1; k < c_.size(); ++k) {
      if (!c_[k].is_zero()) return false;
    }
    return true;
  }
  bool is_one() const { return is_rational() && !c_.empty() && c_[0].is_one(); }
  Rational rational_part() const { return c_.empty() ? Rational() : c_[0]; }
  Rational to_rational() const {
    if (!is_rational()) throw std::domain_error("field element is not rational");
    return rational_part();
  }

  /// Pivot cost: nonzero coordinates first, bit size second.
  std::pair<int, std::size_t> cost() const {
    int nz = 0;
    std::size_t bits = 0;
    for (const auto& x : c_) {
      if (x.is_zero()) continue;
      ++nz;
      bits += x.bits();
    }
    return {nz, bits};
  }

  FieldScalar operator-() const {
    FieldScalar r(*this);
    for (auto& x : r.c_) x = -x;
    return r;
  }
  FieldScalar& operator+=(const FieldScalar& o) {
    adopt(o);
    if (o.field_) {
      for (std::size_t k = 0; k < c_.size(); ++k) {
        if (!o.c_[k].is_zero()) c_[k] += o.c_[k];
      }
    }
    return *this;
  }
  FieldScalar& operator-=(const FieldScalar& o) {
    adopt(o);
    if (o.field_) {
      for (std::size_t k = 0; k < c_.size(); ++k) {
        if (!o.c_[k].is_zero()) c_[k] -= o.c_[k];
      }
    }
    return *this;
  }
  FieldScalar& operator*=(const Rational& q) {
    for (auto& x : c_) {
      if (!x.is_zero()) x *= q;
    }
    return *this;
  }
  FieldScalar& operator*=(const FieldScalar& o) {
    adopt(o);
    if (!field_) return *this;
    if (!o.field_) {
      for (auto& x : c_) x = 0;
      return *this;
    }
    if (o.is_rational()) {
      Rational q = o.c_[0];
      return *this *= q;
    }
    if (is_rational()) {
      Rational q = c_[0];
      c_ = o.c_;
      return *this *= q;
    }
    const int n = field_->degree();
    std::vector<Rational> prod(2 * n - 1);
    for (int i = 0; i < n; ++i) {
      if (c_[i].is_zero()) continue;
      for (int j = 0; j < n; ++j) {
        if (!o.c_[j].is_zero()) prod[i + j] += c_[i] * o.c_[j];
      }
    }
    reduce_into(prod);
    return *this;
  }

  friend FieldScalar operator+(FieldScalar a, const FieldScalar& b) { return a += b; }
  friend FieldScalar operator-(FieldScalar a, const FieldScalar& b) { return a -= b; }
  friend FieldScalar operator*(FieldScalar a, const FieldScalar& b) { return a *= b; }
  friend FieldScalar operator*(FieldScalar a, const Rational& q) { return a *= q; }
  friend FieldScalar operator*(const Rational& q, FieldScalar a) { return a *= q; }

  /// Multiplicative inverse via the extended Euclidean algorithm against the modulus.
  FieldScalar inverse() const {
    if (is_zero()) throw std::domain_error("division by zero in cyclotomic field");
    if (is_rational()) return FieldScalar(*field_, c_[0].inverse());
    // invariant: r0 = s0 * a (mod modulus), r1 = s1 * a (mod modulus)
    UPoly r0 = field_->modulus(), r1{c_};
    UPoly s0, s1 = UPoly::monomial(1, 0);
    while (r1.degree() > 0) {
      auto [q, r] = UPoly::divmod(r0, r1);
      UPoly s = s0 - q * s1;
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s);
    }
    if (r1.is_zero()) throw std::logic_error("cyclotomic modulus is not irreducible");
    return FieldScalar(*field_, (r1.leading().inverse() * s1).coeffs());
  }
  friend FieldScalar operator/(const FieldScalar& a, const FieldScalar& b) { return a * b.inverse(); }

  /// Complex conjugation zeta -> zeta^{-1}.
  FieldScalar conj() const {
    if (!field_) return *this;
    const int n = field_->order();
    std::vector<Rational> v(n);
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (!c_[k].is_zero()) v[(n - static_cast<int>(k)) % n] += c_[k];
    }
    return FieldScalar(*field_, v);
  }

  /// Numeric embedding zeta -> exp(2*pi*i/n); for display and sanity checks only.
  std::complex<double> to_complex() const {
    if (!field_) return {0.0, 0.0};
    std::complex<double> acc{0.0, 0.0};
    const double angle = 2.0 * std::numbers::pi / field_->order();
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (c_[k].is_zero()) continue;
      acc += c_[k].to_double() * std::polar(1.0, angle * static_cast<double>(k));
    }
    return acc;
  }

  friend bool operator==(const FieldScalar& a, const FieldScalar& b) {
    if (!a.field_ || !b.field_) return a.is_zero() && b.is_zero();
    if (a.field_ != b.field_) return false;
    return a.c_ == b.c_;
  }

  /// Human-readable form in powers of z = zeta.
  std::string str() const {
    if (is_zero()) return "0";
    if (is_rational()) return c_[0].short_str();
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < c_.size(); ++k) {
      const Rational& c = c_[k];
      if (c.is_zero()) continue;
      Rational mag = c.sign() < 0 ? -c : c;
      os << (c.sign() < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
      if (k == 0) {
        os << mag.short_str();
      } else {
        if (!mag.is_one()) os << mag.short_str() << "*";
        os << "z" << (k > 1 ? "^" + std::to_string(k) : "");
      }
      first = false;
    }
    return os.str();
  }

 private:
  void adopt(const FieldScalar& o) {
    if (!o.field_) return;
    if (!field_) {
      field_ = o.field_;
      c_.assign(field_->degree(), Rational());
      return;
    }
    if (field_ != o.field_) {
      throw std::domain_error("field mismatch: Q(zeta_" + std::to_string(field_->order()) + ") vs Q(zeta_" +
                              std::to_string(o.field_->order()) + ")");
    }
  }

  void reduce_into(const std::vector<Rational>& v) {
    const int n = field_->degree();
    std::vector<Rational> out(n);
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k].is_zero()) continue;
      if (static_cast<int>(k) < n) {
        out[k] += v[k];
        continue;
      }
      const auto& p = field_->power(static_cast<int>(k));
      for (int m = 0; m < n; ++m) {
        if (!p[m].is_zero()) out[m] += v[k] * p[m];
      }
    }
    c_ = std::move(out);
  }

  const CyclotomicField* field_ = nullptr;
  std::vector<Rational> c_;
};

enum class Trig { Cos, Sin };

/// cos(j*pi/h) or sin(j*pi/h) as exact elements of Q(zeta_{2h}).
inline FieldScalar trig_constant(Trig kind, long j, int h) {
  if (h < 1) throw std::domain_error("trig_constant: h must be positive");
  const auto& f = CyclotomicField::get(2 * h);
  FieldScalar zp = FieldScalar::zeta_power(f, j);
  FieldScalar zm = FieldScalar::zeta_power(f, -j);
  if (kind == Trig::Cos) return (zp + zm) * Rational(1, 2);
  // the imaginary unit zeta^{h/2} lies in Q(zeta_{2h}) only for even h
  if (h % 2 != 0) throw std::domain_error("trig_constant: sin requires even h");
  FieldScalar i = FieldScalar::zeta_power(f, h / 2);
  // 1/(2i) = -i/2
  return (zp - zm) * (-i) * Rational(1, 2);
}

}  // namespace multideriv
