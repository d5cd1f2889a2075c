#pragma once

// Rational functions num / (Q1^e1 Q2^e2): poles only along the arrangement lines.

#include <multideriv/arrangement.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>

namespace multideriv {

template <Scalar K>
class RatFn {
 public:
  RatFn() = default;
  explicit RatFn(const Arrangement& arr) : arr_(&arr) {}
  /// num / (Q1^e1 Q2^e2), reduced: Q_i is cancelled while it divides the numerator.
  RatFn(const Arrangement& arr, Poly2<K> num, int e1 = 0, int e2 = 0) : arr_(&arr), num_(std::move(num)), e1_(e1), e2_(e2) {
    if (e1 < 0 || e2 < 0) throw std::domain_error("negative denominator exponent");
    normalize();
  }

  static RatFn constant(const Arrangement& arr, const K& c) { return RatFn(arr, Poly2<K>::constant(c)); }

  const Arrangement& arrangement() const {
    if (!arr_) throw std::logic_error("RatFn without an arrangement");
    return *arr_;
  }
  const Arrangement* arrangement_ptr() const { return arr_; }
  const Poly2<K>& num() const { return num_; }
  int den_q1() const { return e1_; }
  int den_q2() const { return e2_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return e1_ == 0 && e2_ == 0; }

  /// Degree num - den for a homogeneous nonzero value.
  std::optional<int> degree() const {
    auto d = num_.homogeneous_degree();
    if (!d || !arr_) return std::nullopt;
    return *d - (e1_ + e2_) * (arr_->h() / 2);
  }

  /// Order of vanishing along line j (negative for a pole); nullopt for zero.
  std::optional<int> valuation(int j) const {
    if (num_.is_zero()) return std::nullopt;
    const auto& line = arr_->lines().at(j);
    std::optional<int> v;
    if constexpr (std::is_same_v<K, Rational>) {
      v = valuation_along(lift(num_, arr_->field()), line);
    } else {
      v = valuation_along(num_, line);
    }
    return *v - (Arrangement::orbit_of(j) == 1 ? e1_ : e2_);
  }

  RatFn operator-() const { return RatFn(*this, -num_); }

  friend RatFn operator+(const RatFn& a, const RatFn& b) { return combine(a, b, false); }
  friend RatFn operator-(const RatFn& a, const RatFn& b) { return combine(a, b, true); }
  RatFn& operator+=(const RatFn& o) { return *this = *this + o; }
  RatFn& operator-=(const RatFn& o) { return *this = *this - o; }

  friend RatFn operator*(const RatFn& a, const RatFn& b) {
    if (a.is_zero() || b.is_zero()) return RatFn(a.arr_ ? *a.arr_ : b.arrangement());
    return RatFn(a.common_arr(b), a.num_ * b.num_, a.e1_ + b.e1_, a.e2_ + b.e2_);
  }
  RatFn scaled(const K& c) const {
    RatFn r(*this);
    r.num_ = num_.scaled(c);
    if (r.num_.is_zero()) r.e1_ = r.e2_ = 0;
    return r;
  }
  /// Multiplication by Q1^k1 Q2^k2 for any integers.
  RatFn times_q_power(int k1, int k2) const {
    if (is_zero()) return *this;
    int new_e1 = e1_ - k1, new_e2 = e2_ - k2;
    Poly2<K> num = num_;
    if (new_e1 < 0) {
      num = num * arr_->q_pow<K>(1, -new_e1);
      new_e1 = 0;
    }
    if (new_e2 < 0) {
      num = num * arr_->q_pow<K>(2, -new_e2);
      new_e2 = 0;
    }
    return RatFn(*arr_, std::move(num), new_e1, new_e2);
  }

  /// Partial derivative; the quotient rule with d(Q_i^e) = e Q_i^(e-1) dQ_i.
  RatFn derivative(Var v) const {
    if (is_zero()) return *this;
    const auto& inv = arr_->invariants<K>();
    const int b1 = e1_ > 0 ? 1 : 0, b2 = e2_ > 0 ? 1 : 0;
    Poly2<K> out = num_.derivative(v);
    if (b1) out = out * inv.q1;
    if (b2) out = out * inv.q2;
    if (e1_ > 0) {
      Poly2<K> t = num_ * inv.q1.derivative(v);
      if (b2) t = t * inv.q2;
      out -= t.scaled(Rational(e1_));
    }
    if (e2_ > 0) {
      Poly2<K> t = num_ * inv.q2.derivative(v);
      if (b1) t = t * inv.q1;
      out -= t.scaled(Rational(e2_));
    }
    return RatFn(*arr_, std::move(out), e1_ + b1, e2_ + b2);
  }

  /// The value composed with x -> M x; Q_i o M must be +-Q_i.
  RatFn substitute(const Matrix2<K>& m) const {
    if (is_zero()) return *this;
    Poly2<K> num = substitute_linear(num_, m);
    int sign = 1;
    if (e1_ % 2 != 0) sign *= orbit_sign(1, m);
    if (e2_ % 2 != 0) sign *= orbit_sign(2, m);
    if (sign < 0) num = -num;
    return RatFn(*arr_, std::move(num), e1_, e2_);
  }

  /// +1 or -1 with Q_which o M = sign * Q_which; domain error otherwise.
  int orbit_sign(int which, const Matrix2<K>& m) const {
    const auto& q = which == 1 ? arr_->invariants<K>().q1 : arr_->invariants<K>().q2;
    Poly2<K> image = substitute_linear(q, m);
    if (image == q) return 1;
    if (image == -q) return -1;
    throw std::domain_error("linear map does not preserve the orbit polynomial Q" + std::to_string(which));
  }

  friend bool operator==(const RatFn& a, const RatFn& b) {
    return a.num_ == b.num_ && a.e1_ == b.e1_ && a.e2_ == b.e2_;
  }

  std::string str() const {
    std::string n = num_.str();
    if (is_polynomial()) return n;
    std::string d;
    auto part = [&](const char* q, int e) {
      if (e == 0) return;
      if (!d.empty()) d += "*";
      d += q;
      if (e > 1) d += "^" + std::to_string(e);
    };
    part("Q1", e1_);
    part("Q2", e2_);
    return "(" + n + ")/(" + d + ")";
  }

 private:
  RatFn(const RatFn& shape, Poly2<K> num) : arr_(shape.arr_), num_(std::move(num)), e1_(shape.e1_), e2_(shape.e2_) {}

  const Arrangement& common_arr(const RatFn& o) const {
    if (arr_ && o.arr_ && arr_ != o.arr_) throw std::domain_error("rational functions over different arrangements");
    return arr_ ? *arr_ : o.arrangement();
  }

  static RatFn combine(const RatFn& a, const RatFn& b, bool subtract) {
    const Arrangement& arr = a.common_arr(b);
    if (b.is_zero()) return a.arr_ ? a : RatFn(arr);
    if (a.is_zero()) return subtract ? -b : b;
    const int e1 = std::max(a.e1_, b.e1_), e2 = std::max(a.e2_, b.e2_);
    auto lifted = [&](const RatFn& x) {
      Poly2<K> n = x.num_;
      if (e1 > x.e1_) n = n * arr.q_pow<K>(1, e1 - x.e1_);
      if (e2 > x.e2_) n = n * arr.q_pow<K>(2, e2 - x.e2_);
      return n;
    };
    Poly2<K> n = lifted(a);
    if (subtract) {
      n -= lifted(b);
    } else {
      n += lifted(b);
    }
    return RatFn(arr, std::move(n), e1, e2);
  }

  void normalize() {
    if (num_.is_zero()) {
      e1_ = e2_ = 0;
      return;
    }
    if (!arr_) throw std::logic_error("RatFn without an arrangement");
    const auto& inv = arr_->invariants<K>();
    while (e1_ > 0) {
      auto q = num_.exact_divide(inv.q1);
      if (!q) break;
      num_ = std::move(*q);
      --e1_;
    }
    while (e2_ > 0) {
      auto q = num_.exact_divide(inv.q2);
      if (!q) break;
      num_ = std::move(*q);
      --e2_;
    }
  }

  const Arrangement* arr_ = nullptr;
  Poly2<K> num_;
  int e1_ = 0;
  int e2_ = 0;
};

inline RatFn<FieldScalar> lift(const RatFn<Rational>& f) {
  const auto& arr = f.arrangement();
  return RatFn<FieldScalar>(arr, lift(f.num(), arr.field()), f.den_q1(), f.den_q2());
}
inline const RatFn<FieldScalar>& lift(const RatFn<FieldScalar>& f) { return f; }

/// Q1^a1 Q2^a2 with negative exponents in the denominator.
template <Scalar K = Rational>
RatFn<K> q_power(const Arrangement& arr, const Multiplicity& m) {
  Poly2<K> num = Poly2<K>::constant(arr.one<K>());
  if (m.a1 > 0) num = num * arr.q_pow<K>(1, m.a1);
  if (m.a2 > 0) num = num * arr.q_pow<K>(2, m.a2);
  return RatFn<K>(arr, std::move(num), std::max(0, -m.a1), std::max(0, -m.a2));
}

}  // namespace multideriv
