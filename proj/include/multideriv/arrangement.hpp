#pragma once

// The dihedral arrangement I2(h), h even: h lines through the origin in two orbits,
// the orbit polynomials Q1, Q2, the basic invariants P1, P2 and the group.

#include <multideriv/bipoly.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace multideriv {

/// Equivariant multiplicity: a1 on the orbit of x2 = 0, a2 on the other orbit.
struct Multiplicity {
  int a1 = 0;
  int a2 = 0;
  friend bool operator==(const Multiplicity&, const Multiplicity&) = default;
  Multiplicity operator-() const { return {-a1, -a2}; }
  std::string str() const { return "(" + std::to_string(a1) + ", " + std::to_string(a2) + ")"; }
};

template <Scalar K>
struct Invariants {
  Poly2<K> q1, q2, q, p1, p2;
};

class Arrangement {
 public:
  static constexpr int kDefaultMaxH = 30;

  /// Interned, fully checked arrangement for I2(h).
  static const Arrangement& build(int h, int max_h = kDefaultMaxH) {
    if (h < 4 || h % 2 != 0) {
      throw std::domain_error("h must be even and at least 4 (odd h forces a constant multiplicity), got " +
                              std::to_string(h));
    }
    if (h > max_h) throw std::domain_error("h = " + std::to_string(h) + " exceeds the cap " + std::to_string(max_h));
    static std::mutex mu;
    static std::map<int, std::unique_ptr<Arrangement>> registry;
    std::lock_guard lock(mu);
    auto& slot = registry[h];
    if (!slot) slot.reset(new Arrangement(h));
    return *slot;
  }

  int h() const { return h_; }
  int two_h() const { return 2 * h_; }
  /// Q(zeta_2h), which contains every cos(j pi/h) and sin(j pi/h).
  const CyclotomicField& field() const { return *field_; }

  /// alpha_j = -sin(j pi/h) x1 + cos(j pi/h) x2, j = 0..h-1.
  const std::vector<LinearForm<FieldScalar>>& lines() const { return lines_; }
  /// beta_j = cos(j pi/h) x1 + sin(j pi/h) x2, orthogonal to alpha_j.
  const std::vector<LinearForm<FieldScalar>>& normals() const { return normals_; }
  static int orbit_of(int j) { return j % 2 == 0 ? 1 : 2; }
  std::vector<int> orbit(int which) const {
    std::vector<int> out;
    for (int j = 0; j < h_; ++j) {
      if (orbit_of(j) == which) out.push_back(j);
    }
    return out;
  }

  template <Scalar K>
  const Invariants<K>& invariants() const {
    if constexpr (std::is_same_v<K, Rational>) {
      return inv_q_;
    } else {
      return inv_k_;
    }
  }
  const Poly2<Rational>& q1() const { return inv_q_.q1; }
  const Poly2<Rational>& q2() const { return inv_q_.q2; }
  const Poly2<Rational>& q() const { return inv_q_.q; }
  const Poly2<Rational>& p1() const { return inv_q_.p1; }
  const Poly2<Rational>& p2() const { return inv_q_.p2; }

  template <Scalar K>
  K one() const {
    if constexpr (std::is_same_v<K, Rational>) {
      return Rational(1);
    } else {
      return FieldScalar(*field_, Rational(1));
    }
  }
  template <Scalar K>
  K zero() const {
    if constexpr (std::is_same_v<K, Rational>) {
      return Rational();
    } else {
      return FieldScalar(*field_, Rational());
    }
  }

  /// Q1^k (which = 1) or Q2^k (which = 2), memoized.
  template <Scalar K>
  const Poly2<K>& q_pow(int which, int k) const {
    if (k < 0) throw std::domain_error("negative power of an orbit polynomial");
    std::lock_guard lock(cache_mu_);
    auto& cache = pow_cache<K>()[which - 1];
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    const Poly2<K>& base = which == 1 ? invariants<K>().q1 : invariants<K>().q2;
    Poly2<K> value = k == 0 ? Poly2<K>::constant(one<K>()) : base;
    // build on the largest cached power below k
    int have = k == 0 ? 0 : 1;
    for (auto jt = cache.begin(); jt != cache.end(); ++jt) {
      if (jt->first <= k && jt->first > have) {
        have = jt->first;
        value = jt->second;
      }
    }
    for (; have < k; ++have) value = value * base;
    return cache.emplace(k, std::move(value)).first->second;
  }

  /// Rotation by 2 pi / h.
  const Matrix2<FieldScalar>& rotation() const { return r_; }
  /// Reflection x2 -> -x2.
  const Matrix2<Rational>& reflection() const { return s_; }
  /// All 2h elements: r^k and r^k s for k = 0..h-1.
  const std::vector<Matrix2<FieldScalar>>& group() const { return group_; }

 private:
  explicit Arrangement(int h) : h_(h), field_(&CyclotomicField::get(2 * h)) {
    const int m = h / 2;
    // Im and Re of (x1 + i x2)^m, expanded binomially
    Rational binom(1);
    for (int k = 0; k <= m; ++k) {
      Rational sign((k / 2) % 2 == 0 ? 1 : -1);
      auto term = Poly2<Rational>::monomial(binom * sign, m - k, k);
      (k % 2 == 0 ? inv_q_.q2 : inv_q_.q1) += term;
      binom = binom * Rational(m - k, k + 1);
    }
    inv_q_.q = inv_q_.q1 * inv_q_.q2;
    inv_q_.p1 = (Poly2<Rational>::monomial(1, 2, 0) + Poly2<Rational>::monomial(1, 0, 2)).scaled(Rational(1, 2));
    inv_q_.p2 = inv_q_.q1 * inv_q_.q1;
    inv_k_ = {lift(inv_q_.q1, *field_), lift(inv_q_.q2, *field_), lift(inv_q_.q, *field_), lift(inv_q_.p1, *field_),
              lift(inv_q_.p2, *field_)};

    for (int j = 0; j < h; ++j) {
      auto c = trig_constant(Trig::Cos, j, h);
      auto s = trig_constant(Trig::Sin, j, h);
      lines_.emplace_back(-s, c);
      normals_.emplace_back(c, s);
    }
    auto c2 = trig_constant(Trig::Cos, 2, h), s2 = trig_constant(Trig::Sin, 2, h);
    r_ = {c2, -s2, s2, c2};
    s_ = {1, 0, 0, -1};
    auto ident = Matrix2<FieldScalar>::identity(one<FieldScalar>());
    auto power = ident;
    auto refl = lift(s_, *field_);
    for (int k = 0; k < h; ++k) {
      group_.push_back(power);
      group_.push_back(power * refl);
      power = power * r_;
    }
    check_invariants(ident, power, refl);
  }

  void check_invariants(const Matrix2<FieldScalar>& ident, const Matrix2<FieldScalar>& r_to_h,
                        const Matrix2<FieldScalar>& refl) const {
    auto fail = [&](const std::string& what) {
      throw std::logic_error("arrangement h=" + std::to_string(h_) + ": " + what);
    };
    if (orbit(1).size() != static_cast<std::size_t>(h_ / 2) || orbit(2).size() != static_cast<std::size_t>(h_ / 2)) {
      fail("orbit sizes");
    }
    if (inv_q_.q.homogeneous_degree() != h_ || inv_q_.p2.homogeneous_degree() != h_) fail("degrees of Q, P2");
    for (int j = 0; j < h_; ++j) {
      int want1 = orbit_of(j) == 1 ? 1 : 0;
      if (valuation_along(inv_k_.q1, lines_[j]) != want1 || valuation_along(inv_k_.q2, lines_[j]) != 1 - want1) {
        fail("valuation census of Q1, Q2 on line " + std::to_string(j));
      }
    }
    // <r, s> has order 2h: r^h = 1 with no smaller power, s^2 = 1, s r s = r^-1
    if (!(r_to_h == ident) || !(refl * refl == ident) || !(refl * r_ * refl * r_ == ident)) fail("group relations");
    for (int k = 1; k < h_; ++k) {
      if (group_[2 * k] == ident) fail("rotation order");
    }
    for (const auto& w : {r_, refl}) {
      if (!w.is_orthogonal()) fail("generator not orthogonal");
      for (int j = 0; j < h_; ++j) {
        if (image_line(w, j) < 0 || orbit_of(image_line(w, j)) != orbit_of(j)) fail("generator permutes lines");
      }
    }
  }

  /// Index of the line w(ker alpha_j), or -1.
  int image_line(const Matrix2<FieldScalar>& w, int j) const {
    // the form alpha_j o w^{-1} has coefficient row (a, b) w^T
    const auto& l = lines_[j];
    FieldScalar a = l.a * w.a + l.b * w.b;
    FieldScalar b = l.a * w.c + l.b * w.d;
    for (int k = 0; k < h_; ++k) {
      if ((a * lines_[k].b - b * lines_[k].a).is_zero()) return k;
    }
    return -1;
  }

  template <Scalar K>
  std::map<int, Poly2<K>>* pow_cache() const {
    if constexpr (std::is_same_v<K, Rational>) {
      return pow_q_;
    } else {
      return pow_k_;
    }
  }

  int h_;
  const CyclotomicField* field_;
  Invariants<Rational> inv_q_;
  Invariants<FieldScalar> inv_k_;
  std::vector<LinearForm<FieldScalar>> lines_;
  std::vector<LinearForm<FieldScalar>> normals_;
  Matrix2<FieldScalar> r_;
  Matrix2<Rational> s_;
  std::vector<Matrix2<FieldScalar>> group_;

  mutable std::mutex cache_mu_;
  mutable std::map<int, Poly2<Rational>> pow_q_[2];
  mutable std::map<int, Poly2<FieldScalar>> pow_k_[2];
};

}  // namespace multideriv
