#pragma once

// Powers of the connection along D, D1, D2, inversion of nabla_D by an ansatz with
// W-invariance constraints, and the universal derivations E1^(s,t), E2^(s,t).

#include <multideriv/derivation.hpp>
#include <multideriv/linsolve.hpp>

#include <array>
#include <cstdlib>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace multideriv {

/// A failure the theory says cannot happen: solver exhaustion, lost round trip, and so on.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Variant { E1, E2 };

inline const char* variant_name(Variant v) { return v == Variant::E1 ? "E1" : "E2"; }

/// E1^(s,t) = nabla_D^-t nabla_D1^(t-s) E and E2^(s,t) = nabla_D^-s nabla_D2^(s-t) E.
struct UniversalSpec {
  int s = 0;
  int t = 0;
  Variant variant = Variant::E1;

  int expected_pdeg(int h) const { return 1 + (s + t) * h / 2; }
  bool valid() const {
    if ((t - s) % 2 != 0) return false;
    return variant == Variant::E1 ? (t >= 0 && t >= s) : (s >= 0 && s >= t);
  }
  std::string str() const {
    return std::string(variant_name(variant)) + "^(" + std::to_string(s) + "," + std::to_string(t) + ")";
  }
  /// E1 when t >= max(s, 0), else E2 when s >= max(t, 0); nullopt if neither applies.
  static std::optional<UniversalSpec> choose(int s, int t) {
    if ((t - s) % 2 != 0) return std::nullopt;
    if (t >= std::max(s, 0)) return UniversalSpec{s, t, Variant::E1};
    if (s >= std::max(t, 0)) return UniversalSpec{s, t, Variant::E2};
    return std::nullopt;
  }
};

template <Scalar K>
Derivation<K> forward_power(Primitive which, int n, const Derivation<K>& theta) {
  if (n < 0) throw std::domain_error("forward_power: negative exponent");
  const auto d = primitive<K>(theta.arrangement(), which);
  Derivation<K> out = theta;
  for (int k = 0; k < n; ++k) out = connection(d, out);
  return out;
}

/// One entry per call of the nabla_D inversion.
struct InversionRecord {
  int pdeg_in = 0;
  int pdeg_out = 0;
  Multiplicity target;
  int m1 = 0;
  int m2 = 0;
  int attempts = 0;
  bool round_trip = false;
  bool pdeg_ok = false;
  bool member = false;
  bool ok() const { return round_trip && pdeg_ok && member; }
};

namespace detail {

// homogeneous polynomial of degree deg, c[k] = coefficient of x1^k x2^(deg-k)
struct Dense {
  int deg = 0;
  std::vector<Rational> c;
};

inline Dense to_dense(const Poly2<Rational>& p, int deg) {
  Dense d{deg, std::vector<Rational>(deg + 1)};
  for (const auto& [m, v] : p.terms()) {
    if (m.degree() != deg) throw std::logic_error("to_dense: inhomogeneous polynomial");
    d.c[m.i] = v;
  }
  return d;
}

inline Poly2<Rational> from_dense(const std::vector<Rational>& c, int deg) {
  Poly2<Rational> p;
  for (int k = 0; k <= deg; ++k) p.add_term({k, deg - k}, c[k]);
  return p;
}

/// Left-hand operator of the inversion equation, one unknown per monomial of degree n:
/// p -> V(p) A - p B.
inline LinSystem<Rational> inversion_system(int n, const Dense& a, const Dense& b, const Dense& rhs) {
  const int rows = n + a.deg + 1;
  if (a.deg != b.deg || rhs.deg + 1 != rows) throw std::logic_error("inversion_system: degree mismatch");
  LinSystem<Rational> sys(rows, n + 1, Rational());
  for (int k = 0; k <= n; ++k) {
    // V(x1^k x2^(n-k)) = -k x1^(k-1) x2^(n-k+1) + (n-k) x1^(k+1) x2^(n-k-1)
    for (int e = 0; e <= a.deg; ++e) {
      if (!a.c[e].is_zero()) {
        if (k > 0) sys.matrix[k - 1 + e][k] -= a.c[e] * Rational(k);
        if (k < n) sys.matrix[k + 1 + e][k] += a.c[e] * Rational(n - k);
      }
      if (!b.c[e].is_zero()) sys.matrix[k + e][k] -= b.c[e];
    }
  }
  sys.rhs = rhs.c;
  return sys;
}

}  // namespace detail

/// Shared cache of universal derivations for one arrangement, plus a log of every inversion.
class Engine {
 public:
  static constexpr int kDefaultPoleCap = 3;

  explicit Engine(const Arrangement& arr, int pole_cap = default_pole_cap()) : arr_(&arr), pole_cap_(pole_cap) {
    if (pole_cap < 0) throw std::domain_error("pole cap must be nonnegative");
  }

  /// MULTIDERIV_POLE_CAP if set, else 3.
  static int default_pole_cap() {
    const char* env = std::getenv("MULTIDERIV_POLE_CAP");
    if (!env || !*env) return kDefaultPoleCap;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 0 || v > 1000) throw std::domain_error("bad MULTIDERIV_POLE_CAP value '" + std::string(env) + "'");
    return static_cast<int>(v);
  }

  const Arrangement& arrangement() const { return *arr_; }
  int pole_cap() const { return pole_cap_; }

  /// The unique W-invariant eta with nabla_D eta = zeta, checked to lie in D(A, target).
  Derivation<Rational> invert_D(const Derivation<Rational>& zeta, const Multiplicity& target) {
    auto pz = zeta.pdeg();
    if (!pz) throw std::domain_error("invert_D: input is not homogeneous");
    if (zeta.is_zero()) throw std::domain_error("invert_D: input is zero");
    InversionRecord rec;
    rec.pdeg_in = *pz;
    rec.target = target;
    const int base1 = std::max(0, -target.a1), base2 = std::max(0, -target.a2);
    std::optional<Derivation<Rational>> eta;
    for (int bump = 0; bump <= pole_cap_ && !eta; ++bump) {
      ++rec.attempts;
      rec.m1 = base1 + bump;
      rec.m2 = base2 + bump;
      eta = solve_ansatz(zeta, *pz, rec.m1, rec.m2);
    }
    if (!eta) {
      log(rec);
      throw InternalError("invert_D: ansatz exhausted after " + std::to_string(rec.attempts) + " pole orders (pdeg " +
                          std::to_string(*pz) + ", target " + target.str() + ")");
    }
    rec.pdeg_out = eta->pdeg().value_or(0);
    rec.pdeg_ok = eta->pdeg() && *eta->pdeg() == *pz + arr_->h();
    rec.round_trip = connection(primitive(*arr_, Primitive::D), *eta) == zeta;
    rec.member = membership(*eta, target).ok;
    log(rec);
    if (!rec.round_trip) throw InternalError("invert_D: round trip nabla_D eta = zeta failed");
    if (!rec.pdeg_ok) throw InternalError("invert_D: degree did not rise by h");
    if (!rec.member) {
      throw InternalError("invert_D: result not in D(A, " + target.str() + "): " + membership(*eta, target).str());
    }
    return *eta;
  }

  Derivation<Rational> build_E(const UniversalSpec& spec) {
    if (!spec.valid()) throw std::domain_error("build_E: " + spec.str() + " violates the variant constraints");
    if (auto hit = lookup(spec)) return *hit;
    // the chain passes through X_j = E1^(s-t+j, j) (or E2^(j, t-s+j)), j = 0..top
    const bool first = spec.variant == Variant::E1;
    const int top = first ? spec.t : spec.s;
    const int gap = first ? spec.t - spec.s : spec.s - spec.t;
    auto at = [&](int j) {
      return first ? UniversalSpec{j - gap, j, Variant::E1} : UniversalSpec{j, j - gap, Variant::E2};
    };
    int j = top;
    std::optional<Derivation<Rational>> x;
    for (; j > 0; --j) {
      if ((x = lookup(at(j)))) break;
    }
    if (!x) {
      x = forward_from_cache(first ? Primitive::D1 : Primitive::D2, gap);
      j = 0;
    }
    for (++j; j <= top; ++j) {
      Multiplicity target = first ? Multiplicity{2 * (j - gap) + 1, 2 * j + 1} : Multiplicity{2 * j + 1, 2 * (j - gap) + 1};
      x = invert_D(*x, target);
      store(at(j), *x);
    }
    return *x;
  }

  std::vector<InversionRecord> inversion_log() const {
    std::lock_guard lock(mu_);
    return log_;
  }
  void clear_log() {
    std::lock_guard lock(mu_);
    log_.clear();
  }

 private:
  using Key = std::tuple<int, int, int>;
  static Key key(const UniversalSpec& s) { return {static_cast<int>(s.variant), s.s, s.t}; }

  std::optional<Derivation<Rational>> lookup(const UniversalSpec& s) const {
    std::lock_guard lock(mu_);
    auto it = cache_.find(key(s));
    if (it == cache_.end()) return std::nullopt;
    return it->second;
  }
  void store(const UniversalSpec& s, const Derivation<Rational>& v) {
    std::lock_guard lock(mu_);
    cache_.emplace(key(s), v);
  }
  void log(const InversionRecord& r) {
    std::lock_guard lock(mu_);
    log_.push_back(r);
  }

  // nabla_{D1}^n E = E1^(-n, 0), built on the largest cached even power
  Derivation<Rational> forward_from_cache(Primitive which, int n) {
    const bool first = which == Primitive::D1;
    auto spec = [&](int k) { return first ? UniversalSpec{-k, 0, Variant::E1} : UniversalSpec{0, -k, Variant::E2}; };
    int k = n;
    std::optional<Derivation<Rational>> x;
    for (; k > 0; k -= 2) {
      if ((x = lookup(spec(k)))) break;
    }
    if (!x) {
      x = euler(*arr_);
      k = 0;
      store(spec(0), *x);
    }
    for (; k < n; k += 2) {
      x = forward_power(which, 2, *x);
      store(spec(k + 2), *x);
    }
    return *x;
  }

  std::optional<Derivation<Rational>> solve_ansatz(const Derivation<Rational>& zeta, int pz, int m1, int m2) const {
    const int h = arr_->h(), half = h / 2;
    const int n = pz + h + (m1 + m2) * half;
    if (n < 0) return std::nullopt;
    const int a = std::max(zeta.c1().den_q1(), zeta.c2().den_q1());
    const int b = std::max(zeta.c1().den_q2(), zeta.c2().den_q2());
    const int c1 = std::min(a, m1 + 2), c2 = std::min(b, m2 + 2);
    const auto& q1 = arr_->q1();
    const auto& q2 = arr_->q2();
    const auto& extra = arr_->q_pow<Rational>(1, a - c1) * arr_->q_pow<Rational>(2, b - c2);
    // L(p) = V(p) Q1 Q2 - (h/2)(m1 Q2^2 - m2 Q1^2) p, times the leftover denominator
    Poly2<Rational> apoly = arr_->q() * extra;
    Poly2<Rational> bpoly = ((q2 * q2).scaled(Rational(m1)) - (q1 * q1).scaled(Rational(m2))).scaled(Rational(half)) * extra;
    const int adeg = h + (a - c1 + b - c2) * half;
    detail::Dense ad = detail::to_dense(apoly, adeg), bd = detail::to_dense(bpoly, adeg);
    const Poly2<Rational> rhs_factor =
        arr_->q_pow<Rational>(1, m1 + 2 - c1) * arr_->q_pow<Rational>(2, m2 + 2 - c2) * Poly2<Rational>::constant(Rational(h));

    std::vector<std::vector<Rational>> particular(2);
    std::vector<std::vector<std::vector<Rational>>> kernels(2);
    for (int i = 1; i <= 2; ++i) {
      const auto& c = zeta.coeff(i);
      Poly2<Rational> num = c.num();
      if (!c.is_zero()) {
        num = num * arr_->q_pow<Rational>(1, a - c.den_q1()) * arr_->q_pow<Rational>(2, b - c.den_q2());
      }
      detail::Dense rhs = detail::to_dense(num * rhs_factor, n + adeg);
      auto sol = solve_linear(detail::inversion_system(n, ad, bd, rhs));
      if (sol.status == SolveStatus::NoSolution) return std::nullopt;
      particular[i - 1] = std::move(sol.particular);
      kernels[i - 1] = std::move(sol.nullspace);
    }
    auto p = impose_invariance(particular, kernels, n, m1, m2);
    return Derivation<Rational>(RatFn<Rational>(*arr_, detail::from_dense(p[0], n), m1, m2),
                                RatFn<Rational>(*arr_, detail::from_dense(p[1], n), m1, m2));
  }

  // Pins the free part of the numerators by w eta = eta for w = s and w = r.
  std::vector<std::vector<Rational>> impose_invariance(std::vector<std::vector<Rational>> particular,
                                                       const std::vector<std::vector<std::vector<Rational>>>& kernels,
                                                       int n, int m1, int m2) const {
    const auto& f = arr_->field();
    // free directions: each kernel vector lives in one component
    struct Dir {
      int comp;
      const std::vector<Rational>* v;
    };
    std::vector<Dir> dirs;
    for (int i = 0; i < 2; ++i) {
      for (const auto& v : kernels[i]) dirs.push_back({i, &v});
    }
    const std::vector<Matrix2<FieldScalar>> gens{lift(arr_->reflection(), f), arr_->rotation()};
    const FieldScalar zero = arr_->zero<FieldScalar>();
    std::vector<std::vector<FieldScalar>> rows;
    std::vector<FieldScalar> rhs;
    for (const auto& w : gens) {
      const int eps = q_sign(1, w, m1) * q_sign(2, w, m2);
      const Matrix2<FieldScalar> wt = w.transpose();
      // residual_i(p) = eps * sum_j w_ij p_j(w^T x) - p_i
      auto residual = [&](const Poly2<FieldScalar>& p1, const Poly2<FieldScalar>& p2) {
        auto s1 = substitute_linear(p1, wt), s2 = substitute_linear(p2, wt);
        std::array<Poly2<FieldScalar>, 2> r{(s1.scaled(w.a) + s2.scaled(w.b)).scaled(Rational(eps)) - p1,
                                            (s1.scaled(w.c) + s2.scaled(w.d)).scaled(Rational(eps)) - p2};
        return r;
      };
      auto lifted = [&](const std::vector<Rational>& v) { return lift(detail::from_dense(v, n), f); };
      auto base = residual(lifted(particular[0]), lifted(particular[1]));
      std::vector<std::array<Poly2<FieldScalar>, 2>> cols;
      for (const auto& d : dirs) {
        Poly2<FieldScalar> pv = lifted(*d.v);
        cols.push_back(d.comp == 0 ? residual(pv, Poly2<FieldScalar>()) : residual(Poly2<FieldScalar>(), pv));
      }
      for (int i = 0; i < 2; ++i) {
        for (int k = 0; k <= n; ++k) {
          Monomial m{k, n - k};
          std::vector<FieldScalar> row;
          bool any = !base[i].coeff(m).is_zero();
          for (const auto& c : cols) {
            row.push_back(c[i].coeff(m).field() ? c[i].coeff(m) : zero);
            any = any || !row.back().is_zero();
          }
          if (!any) continue;
          rows.push_back(std::move(row));
          FieldScalar b = base[i].coeff(m);
          rhs.push_back(b.field() ? -b : zero);
        }
      }
    }
    LinSystem<FieldScalar> sys(0, dirs.size(), zero);
    for (std::size_t r = 0; r < rows.size(); ++r) sys.add_row(std::move(rows[r]), rhs[r]);
    auto sol = solve_linear(sys);
    if (sol.status == SolveStatus::NoSolution) throw InternalError("invert_D: no W-invariant solution");
    if (sol.status == SolveStatus::Parametric) throw InternalError("invert_D: W-invariant solution is not unique");
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      if (!sol.particular[d].is_rational()) throw InternalError("invert_D: irrational invariant solution");
      const Rational y = sol.particular[d].rational_part();
      auto& target = particular[dirs[d].comp];
      for (int k = 0; k <= n; ++k) target[k] += y * (*dirs[d].v)[k];
    }
    return particular;
  }

  // Q_which(w^T x) = sign * Q_which(x); the sign to the power e
  int q_sign(int which, const Matrix2<FieldScalar>& w, int e) const {
    if (e % 2 == 0) return 1;
    const auto& q = which == 1 ? arr_->invariants<FieldScalar>().q1 : arr_->invariants<FieldScalar>().q2;
    auto image = substitute_linear(q, w.transpose());
    if (image == q) return 1;
    if (image == -q) return -1;
    throw InternalError("group element does not preserve Q" + std::to_string(which));
  }

  const Arrangement* arr_;
  int pole_cap_;
  mutable std::mutex mu_;
  std::map<Key, Derivation<Rational>> cache_;
  std::vector<InversionRecord> log_;
};

/// Psi_zeta is bijective onto D(A, (2s, 2t)) iff the images of d1, d2 form a basis there.
template <Scalar K>
SaitoResult<K> universality_check(const Derivation<K>& zeta, int s, int t) {
  const auto& arr = zeta.arrangement();
  return saito_check(connection(partial<K>(arr, Var::X1), zeta), connection(partial<K>(arr, Var::X2), zeta),
                     Multiplicity{2 * s, 2 * t});
}

/// Valuation of zeta(alpha_j) along alpha_j minus the predicted 2k(H) + 1, per line.
template <Scalar K>
std::vector<std::optional<int>> unit_valuation_gaps(const Derivation<K>& zeta, int s, int t) {
  const auto& arr = zeta.arrangement();
  auto lz = lift(zeta);
  std::vector<std::optional<int>> out;
  for (int j = 0; j < arr.h(); ++j) {
    const auto& l = arr.lines()[j];
    RatFn<FieldScalar> value = lz.c1().scaled(l.a) + lz.c2().scaled(l.b);
    auto v = value.valuation(j);
    const int k = Arrangement::orbit_of(j) == 1 ? s : t;
    out.push_back(v ? std::optional<int>(*v - (2 * k + 1)) : std::nullopt);
  }
  return out;
}

/// d/dP1, d/dP2 through the inverse Jacobian of (P1, P2); the second is D.
template <Scalar K = Rational>
std::pair<Derivation<K>, Derivation<K>> invariant_partials(const Arrangement& arr) {
  const auto& inv = arr.invariants<K>();
  const auto& p2 = inv.p2;
  // det of the Jacobian is V(P2) = h Q
  RatFn<K> c1(arr, p2.derivative(Var::X2).scaled(arr.one<K>() * Rational(1, arr.h())), 1, 1);
  RatFn<K> c2(arr, -p2.derivative(Var::X1).scaled(arr.one<K>() * Rational(1, arr.h())), 1, 1);
  return {Derivation<K>(c1, c2), primitive<K>(arr, Primitive::D)};
}

}  // namespace multideriv
