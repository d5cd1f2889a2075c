#pragma once

// Bases of D(A, (a1, a2)) for every equivariant multiplicity: residue classification,
// the ordinary construction nabla_theta zeta, the corrected maps Phi, and duality.

#include <multideriv/universal.hpp>

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace multideriv {

enum class SeedTag { E, GradP2, D, DlogQ, DlogQ1, DlogQ2, GradQ1, GradQ2, D1, D2, Dx1, Dx2 };

inline const char* seed_name(SeedTag t) {
  switch (t) {
    case SeedTag::E: return "E";
    case SeedTag::GradP2: return "I*(dP2)";
    case SeedTag::D: return "D";
    case SeedTag::DlogQ: return "I*(dQ/Q)";
    case SeedTag::DlogQ1: return "I*(dQ1/Q1)";
    case SeedTag::DlogQ2: return "I*(dQ2/Q2)";
    case SeedTag::GradQ1: return "I*(dQ1)";
    case SeedTag::GradQ2: return "I*(dQ2)";
    case SeedTag::D1: return "D1";
    case SeedTag::D2: return "D2";
    case SeedTag::Dx1: return "d1";
    case SeedTag::Dx2: return "d2";
  }
  return "?";
}

/// The multiplicity each seed is a member of (one of the nine around the origin).
inline Multiplicity seed_multiplicity(SeedTag t) {
  switch (t) {
    case SeedTag::E:
    case SeedTag::GradP2: return {1, 1};
    case SeedTag::D:
    case SeedTag::DlogQ: return {-1, -1};
    case SeedTag::DlogQ1: return {-1, 1};
    case SeedTag::DlogQ2: return {1, -1};
    case SeedTag::GradQ1: return {0, 1};
    case SeedTag::GradQ2: return {1, 0};
    case SeedTag::D1: return {-1, 0};
    case SeedTag::D2: return {0, -1};
    case SeedTag::Dx1:
    case SeedTag::Dx2: return {0, 0};
  }
  return {};
}

inline Derivation<Rational> seed_derivation(const Arrangement& arr, SeedTag t) {
  using R = RatFn<Rational>;
  auto grad = [&](const Poly2<Rational>& f, int e1, int e2) { return R(arr, Poly2<Rational>::constant(1), e1, e2) * istar(differential(R(arr, f))); };
  Derivation<Rational> out;
  switch (t) {
    case SeedTag::E: out = euler(arr); break;
    case SeedTag::GradP2: out = grad(arr.p2(), 0, 0); break;
    case SeedTag::D: out = primitive(arr, Primitive::D); break;
    case SeedTag::DlogQ: out = grad(arr.q(), 1, 1); break;
    case SeedTag::DlogQ1: out = grad(arr.q1(), 1, 0); break;
    case SeedTag::DlogQ2: out = grad(arr.q2(), 0, 1); break;
    case SeedTag::GradQ1: out = grad(arr.q1(), 0, 0); break;
    case SeedTag::GradQ2: out = grad(arr.q2(), 0, 0); break;
    case SeedTag::D1: out = primitive(arr, Primitive::D1); break;
    case SeedTag::D2: out = primitive(arr, Primitive::D2); break;
    case SeedTag::Dx1: out = partial(arr, Var::X1); break;
    case SeedTag::Dx2: out = partial(arr, Var::X2); break;
  }
  if (auto r = membership(out, seed_multiplicity(t)); !r) {
    throw InternalError(std::string("seed ") + seed_name(t) + " not in D(A, " + seed_multiplicity(t).str() + "): " + r.str());
  }
  return out;
}

enum class CaseKind { Ordinary, Exceptional, Dual };

inline const char* case_kind_name(CaseKind k) {
  switch (k) {
    case CaseKind::Ordinary: return "ordinary";
    case CaseKind::Exceptional: return "exceptional";
    case CaseKind::Dual: return "dual";
  }
  return "?";
}

/// One row: a = (4p + off1, 4q + off2), zeta = E^(2p,2q) or E^(2p+1,2q+1).
struct CaseRow {
  int r1, r2;
  int off1, off2;
  bool odd_zeta;
  std::array<SeedTag, 2> theta;
  int phi;  // 0 for ordinary rows
};

inline const std::array<CaseRow, 16>& case_rows() {
  using S = SeedTag;
  static const std::array<CaseRow, 16> rows{{
      {1, 1, 1, 1, false, {S::E, S::GradP2}, 0},
      {3, 3, -1, -1, false, {S::D, S::DlogQ}, 0},
      {3, 1, -1, 1, false, {S::DlogQ1, S::E}, 0},
      {1, 3, 1, -1, false, {S::DlogQ2, S::E}, 0},
      {1, 0, 1, 0, false, {S::E, S::GradQ2}, 0},
      {3, 2, 3, 2, true, {S::E, S::GradQ2}, 0},
      {3, 0, -1, 0, false, {S::D1, S::DlogQ1}, 0},
      {1, 2, 1, 2, true, {S::D1, S::DlogQ1}, 0},
      {0, 1, 0, 1, false, {S::E, S::GradQ1}, 0},
      {2, 3, 2, 3, true, {S::E, S::GradQ1}, 0},
      {0, 3, 0, -1, false, {S::D2, S::DlogQ2}, 0},
      {2, 1, 2, 1, true, {S::D2, S::DlogQ2}, 0},
      {0, 0, 0, 0, false, {S::Dx1, S::Dx2}, 0},
      {2, 2, 2, 2, true, {S::Dx1, S::Dx2}, 0},
      {2, 0, 2, 0, false, {S::Dx1, S::Dx2}, 1},
      {0, 2, 0, 2, false, {S::Dx1, S::Dx2}, 2},
  }};
  return rows;
}

struct CasePlan {
  Multiplicity m;
  int r1 = 0, r2 = 0;
  int p = 0, q = 0;
  int off1 = 0, off2 = 0;
  CaseKind kind = CaseKind::Ordinary;
  std::optional<UniversalSpec> zeta;  // absent for the dual kind
  std::array<SeedTag, 2> theta{};
  int phi = 0;

  /// "(4p+1, 4q-1)" style row label.
  std::string row() const {
    auto part = [](const char* v, int off) {
      std::string s = std::string("4") + v;
      if (off > 0) s += "+" + std::to_string(off);
      if (off < 0) s += std::to_string(off);
      return s;
    };
    return "(" + part("p", off1) + ", " + part("q", off2) + ")";
  }
  std::string str() const {
    std::string s = std::string(case_kind_name(kind)) + " " + row() + " p=" + std::to_string(p) + " q=" + std::to_string(q);
    if (zeta) s += " zeta=" + zeta->str();
    s += std::string(" theta=") + seed_name(theta[0]) + ", " + seed_name(theta[1]);
    if (phi) s += " Phi" + std::to_string(phi);
    return s;
  }
};

inline int mod4(int a) { return ((a % 4) + 4) % 4; }

inline CasePlan classify(int a1, int a2) {
  const int r1 = mod4(a1), r2 = mod4(a2);
  for (const auto& row : case_rows()) {
    if (row.r1 != r1 || row.r2 != r2) continue;
    CasePlan plan;
    plan.m = {a1, a2};
    plan.r1 = r1;
    plan.r2 = r2;
    plan.off1 = row.off1;
    plan.off2 = row.off2;
    plan.p = (a1 - row.off1) / 4;
    plan.q = (a2 - row.off2) / 4;
    plan.theta = row.theta;
    plan.phi = row.phi;
    if (plan.p < 0 && plan.q < 0) {
      plan.kind = CaseKind::Dual;
      return plan;
    }
    plan.kind = row.phi ? CaseKind::Exceptional : CaseKind::Ordinary;
    const int s = 2 * plan.p + (row.odd_zeta ? 1 : 0), t = 2 * plan.q + (row.odd_zeta ? 1 : 0);
    plan.zeta = UniversalSpec::choose(s, t);
    if (!plan.zeta) throw InternalError("classify: no universal variant for (" + std::to_string(s) + ", " + std::to_string(t) + ")");
    return plan;
  }
  throw InternalError("classify: residue pair without a row");
}

/// Phi1(theta) = Q1 nabla_theta zeta - (4p+1) theta(Q1) zeta; Phi2 with Q2 and 4q+1.
inline Derivation<Rational> phi_map(int variant, const Derivation<Rational>& zeta, int p, int q, const Derivation<Rational>& theta) {
  if (variant != 1 && variant != 2) throw std::domain_error("phi_map: variant must be 1 or 2");
  const auto& arr = zeta.arrangement();
  const Poly2<Rational>& qi = variant == 1 ? arr.q1() : arr.q2();
  const int c = variant == 1 ? 4 * p + 1 : 4 * q + 1;
  RatFn<Rational> qf(arr, qi);
  return qf * connection(theta, zeta) - apply(theta, qi).scaled(Rational(c)) * zeta;
}

/// Rows of the inverse transpose of the coefficient matrix: eta1 = g11 d1 + g21 d2, eta2 = g12 d1 + g22 d2.
/// The input must have det = c Q1^-a1 Q2^-a2.
inline std::pair<Derivation<Rational>, Derivation<Rational>> dual_basis(const Derivation<Rational>& t1, const Derivation<Rational>& t2,
                                                                        int a1, int a2) {
  const auto& arr = t1.arrangement();
  RatFn<Rational> det = coefficient_det(t1, t2);
  RatFn<Rational> ratio = det.times_q_power(a1, a2);
  if (ratio.is_zero() || !ratio.is_polynomial() || !ratio.num().is_constant()) {
    throw InternalError("dual_basis: det " + det.str() + " is not a constant times Q1^" + std::to_string(-a1) + " Q2^" +
                        std::to_string(-a2));
  }
  RatFn<Rational> inv = q_power(arr, Multiplicity{a1, a2}).scaled(Rational(1) / ratio.num().some_coeff());
  // M^-1 = inv * [[m22, -m12], [-m21, m11]] with m_ij = t_i(x_j)
  Derivation<Rational> e1(inv * t2.c2(), -(inv * t2.c1()));
  Derivation<Rational> e2(-(inv * t1.c2()), inv * t1.c1());
  return {e1, e2};
}

/// Closed-form exponents, ascending.
inline std::pair<int, int> table4_exponents(int h, int a1, int a2) {
  if (h < 4 || h % 2 != 0) throw std::domain_error("table4_exponents: h must be even and at least 4");
  auto quarter = [h](int s) { return s * h / 4; };
  const bool odd1 = a1 % 2 != 0, odd2 = a2 % 2 != 0;
  const int sum = a1 + a2;
  std::pair<int, int> e;
  if (odd1 && odd2) {
    e = mod4(a1 - a2) == 0 ? std::make_pair(quarter(sum - 2) + 1, quarter(sum + 2) - 1) : std::make_pair(quarter(sum) + 1, quarter(sum) - 1);
  } else if (odd1 != odd2) {
    e = {quarter(sum - 1) + 1, quarter(sum + 1) - 1};
  } else {
    e = {quarter(sum), quarter(sum)};
  }
  if (e.first > e.second) std::swap(e.first, e.second);
  return e;
}

struct BasisCertificate {
  int h = 0;
  Multiplicity m;
  bool orbit_swap = false;
  CasePlan plan;
  std::optional<UniversalSpec> zeta;  // for the dual kind, the one behind the source basis
  std::pair<Derivation<Rational>, Derivation<Rational>> basis;
  std::pair<int, int> exponents{};
  Rational saito_scalar;
  std::vector<std::string> trace;
  bool verified = false;
};

namespace detail {

// (pdeg, first nonzero component, its lex-leading monomial) and that monomial's coefficient
struct SortKey {
  int pdeg;
  int component;
  Monomial lead;
  Rational coeff;
};

inline SortKey sort_key(const Derivation<Rational>& t) {
  auto d = t.pdeg();
  if (!d) throw InternalError("basis element " + t.str() + " is not homogeneous");
  const int c = t.c1().is_zero() ? 2 : 1;
  auto [mono, coeff] = t.coeff(c).num().leading();
  return {*d, c, mono, coeff};
}

inline bool key_less(const SortKey& a, const SortKey& b) {
  if (a.pdeg != b.pdeg) return a.pdeg < b.pdeg;
  if (a.component != b.component) return a.component < b.component;
  return a.lead > b.lead;
}

}  // namespace detail

/// Orders by ascending pdeg (ties by lex-leading term), scales each lex-leading coefficient to 1,
/// then runs the full Saito and closed-form checks.
inline void finalize(BasisCertificate& cert, Derivation<Rational> t1, Derivation<Rational> t2) {
  auto raw = saito_check(t1, t2, cert.m);
  if (!raw) throw InternalError("basis at " + cert.m.str() + " failed: " + raw.reason);
  cert.trace.push_back("saito ok, raw scalar " + raw.scalar.short_str());
  auto k1 = detail::sort_key(t1), k2 = detail::sort_key(t2);
  if (detail::key_less(k2, k1)) {
    std::swap(t1, t2);
    std::swap(k1, k2);
    cert.trace.push_back("reordered by ascending pdeg");
  }
  t1 = t1.scaled(Rational(1) / k1.coeff);
  t2 = t2.scaled(Rational(1) / k2.coeff);
  auto res = saito_check(t1, t2, cert.m);
  if (!res || !res.exponents) throw InternalError("normalized basis at " + cert.m.str() + " failed: " + res.reason);
  cert.basis = {std::move(t1), std::move(t2)};
  cert.exponents = *res.exponents;
  cert.saito_scalar = res.scalar;
  const int half = cert.h / 2;
  if (cert.exponents.first + cert.exponents.second != half * (cert.m.a1 + cert.m.a2)) {
    throw InternalError("exponent sum mismatch at " + cert.m.str());
  }
  auto closed = table4_exponents(cert.h, cert.m.a1, cert.m.a2);
  if (cert.exponents != closed) {
    throw InternalError("exponents (" + std::to_string(cert.exponents.first) + ", " + std::to_string(cert.exponents.second) +
                        ") differ from the closed form (" + std::to_string(closed.first) + ", " + std::to_string(closed.second) + ")");
  }
  cert.verified = true;
}

inline BasisCertificate construct_ordinary(const CasePlan& plan, Engine& engine) {
  if (plan.kind != CaseKind::Ordinary || !plan.zeta) throw std::domain_error("construct_ordinary: plan is not ordinary");
  const auto& arr = engine.arrangement();
  BasisCertificate cert;
  cert.h = arr.h();
  cert.m = plan.m;
  cert.plan = plan;
  cert.zeta = plan.zeta;
  cert.trace.push_back(plan.str());
  auto zeta = engine.build_E(*plan.zeta);
  cert.trace.push_back("zeta " + plan.zeta->str() + " pdeg " + std::to_string(zeta.pdeg().value_or(0)));
  const Multiplicity rest{plan.m.a1 - 2 * plan.zeta->s, plan.m.a2 - 2 * plan.zeta->t};
  std::array<Derivation<Rational>, 2> out;
  for (int i = 0; i < 2; ++i) {
    auto theta = seed_derivation(arr, plan.theta[i]);
    if (auto r = membership(theta, rest); !r) {
      throw InternalError(std::string("theta ") + seed_name(plan.theta[i]) + " not in D(A, " + rest.str() + "): " + r.str());
    }
    out[i] = connection(theta, zeta);
    cert.trace.push_back(std::string("nabla_") + seed_name(plan.theta[i]) + " zeta");
  }
  finalize(cert, out[0], out[1]);
  return cert;
}

inline BasisCertificate construct_exceptional(const CasePlan& plan, Engine& engine) {
  if (plan.kind != CaseKind::Exceptional || !plan.zeta) throw std::domain_error("construct_exceptional: plan is not exceptional");
  const auto& arr = engine.arrangement();
  BasisCertificate cert;
  cert.h = arr.h();
  cert.m = plan.m;
  cert.plan = plan;
  cert.zeta = plan.zeta;
  cert.trace.push_back(plan.str());
  auto zeta = engine.build_E(*plan.zeta);
  cert.trace.push_back("zeta " + plan.zeta->str() + " pdeg " + std::to_string(zeta.pdeg().value_or(0)));
  std::array<Derivation<Rational>, 2> out;
  for (int i = 0; i < 2; ++i) {
    out[i] = phi_map(plan.phi, zeta, plan.p, plan.q, seed_derivation(arr, plan.theta[i]));
    cert.trace.push_back("Phi" + std::to_string(plan.phi) + "(" + seed_name(plan.theta[i]) + ")");
  }
  finalize(cert, out[0], out[1]);
  return cert;
}

/// A verified basis of D(A, (a1, a2)); with orbit_swap the labels of the two orbits are exchanged.
inline BasisCertificate construct(Engine& engine, int a1, int a2, bool orbit_swap = false) {
  if (orbit_swap) std::swap(a1, a2);
  const auto& arr = engine.arrangement();
  CasePlan plan = classify(a1, a2);
  BasisCertificate cert;
  switch (plan.kind) {
    case CaseKind::Ordinary: cert = construct_ordinary(plan, engine); break;
    case CaseKind::Exceptional: cert = construct_exceptional(plan, engine); break;
    case CaseKind::Dual: {
      CasePlan pos = classify(-a1, -a2);
      if (pos.kind == CaseKind::Dual || pos.p < 0 || pos.q < 0) throw InternalError("dual plan for " + plan.m.str() + " did not terminate");
      BasisCertificate src = pos.kind == CaseKind::Ordinary ? construct_ordinary(pos, engine) : construct_exceptional(pos, engine);
      cert.h = arr.h();
      cert.m = plan.m;
      cert.plan = plan;
      cert.zeta = src.zeta;
      cert.trace.push_back(plan.str());
      for (const auto& line : src.trace) cert.trace.push_back("dual source: " + line);
      auto [e1, e2] = dual_basis(src.basis.first, src.basis.second, a1, a2);
      cert.trace.push_back("inverse transpose of the coefficient matrix at " + src.m.str());
      finalize(cert, std::move(e1), std::move(e2));
      break;
    }
  }
  cert.orbit_swap = orbit_swap;
  if (orbit_swap) cert.trace.insert(cert.trace.begin(), "orbit labels swapped");
  return cert;
}

}  // namespace multideriv
