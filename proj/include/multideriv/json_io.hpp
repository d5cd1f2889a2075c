#pragma once

// JSON encoding of scalars, polynomials, rational functions, derivations and certificates.

#include <multideriv/basis.hpp>

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <utility>

namespace multideriv {

using Json = nlohmann::ordered_json;

inline Json to_json(const Rational& q) { return q.short_str(); }

inline Json to_json(const FieldScalar& x) {
  Json out = Json::array();
  for (const auto& c : x.coeffs()) out.push_back(c.short_str());
  return out;
}

inline Json to_json(const Poly2<Rational>& p) {
  Json out = Json::array();
  for (const auto& [m, c] : p.terms()) out.push_back({{"i", m.i}, {"j", m.j}, {"c", c.short_str()}});
  return out;
}

inline Json to_json(const RatFn<Rational>& f) {
  return {{"num", to_json(f.num())}, {"den_q1", f.den_q1()}, {"den_q2", f.den_q2()}};
}

inline Json to_json(const Derivation<Rational>& t) {
  Json pd = nullptr;
  if (auto d = t.pdeg()) pd = *d;
  return {{"c1", to_json(t.c1())}, {"c2", to_json(t.c2())}, {"pdeg", pd}};
}

inline Json to_json(const CasePlan& plan) {
  Json j{{"kind", case_kind_name(plan.kind)}, {"row", plan.row()}, {"p", plan.p}, {"q", plan.q}};
  j["zeta"] = plan.zeta ? Json(plan.zeta->str()) : Json(nullptr);
  j["theta"] = {seed_name(plan.theta[0]), seed_name(plan.theta[1])};
  j["phi"] = plan.phi ? Json(plan.phi) : Json(nullptr);
  return j;
}

inline Json to_json(const BasisCertificate& c) {
  const auto& field = CyclotomicField::get(2 * c.h);
  Json j{{"h", c.h}, {"two_h", 2 * c.h}, {"a1", c.m.a1}, {"a2", c.m.a2}};
  j["case"] = std::string(case_kind_name(c.plan.kind)) + " " + c.plan.row();
  j["plan"] = to_json(c.plan);
  j["basis"] = {to_json(c.basis.first), to_json(c.basis.second)};
  j["exponents"] = {c.exponents.first, c.exponents.second};
  j["saito_scalar"] = to_json(FieldScalar(field, c.saito_scalar));
  j["trace"] = c.trace;
  j["verified"] = c.verified;
  if (c.orbit_swap) j["orbit_swap"] = true;
  return j;
}

inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  throw std::invalid_argument("expected a rational as an integer or a \"p/q\" string, got " + j.dump());
}

inline Poly2<Rational> poly_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("polynomial must be an array of {i, j, c} terms");
  Poly2<Rational> p;
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("i") || !t.contains("j") || !t.contains("c")) {
      throw std::invalid_argument("bad polynomial term " + t.dump());
    }
    const int i = t["i"].get<int>(), e = t["j"].get<int>();
    if (i < 0 || e < 0) throw std::invalid_argument("negative exponent in term " + t.dump());
    p.add_term({i, e}, rational_from_json(t["c"]));
  }
  return p;
}

inline RatFn<Rational> ratfn_from_json(const Arrangement& arr, const Json& j) {
  if (!j.is_object() || !j.contains("num")) throw std::invalid_argument("rational function needs a \"num\" field");
  const int e1 = j.value("den_q1", 0), e2 = j.value("den_q2", 0);
  if (e1 < 0 || e2 < 0) throw std::invalid_argument("negative denominator exponent");
  return RatFn<Rational>(arr, poly_from_json(j["num"]), e1, e2);
}

inline Derivation<Rational> derivation_from_json(const Arrangement& arr, const Json& j) {
  if (!j.is_object() || !j.contains("c1") || !j.contains("c2")) throw std::invalid_argument("derivation needs \"c1\" and \"c2\"");
  Derivation<Rational> t(ratfn_from_json(arr, j["c1"]), ratfn_from_json(arr, j["c2"]));
  if (j.contains("pdeg") && !j["pdeg"].is_null()) {
    auto d = t.pdeg();
    if (!d || *d != j["pdeg"].get<int>()) throw std::invalid_argument("stated pdeg " + j["pdeg"].dump() + " does not match the coefficients");
  }
  return t;
}

/// A certificate object, an object with a "basis" array, or a bare two-element array.
inline std::pair<Derivation<Rational>, Derivation<Rational>> basis_from_json(const Arrangement& arr, const Json& j) {
  const Json& b = j.is_object() && j.contains("basis") ? j["basis"] : j;
  if (!b.is_array() || b.size() != 2) throw std::invalid_argument("candidate basis must hold exactly two derivations");
  return {derivation_from_json(arr, b[0]), derivation_from_json(arr, b[1])};
}

}  // namespace multideriv
