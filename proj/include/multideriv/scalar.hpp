#pragma once

// What the generic polynomial and derivation code needs from a coefficient field.
// Two models exist: Rational (the pipeline runs over Q) and FieldScalar (Q(zeta_2h),
// needed for the reflection lines and the rotation generator).

#include <multideriv/cyclotomic.hpp>
#include <multideriv/rational.hpp>

#include <concepts>
#include <stdexcept>
#include <string>
#include <utility>

namespace multideriv {

template <class K>
concept Scalar = std::regular<K> && requires(K a, const K& b, const Rational& q) {
  { a + b } -> std::convertible_to<K>;
  { a - b } -> std::convertible_to<K>;
  { a * b } -> std::convertible_to<K>;
  { a * q } -> std::convertible_to<K>;
  { -a } -> std::convertible_to<K>;
  { a.is_zero() } -> std::convertible_to<bool>;
  { a.is_one() } -> std::convertible_to<bool>;
  { a.inverse() } -> std::convertible_to<K>;
};

inline std::pair<int, std::size_t> pivot_cost(const Rational& q) { return {q.is_zero() ? 0 : 1, q.bits()}; }
inline std::pair<int, std::size_t> pivot_cost(const FieldScalar& x) { return x.cost(); }

inline std::string display(const Rational& q) { return q.short_str(); }
inline std::string display(const FieldScalar& x) { return x.str(); }

/// Whether the value needs parentheses when printed as a coefficient.
inline bool is_compound(const Rational&) { return false; }
inline bool is_compound(const FieldScalar& x) { return !x.is_rational(); }

inline FieldScalar lift(const Rational& q, const CyclotomicField& f) { return FieldScalar(f, q); }
inline FieldScalar lift(const FieldScalar& x, const CyclotomicField&) { return x; }

/// The zero of the same field as `proto`.
inline Rational zero_like(const Rational&) { return Rational(); }
inline FieldScalar zero_like(const FieldScalar& proto) {
  return proto.field() ? FieldScalar(*proto.field(), Rational()) : FieldScalar();
}

inline Rational one_like(const Rational&) { return Rational(1); }
inline FieldScalar one_like(const FieldScalar& proto) {
  if (!proto.field()) throw std::logic_error("one_like: field of a detached zero is unknown");
  return FieldScalar(*proto.field(), Rational(1));
}

inline int sign_of_rational_part(const Rational& q) { return q.sign(); }

inline int sign_of_rational_part(const FieldScalar& x) { return x.rational_part().sign(); }

}  // namespace multideriv
