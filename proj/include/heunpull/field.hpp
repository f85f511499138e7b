#pragma once

#include <complex>
#include <concepts>
#include <optional>
#include <string>

#include "heunpull/omega.hpp"
#include "heunpull/rational.hpp"

namespace heunpull {

/// The scalar interface every coefficient field provides.
template <class F>
concept Field = std::regular<F> && requires(const F& a, const F& b) {
  { a + b } -> std::convertible_to<F>;
  { a - b } -> std::convertible_to<F>;
  { a * b } -> std::convertible_to<F>;
  { a / b } -> std::convertible_to<F>;
  { -a } -> std::convertible_to<F>;
  { is_zero(a) } -> std::convertible_to<bool>;
  { to_string(a) } -> std::convertible_to<std::string>;
  { to_complex(a) } -> std::convertible_to<std::complex<long double>>;
  { canonical_less(a, b) } -> std::convertible_to<bool>;
  F(Rational(1));
};

template <class F>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
  static constexpr const char* name = "q";
  static Rational omega() { throw FieldError("w is not an element of Q; rerun over Q(w)"); }
  static std::optional<Rational> as_rational(const Rational& r) { return r; }
  /// Exact candidate for a numerically located root, or nothing.
  static std::optional<Rational> recognize(std::complex<long double> z, long max_den) {
    if (std::abs(z.imag()) > 1e-7L * (1.0L + std::abs(z.real()))) return std::nullopt;
    return rational_approximation(z.real(), max_den);
  }
};

template <>
struct FieldTraits<OmegaRational> {
  static constexpr const char* name = "q-omega";
  static OmegaRational omega() { return OmegaRational::omega(); }
  static std::optional<Rational> as_rational(const OmegaRational& z) {
    if (!z.is_rational()) return std::nullopt;
    return z.re();
  }
  static std::optional<OmegaRational> recognize(std::complex<long double> z, long max_den) {
    // z = r + s*w with w = -1/2 + i*sqrt(3)/2
    long double s = z.imag() * 2.0L / std::sqrt(3.0L);
    long double r = z.real() + s / 2.0L;
    return OmegaRational(rational_approximation(r, max_den), rational_approximation(s, max_den));
  }
};

template <Field F>
F field_pow(F base, long e) {
  if (e < 0) return field_pow(F(Rational(1)) / base, -e);
  F result(Rational(1));
  while (e > 0) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

/// Rational part of a scalar that must lie in Q (exponents, heights).
template <Field F>
Rational require_rational(const F& x, const char* what) {
  auto r = FieldTraits<F>::as_rational(x);
  if (!r) throw FieldError(std::string(what) + " must be rational, got " + to_string(x));
  return *r;
}

}  // namespace heunpull
