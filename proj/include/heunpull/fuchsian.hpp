#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heunpull/series.hpp"

namespace heunpull {

template <Field F>
struct HypergeometricParams {
  F a, b, c;
  friend bool operator==(const HypergeometricParams&, const HypergeometricParams&) = default;
};

template <Field F>
struct HeunParams {
  F a, b, c, d, q, t;
  /// Exponent parameter at x = t forced by the Fuchs relation.
  F e() const { return a + b - c - d + F(Rational(1)); }
  friend bool operator==(const HeunParams&, const HeunParams&) = default;
};

/// A singular point; location nullopt means infinity.
template <Field F>
struct SchemePoint {
  std::optional<F> location;
  F first, second;
};

template <Field F>
struct RiemannScheme {
  std::vector<SchemePoint<F>> points;

  F exponent_sum() const {
    F s(Rational(0));
    for (const auto& p : points) s = s + p.first + p.second;
    return s;
  }
  /// Exponent differences second - first, in point order.
  std::vector<F> differences() const {
    std::vector<F> out;
    for (const auto& p : points) out.push_back(p.second - p.first);
    return out;
  }
};

template <Field F>
struct LocalSolution {
  F exponent;
  Series<F> jet;
};

/// Second-order operator A2 y'' + A1 y' + A0 y with polynomial coefficients.
template <Field F>
struct FuchsianOperator {
  Polynomial<F> a2, a1, a0;

  /// Residual jet through order N-2 for an input jet of order N.
  Series<F> apply(const Series<F>& y) const {
    if (y.order() < 2) throw DomainError("ODE residual needs a jet of order at least 2");
    const int n = y.order() - 2;
    const Series<F> d1 = y.derivative().truncated(n);
    const Series<F> d2 = y.derivative().derivative();
    return Series<F>::from_polynomial(a2, n) * d2 + Series<F>::from_polynomial(a1, n) * d1 +
           Series<F>::from_polynomial(a0, n) * y.truncated(n);
  }
  /// Normalized coefficients P = A1/A2 and Q = A0/A2.
  RationalFunction<F> p() const { return RationalFunction<F>(a1, a2); }
  RationalFunction<F> q() const { return RationalFunction<F>(a0, a2); }
};

namespace detail {
template <Field F>
F one() {
  return F(Rational(1));
}
}  // namespace detail

/// Cleared hypergeometric operator z(z-1)y'' + ((a+b+1)z - c)y' + ab y.
template <Field F>
FuchsianOperator<F> cleared_operator(const HypergeometricParams<F>& p) {
  const F one = detail::one<F>();
  return {Polynomial<F>(std::vector<F>{F(Rational(0)), -one, one}),
          Polynomial<F>(std::vector<F>{-p.c, p.a + p.b + one}), Polynomial<F>(p.a * p.b)};
}

/// Cleared Heun operator x(x-1)(x-t)y'' + [c(x-1)(x-t) + d x(x-t) + e x(x-1)]y' + (abx - q)y.
template <Field F>
FuchsianOperator<F> cleared_operator(const HeunParams<F>& p) {
  using P = Polynomial<F>;
  const F one = detail::one<F>();
  const P x = P::x();
  const P xm1 = x - P(one);
  const P xmt = x - P(p.t);
  return {x * xm1 * xmt, (xm1 * xmt).scaled(p.c) + (x * xmt).scaled(p.d) + (x * xm1).scaled(p.e()),
          P(std::vector<F>{-p.q, p.a * p.b})};
}

template <Field F>
Series<F> ode_residual(const HypergeometricParams<F>& p, const Series<F>& s) {
  return cleared_operator(p).apply(s);
}
template <Field F>
Series<F> ode_residual(const HeunParams<F>& p, const Series<F>& s) {
  return cleared_operator(p).apply(s);
}

/// Gauss series coefficients (a)_n (b)_n / ((c)_n n!).
template <Field F>
Series<F> hpg_series(const HypergeometricParams<F>& p, int order) {
  Series<F> s(std::vector<F>{}, order);
  s[0] = detail::one<F>();
  for (int n = 0; n < order; ++n) {
    const F cn = p.c + F(Rational(n));
    if (is_zero(cn))
      throw DegenerateError("Pochhammer (c)_" + std::to_string(n + 1) + " vanishes for c = " + to_string(p.c));
    s[n + 1] = s[n] * (p.a + F(Rational(n))) * (p.b + F(Rational(n))) / (cn * F(Rational(n + 1)));
  }
  return s;
}

/// Local Heun solution at 0 with exponent 0 and value 1, by the three-term recurrence
///   t(n+1)(n+c) c_{n+1} = [n((n-1+c)(1+t) + dt + e) + q] c_n - (n-1+a)(n-1+b) c_{n-1}.
template <Field F>
Series<F> heun_series(const HeunParams<F>& p, int order) {
  const F one = detail::one<F>();
  if (is_zero(p.t) || p.t == one) throw DegenerateError("Heun singular point t must differ from 0 and 1");
  const F e = p.e();
  Series<F> s(std::vector<F>{}, order);
  s[0] = one;
  F prev(Rational(0));
  for (int n = 0; n < order; ++n) {
    const F fn{Rational(n)};
    const F lead = p.t * F(Rational(n + 1)) * (fn + p.c);
    if (is_zero(lead))
      throw DegenerateError("Heun recurrence breaks at n = " + std::to_string(n + 1) + " for c = " + to_string(p.c));
    F rhs = (fn * ((fn - one + p.c) * (one + p.t) + p.d * p.t + e) + p.q) * s[n];
    if (n >= 1) rhs = rhs - (fn - one + p.a) * (fn - one + p.b) * prev;
    prev = s[n];
    s[n + 1] = rhs / lead;
  }
  return s;
}

template <Field F>
RiemannScheme<F> riemann_scheme_of(const HypergeometricParams<F>& p) {
  const F zero(Rational(0)), one = detail::one<F>();
  return {{{zero, zero, one - p.c}, {one, zero, p.c - p.a - p.b}, {std::nullopt, p.a, p.b}}};
}

template <Field F>
RiemannScheme<F> riemann_scheme_of(const HeunParams<F>& p) {
  const F zero(Rational(0)), one = detail::one<F>();
  return {{{zero, zero, one - p.c},
           {one, zero, one - p.d},
           {p.t, zero, p.c + p.d - p.a - p.b},
           {std::nullopt, p.a, p.b}}};
}

/// Local solution at 0 with exponent 0 (the canonical one).
template <Field F>
Series<F> canonical_jet(const HypergeometricParams<F>& p, int order) {
  return hpg_series(p, order);
}
template <Field F>
Series<F> canonical_jet(const HeunParams<F>& p, int order) {
  return heun_series(p, order);
}

template <Field F>
std::string to_string(const HypergeometricParams<F>& p) {
  return "2F1(" + to_string(p.a) + ", " + to_string(p.b) + "; " + to_string(p.c) + ")";
}
template <Field F>
std::string to_string(const HeunParams<F>& p) {
  return "Heun(t=" + to_string(p.t) + ", q=" + to_string(p.q) + "; " + to_string(p.a) + ", " + to_string(p.b) +
         "; " + to_string(p.c) + ", " + to_string(p.d) + ")";
}

}  // namespace heunpull
