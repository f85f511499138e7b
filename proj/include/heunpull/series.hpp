#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heunpull/ratfun.hpp"

namespace heunpull {

inline constexpr int kDefaultOrder = 16;

/// Jet c_0 + c_1 x + ... + c_N x^N of a function at x = 0; N is the order.
/// Ring operations truncate to the smaller operand order.
template <Field F>
class Series {
 public:
  Series() = default;
  Series(std::vector<F> coeffs, int order) : c_(std::move(coeffs)) {
    c_.resize(static_cast<std::size_t>(order) + 1, F(Rational(0)));
  }
  static Series constant(const F& c, int order) {
    Series s(std::vector<F>{}, order);
    s.c_[0] = c;
    return s;
  }
  static Series one(int order) { return constant(F(Rational(1)), order); }
  static Series from_polynomial(const Polynomial<F>& p, int order) { return Series(p.coeffs(), order); }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<F>& coeffs() const { return c_; }
  const F& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  F& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

  Series truncated(int order) const {
    std::vector<F> v(c_.begin(), c_.begin() + std::min<std::ptrdiff_t>(order + 1, static_cast<std::ptrdiff_t>(c_.size())));
    return Series(std::move(v), std::min(order, this->order()));
  }

  Series operator-() const {
    Series r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }
  friend Series operator+(const Series& a, const Series& b) {
    const int n = std::min(a.order(), b.order());
    Series r(std::vector<F>{}, n);
    for (int i = 0; i <= n; ++i) r[i] = a[i] + b[i];
    return r;
  }
  friend Series operator-(const Series& a, const Series& b) { return a + (-b); }
  /// Cauchy product truncated at min(order(a), order(b)).
  friend Series operator*(const Series& a, const Series& b) {
    const int n = std::min(a.order(), b.order());
    Series r(std::vector<F>{}, n);
    for (int i = 0; i <= n; ++i) {
      if (is_zero(a[i])) continue;
      for (int j = 0; i + j <= n; ++j) r[i + j] = r[i + j] + a[i] * b[j];
    }
    return r;
  }
  Series scaled(const F& s) const {
    Series r = *this;
    for (auto& v : r.c_) v = v * s;
    return r;
  }
  friend bool operator==(const Series& a, const Series& b) { return a.c_ == b.c_; }

  Series inverse() const {
    if (is_zero(c_[0])) throw DomainError("series inverse needs an invertible constant term");
    const int n = order();
    Series r(std::vector<F>{}, n);
    const F inv0 = F(Rational(1)) / c_[0];
    r[0] = inv0;
    for (int k = 1; k <= n; ++k) {
      F acc(Rational(0));
      for (int j = 1; j <= k; ++j) acc = acc + c_[static_cast<std::size_t>(j)] * r[k - j];
      r[k] = -acc * inv0;
    }
    return r;
  }
  friend Series operator/(const Series& a, const Series& b) { return a * b.inverse(); }

  Series derivative() const {
    const int n = std::max(order() - 1, 0);
    Series r(std::vector<F>{}, n);
    for (int i = 1; i <= order(); ++i) r[i - 1] = c_[static_cast<std::size_t>(i)] * F(Rational(i));
    return r;
  }

  /// x^k * this, keeping the order.
  Series shifted_up(int k) const {
    Series r(std::vector<F>{}, order());
    for (int i = 0; i + k <= order(); ++i) r[i + k] = c_[static_cast<std::size_t>(i)];
    return r;
  }

  /// (this)^gamma for a rational exponent; requires c_0 = 1.
  Series pow(const Rational& gamma) const {
    if (!(c_[0] == F(Rational(1))))
      throw DomainError("rational power of a series needs constant term 1, got " + heunpull::to_string(c_[0]));
    // n f_n = sum_{k=1}^n ((gamma+1) k - n) s_k f_{n-k}
    const int n = order();
    const F g(gamma);
    Series r(std::vector<F>{}, n);
    r[0] = F(Rational(1));
    for (int m = 1; m <= n; ++m) {
      F acc(Rational(0));
      for (int k = 1; k <= m; ++k) {
        if (is_zero(c_[static_cast<std::size_t>(k)])) continue;
        F w = (g + F(Rational(1))) * F(Rational(k)) - F(Rational(m));
        acc = acc + w * c_[static_cast<std::size_t>(k)] * r[m - k];
      }
      r[m] = acc / F(Rational(m));
    }
    return r;
  }

  /// this(inner(x)); requires inner.c_0 = 0.
  Series compose(const Series& inner) const {
    if (!is_zero(inner[0])) throw DomainError("series composition needs an inner series with zero constant term");
    const int n = std::min(order(), inner.order());
    // Horner: ((c_N * g + c_{N-1}) * g + ...) truncated at n.
    Series acc = constant(c_[static_cast<std::size_t>(n)], n);
    const Series g = inner.truncated(n);
    for (int i = n - 1; i >= 0; --i) {
      acc = acc * g;
      acc[0] = acc[0] + c_[static_cast<std::size_t>(i)];
    }
    return acc;
  }

  /// Index of the first nonzero coefficient, if any.
  std::optional<int> valuation() const {
    for (int i = 0; i <= order(); ++i)
      if (!is_zero(c_[static_cast<std::size_t>(i)])) return i;
    return std::nullopt;
  }

  std::string to_string(const std::string& var = "x") const {
    Polynomial<F> p(c_);
    return p.to_string(var) + " + O(" + var + "^" + std::to_string(order() + 1) + ")";
  }

 private:
  std::vector<F> c_;
};

/// Taylor jet of f at x = 0. Throws PoleError carrying the pole order if den(0) = 0.
template <Field F>
Series<F> series_at_zero(const RationalFunction<F>& f, int order) {
  const F d0 = f.den().coeff(0);
  if (is_zero(d0)) {
    const int pole = f.den().valuation();
    throw PoleError("rational function has a pole of order " + std::to_string(pole) + " at x = 0", pole);
  }
  return Series<F>::from_polynomial(f.num(), order) / Series<F>::from_polynomial(f.den(), order);
}

}  // namespace heunpull
