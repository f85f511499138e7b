#pragma once

#include <optional>
#include <string>
#include <utility>

#include "heunpull/polynomial.hpp"

namespace heunpull {

/// Reduced quotient num/den with monic denominator.
template <Field F>
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(F(Rational(1))) {}
  RationalFunction(F c) : num_(std::move(c)), den_(F(Rational(1))) {}                 // NOLINT
  RationalFunction(Polynomial<F> p) : num_(std::move(p)), den_(F(Rational(1))) {}     // NOLINT
  RationalFunction(Polynomial<F> num, Polynomial<F> den) : num_(std::move(num)), den_(std::move(den)) {
    normalize();
  }

  static RationalFunction x() { return RationalFunction(Polynomial<F>::x()); }

  const Polynomial<F>& num() const { return num_; }
  const Polynomial<F>& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
  bool is_polynomial() const { return den_.degree() == 0; }
  /// Degree of the map P^1 -> P^1.
  int degree() const { return std::max(num_.degree(), den_.degree()); }
  std::optional<F> constant_value() const {
    if (!is_constant()) return std::nullopt;
    return num_.coeff(0);
  }

  /// Value at a finite point; nullopt at a pole.
  std::optional<F> at(const F& x) const {
    F d = den_(x);
    if (heunpull::is_zero(d)) return std::nullopt;
    return num_(x) / d;
  }

  RationalFunction operator-() const { return RationalFunction(-num_, den_, raw_tag{}); }
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw DomainError("rational function division by zero");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
  }
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  RationalFunction pow(int e) const {
    if (e < 0) return RationalFunction(F(Rational(1))) / pow(-e);
    return RationalFunction(num_.pow(e), den_.pow(e), raw_tag{});
  }
  RationalFunction derivative() const {
    return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
  }

  /// this(inner(x)), computed homogeneously so no intermediate fractions appear.
  RationalFunction compose(const RationalFunction& inner) const {
    const int n = std::max(num_.degree(), den_.degree());
    if (n <= 0) return *this;
    auto homog = [&](const Polynomial<F>& p) {
      // sum p_i * N^i * D^(n-i)
      Polynomial<F> acc;
      Polynomial<F> npow(F(Rational(1)));
      std::vector<Polynomial<F>> dpow(static_cast<std::size_t>(n) + 1);
      dpow[0] = Polynomial<F>(F(Rational(1)));
      for (int i = 1; i <= n; ++i) dpow[static_cast<std::size_t>(i)] = dpow[static_cast<std::size_t>(i) - 1] * inner.den_;
      for (int i = 0; i <= n; ++i) {
        if (!heunpull::is_zero(p.coeff(i))) acc += (npow * dpow[static_cast<std::size_t>(n - i)]).scaled(p.coeff(i));
        npow *= inner.num_;
      }
      return acc;
    };
    return RationalFunction(homog(num_), homog(den_));
  }

  std::string to_string(const std::string& var = "x") const {
    if (den_.degree() == 0) return num_.to_string(var);
    return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
  }

 private:
  struct raw_tag {};
  RationalFunction(Polynomial<F> num, Polynomial<F> den, raw_tag) : num_(std::move(num)), den_(std::move(den)) {}

  void normalize() {
    if (den_.is_zero()) throw DomainError("rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = Polynomial<F>(F(Rational(1)));
      return;
    }
    Polynomial<F> g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
    F lc = den_.leading();
    if (!(lc == F(Rational(1)))) {
      F inv = F(Rational(1)) / lc;
      num_ = num_.scaled(inv);
      den_ = den_.scaled(inv);
    }
  }

  Polynomial<F> num_;
  Polynomial<F> den_;
};

template <Field F>
std::ostream& operator<<(std::ostream& os, const RationalFunction<F>& f) {
  return os << f.to_string();
}

}  // namespace heunpull
