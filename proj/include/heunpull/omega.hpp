#pragma once

#include <complex>
#include <ostream>
#include <string>

#include "heunpull/rational.hpp"

namespace heunpull {

/// Element re + om*w of Q(w), where w^2 + w + 1 = 0.
class OmegaRational {
 public:
  OmegaRational() = default;
  template <std::integral I>
  OmegaRational(I n) : re_(n) {}                      // NOLINT(google-explicit-constructor)
  OmegaRational(Rational re) : re_(std::move(re)) {}  // NOLINT(google-explicit-constructor)
  OmegaRational(Rational re, Rational om) : re_(std::move(re)), om_(std::move(om)) {}

  static OmegaRational omega() { return {Rational(0), Rational(1)}; }

  const Rational& re() const { return re_; }
  const Rational& om() const { return om_; }
  bool is_rational() const { return om_.is_zero(); }
  bool is_zero() const { return re_.is_zero() && om_.is_zero(); }

  OmegaRational operator-() const { return {-re_, -om_}; }
  OmegaRational& operator+=(const OmegaRational& o) {
    re_ += o.re_;
    om_ += o.om_;
    return *this;
  }
  OmegaRational& operator-=(const OmegaRational& o) {
    re_ -= o.re_;
    om_ -= o.om_;
    return *this;
  }
  OmegaRational& operator*=(const OmegaRational& o);
  OmegaRational& operator/=(const OmegaRational& o) { return *this *= o.inverse(); }

  friend OmegaRational operator+(OmegaRational a, const OmegaRational& b) { return a += b; }
  friend OmegaRational operator-(OmegaRational a, const OmegaRational& b) { return a -= b; }
  friend OmegaRational operator*(OmegaRational a, const OmegaRational& b) { return a *= b; }
  friend OmegaRational operator/(OmegaRational a, const OmegaRational& b) { return a /= b; }
  friend bool operator==(const OmegaRational& a, const OmegaRational& b) {
    return a.re_ == b.re_ && a.om_ == b.om_;
  }

  /// Galois conjugate w -> w^2.
  OmegaRational conjugate() const { return {re_ - om_, -om_}; }
  /// Field norm re^2 - re*om + om^2.
  Rational norm() const { return re_ * re_ - re_ * om_ + om_ * om_; }
  OmegaRational inverse() const;
  OmegaRational pow(long e) const;
  std::string to_string() const;

 private:
  Rational re_;
  Rational om_;
};

std::ostream& operator<<(std::ostream& os, const OmegaRational& z);

inline bool is_zero(const OmegaRational& z) { return z.is_zero(); }
inline std::string to_string(const OmegaRational& z) { return z.to_string(); }
std::complex<long double> to_complex(const OmegaRational& z);
inline bool canonical_less(const OmegaRational& a, const OmegaRational& b) {
  if (a.re() != b.re()) return a.re() < b.re();
  return a.om() < b.om();
}

}  // namespace heunpull
