#include "heunpull/omega.hpp"

#include <cmath>

namespace heunpull {

OmegaRational& OmegaRational::operator*=(const OmegaRational& o) {
  // (a + bw)(c + dw) = ac - bd + (ad + bc - bd) w
  Rational bd = om_ * o.om_;
  Rational re = re_ * o.re_ - bd;
  Rational om = re_ * o.om_ + om_ * o.re_ - bd;
  re_ = std::move(re);
  om_ = std::move(om);
  return *this;
}

OmegaRational OmegaRational::inverse() const {
  Rational n = norm();
  if (n.is_zero()) throw DomainError("inverse of zero in Q(w)");
  OmegaRational c = conjugate();
  return {c.re_ / n, c.om_ / n};
}

OmegaRational OmegaRational::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  OmegaRational result(1), base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

std::string OmegaRational::to_string() const {
  if (om_.is_zero()) return re_.to_string();
  std::string w = om_.is_one() ? "w" : (om_ == Rational(-1) ? "-w" : om_.to_string() + "*w");
  if (re_.is_zero()) return w;
  if (w.front() == '-') return re_.to_string() + " - " + w.substr(1);
  return re_.to_string() + " + " + w;
}

std::ostream& operator<<(std::ostream& os, const OmegaRational& z) { return os << z.to_string(); }

std::complex<long double> to_complex(const OmegaRational& z) {
  const long double half_sqrt3 = std::sqrt(3.0L) / 2.0L;
  long double om = z.om().to_long_double();
  return {z.re().to_long_double() - om / 2.0L, om * half_sqrt3};
}

}  // namespace heunpull
