#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "heunpull/field.hpp"

namespace heunpull {

/// Dense univariate polynomial; coeffs()[i] is the coefficient of x^i.
/// The zero polynomial has no coefficients and degree -1.
template <Field F>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(F constant) {  // NOLINT(google-explicit-constructor)
    if (!heunpull::is_zero(constant)) c_.push_back(std::move(constant));
  }

  static Polynomial x() { return Polynomial(std::vector<F>{F(Rational(0)), F(Rational(1))}); }
  static Polynomial monomial(F c, int degree) {
    std::vector<F> v(static_cast<std::size_t>(degree) + 1, F(Rational(0)));
    v.back() = std::move(c);
    return Polynomial(std::move(v));
  }
  /// (x - root)
  static Polynomial linear_root(const F& root) { return Polynomial(std::vector<F>{-root, F(Rational(1))}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<F>& coeffs() const { return c_; }
  F coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return F(Rational(0));
    return c_[static_cast<std::size_t>(i)];
  }
  F leading() const { return c_.empty() ? F(Rational(0)) : c_.back(); }
  /// Lowest power of x with nonzero coefficient (-1 for zero).
  int valuation() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!heunpull::is_zero(c_[i])) return static_cast<int>(i);
    return -1;
  }

  F operator()(const F& x) const {
    F acc(Rational(0));
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<F> v(std::max(a.c_.size(), b.c_.size()), F(Rational(0)));
    for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] = a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] = v[i] + b.c_[i];
    return Polynomial(std::move(v));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<F> v(a.c_.size() + b.c_.size() - 1, F(Rational(0)));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (heunpull::is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(v));
  }
  Polynomial scaled(const F& s) const {
    Polynomial r = *this;
    for (auto& v : r.c_) v = v * s;
    r.trim();
    return r;
  }
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  Polynomial pow(int e) const {
    Polynomial result(F(Rational(1))), base = *this;
    while (e > 0) {
      if (e & 1) result *= base;
      base *= base;
      e >>= 1;
    }
    return result;
  }

  /// Euclidean division: *this = q*d + r with deg r < deg d.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
    if (d.is_zero()) throw DomainError("polynomial division by zero");
    if (degree() < d.degree()) return {Polynomial(), *this};
    std::vector<F> rem = c_;
    std::vector<F> quo(c_.size() - d.c_.size() + 1, F(Rational(0)));
    const F inv_lead = F(Rational(1)) / d.leading();
    for (int i = static_cast<int>(quo.size()) - 1; i >= 0; --i) {
      const auto top = static_cast<std::size_t>(i) + d.c_.size() - 1;
      F f = rem[top] * inv_lead;
      quo[static_cast<std::size_t>(i)] = f;
      if (heunpull::is_zero(f)) continue;
      for (std::size_t j = 0; j < d.c_.size(); ++j) rem[static_cast<std::size_t>(i) + j] -= f * d.c_[j];
    }
    return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
  }
  Polynomial operator/(const Polynomial& d) const { return divmod(d).first; }
  Polynomial operator%(const Polynomial& d) const { return divmod(d).second; }
  bool divisible_by(const Polynomial& d) const { return divmod(d).second.is_zero(); }

  Polynomial monic() const {
    if (is_zero()) return *this;
    return scaled(F(Rational(1)) / leading());
  }
  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<F> v(c_.size() - 1, F(Rational(0)));
    for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * F(Rational(static_cast<long>(i)));
    return Polynomial(std::move(v));
  }
  /// p(q(x))
  Polynomial compose(const Polynomial& q) const {
    Polynomial acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * q + Polynomial(*it);
    return acc;
  }
  /// x^deg * p(1/x) with the given formal degree.
  Polynomial reversed(int formal_degree) const {
    std::vector<F> v(static_cast<std::size_t>(formal_degree) + 1, F(Rational(0)));
    for (int i = 0; i <= degree(); ++i) v[static_cast<std::size_t>(formal_degree - i)] = c_[static_cast<std::size_t>(i)];
    return Polynomial(std::move(v));
  }
  /// Divide out x^k (k must not exceed the valuation).
  Polynomial shift_down(int k) const {
    if (k <= 0) return *this;
    std::vector<F> v(c_.begin() + k, c_.end());
    return Polynomial(std::move(v));
  }

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim() {
    while (!c_.empty() && heunpull::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<F> c_;
};

template <Field F>
Polynomial<F> gcd(Polynomial<F> a, Polynomial<F> b) {
  while (!b.is_zero()) {
    auto r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Yun's square-free decomposition: returns (m, P_m) with p = lc * prod P_m^m,
/// each P_m monic, square-free, pairwise coprime, nonconstant.
template <Field F>
std::vector<std::pair<int, Polynomial<F>>> squarefree_decomposition(const Polynomial<F>& p) {
  std::vector<std::pair<int, Polynomial<F>>> out;
  if (p.degree() < 1) return out;
  Polynomial<F> a = p.monic();
  Polynomial<F> b = a.derivative();
  Polynomial<F> c = gcd(a, b);
  Polynomial<F> w = a / c;
  Polynomial<F> y = b / c;
  Polynomial<F> z = y - w.derivative();
  int i = 1;
  while (w.degree() >= 1) {
    Polynomial<F> g = gcd(w, z);
    if (g.degree() >= 1) out.emplace_back(i, g);
    w = w / g;
    y = z / g;
    z = y - w.derivative();
    ++i;
  }
  return out;
}

template <Field F>
Polynomial<F> squarefree_part(const Polynomial<F>& p) {
  Polynomial<F> r(F(Rational(1)));
  for (auto& [m, f] : squarefree_decomposition(p)) r *= f;
  return r;
}

/// Determinant by Gaussian elimination over the field.
template <Field F>
F determinant(std::vector<std::vector<F>> m) {
  const std::size_t n = m.size();
  F det(Rational(1));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && is_zero(m[piv][col])) ++piv;
    if (piv == n) return F(Rational(0));
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det = det * m[col][col];
    const F inv = F(Rational(1)) / m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (is_zero(m[r][col])) continue;
      F f = m[r][col] * inv;
      for (std::size_t k = col; k < n; ++k) m[r][k] = m[r][k] - f * m[col][k];
    }
  }
  return det;
}

/// Sylvester resultant with formal degrees (leading coefficients may vanish).
template <Field F>
F resultant(const Polynomial<F>& p, const Polynomial<F>& q, int deg_p, int deg_q) {
  const int n = deg_p + deg_q;
  if (n == 0) return F(Rational(1));
  std::vector<std::vector<F>> m(static_cast<std::size_t>(n), std::vector<F>(static_cast<std::size_t>(n), F(Rational(0))));
  for (int r = 0; r < deg_q; ++r)
    for (int i = 0; i <= deg_p; ++i) m[r][r + deg_p - i] = p.coeff(i);
  for (int r = 0; r < deg_p; ++r)
    for (int i = 0; i <= deg_q; ++i) m[deg_q + r][r + deg_q - i] = q.coeff(i);
  return determinant(std::move(m));
}

template <Field F>
F resultant(const Polynomial<F>& p, const Polynomial<F>& q) {
  return resultant(p, q, std::max(p.degree(), 0), std::max(q.degree(), 0));
}

namespace detail {
inline std::string coeff_term(const std::string& c, int power, const std::string& var) {
  std::string mono = power == 0 ? "" : (power == 1 ? var : var + "^" + std::to_string(power));
  if (power == 0) return c;
  if (c == "1") return mono;
  if (c == "-1") return "-" + mono;
  bool compound = c.find_first_of("+ ", 1) != std::string::npos;
  return (compound ? "(" + c + ")" : c) + "*" + mono;
}
}  // namespace detail

template <Field F>
std::string Polynomial<F>::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const F& c = c_[static_cast<std::size_t>(i)];
    if (heunpull::is_zero(c)) continue;
    std::string term = detail::coeff_term(heunpull::to_string(c), i, var);
    if (out.empty()) {
      out = term;
    } else if (term.front() == '-') {
      out += " - " + term.substr(1);
    } else {
      out += " + " + term;
    }
  }
  return out;
}

template <Field F>
std::ostream& operator<<(std::ostream& os, const Polynomial<F>& p) {
  return os << p.to_string();
}

/// Coefficient-wise embedding Q[x] -> F[x].
template <Field F>
Polynomial<F> embed(const Polynomial<Rational>& p) {
  std::vector<F> v;
  v.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) v.emplace_back(c);
  return Polynomial<F>(std::move(v));
}

}  // namespace heunpull
