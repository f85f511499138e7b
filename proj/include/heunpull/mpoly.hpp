#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heunpull/roots.hpp"

namespace heunpull {

/// Exponent vector; lexicographic order with x_0 > x_1 > ... > x_{n-1}.
using Monomial = std::vector<int>;

/// Sparse multivariate polynomial over F in a fixed number of variables.
template <Field F>
class MPoly {
 public:
  using Terms = std::map<Monomial, F, std::greater<>>;

  MPoly() = default;
  explicit MPoly(int nvars) : n_(nvars) {}
  MPoly(int nvars, const F& c) : n_(nvars) {
    if (!heunpull::is_zero(c)) t_.emplace(Monomial(static_cast<std::size_t>(nvars), 0), c);
  }
  static MPoly var(int nvars, int i) {
    MPoly p(nvars);
    Monomial m(static_cast<std::size_t>(nvars), 0);
    m[static_cast<std::size_t>(i)] = 1;
    p.t_.emplace(std::move(m), F(Rational(1)));
    return p;
  }

  int nvars() const { return n_; }
  bool is_zero() const { return t_.empty(); }
  const Terms& terms() const { return t_; }
  const Monomial& leading_monomial() const { return t_.begin()->first; }
  const F& leading_coeff() const { return t_.begin()->second; }
  bool is_nonzero_constant() const {
    return t_.size() == 1 && std::all_of(leading_monomial().begin(), leading_monomial().end(), [](int e) { return e == 0; });
  }

  void add_term(const Monomial& m, const F& c) {
    if (heunpull::is_zero(c)) return;
    auto [it, inserted] = t_.emplace(m, c);
    if (!inserted) {
      it->second = it->second + c;
      if (heunpull::is_zero(it->second)) t_.erase(it);
    }
  }

  friend MPoly operator+(MPoly a, const MPoly& b) {
    if (a.n_ == 0) a.n_ = b.n_;
    for (const auto& [m, c] : b.t_) a.add_term(m, c);
    return a;
  }
  MPoly operator-() const {
    MPoly r = *this;
    for (auto& [m, c] : r.t_) c = -c;
    return r;
  }
  friend MPoly operator-(const MPoly& a, const MPoly& b) { return a + (-b); }
  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    MPoly r(std::max(a.n_, b.n_));
    for (const auto& [ma, ca] : a.t_)
      for (const auto& [mb, cb] : b.t_) r.add_term(mono_mul(ma, mb), ca * cb);
    return r;
  }
  MPoly scaled(const F& s) const {
    MPoly r(n_);
    if (heunpull::is_zero(s)) return r;
    for (const auto& [m, c] : t_) r.t_.emplace(m, c * s);
    return r;
  }
  MPoly times_term(const Monomial& m, const F& s) const {
    MPoly r(n_);
    for (const auto& [mm, c] : t_) r.t_.emplace(mono_mul(mm, m), c * s);
    return r;
  }
  MPoly monic() const { return is_zero() ? *this : scaled(F(Rational(1)) / leading_coeff()); }
  friend bool operator==(const MPoly& a, const MPoly& b) { return a.t_ == b.t_; }

  /// Variables with a positive exponent somewhere.
  std::vector<int> support() const {
    std::vector<int> used;
    for (int i = 0; i < n_; ++i)
      for (const auto& [m, c] : t_)
        if (m[static_cast<std::size_t>(i)] > 0) {
          used.push_back(i);
          break;
        }
    return used;
  }

  /// Substitute x_var := value.
  MPoly substitute(int var, const F& value) const {
    MPoly r(n_);
    for (const auto& [m, c] : t_) {
      Monomial mm = m;
      const int e = mm[static_cast<std::size_t>(var)];
      mm[static_cast<std::size_t>(var)] = 0;
      r.add_term(mm, c * field_pow(value, e));
    }
    return r;
  }

  /// As a univariate polynomial in x_var; nullopt if other variables occur.
  std::optional<Polynomial<F>> as_univariate(int var) const {
    std::vector<F> coeffs;
    for (const auto& [m, c] : t_) {
      for (int i = 0; i < n_; ++i)
        if (i != var && m[static_cast<std::size_t>(i)] != 0) return std::nullopt;
      const auto e = static_cast<std::size_t>(m[static_cast<std::size_t>(var)]);
      if (coeffs.size() <= e) coeffs.resize(e + 1, F(Rational(0)));
      coeffs[e] = c;
    }
    return Polynomial<F>(std::move(coeffs));
  }

  /// Univariate polynomial in x_var with MPoly coefficients expanded: p(x_var).
  static MPoly from_univariate(int nvars, int var, const Polynomial<F>& p) {
    MPoly r(nvars);
    for (int i = 0; i <= p.degree(); ++i) {
      Monomial m(static_cast<std::size_t>(nvars), 0);
      m[static_cast<std::size_t>(var)] = i;
      r.add_term(m, p.coeff(i));
    }
    return r;
  }

  std::string to_string(const std::vector<std::string>& names) const {
    if (t_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : t_) {
      std::string mono;
      for (int i = 0; i < n_; ++i) {
        const int e = m[static_cast<std::size_t>(i)];
        if (e == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += names[static_cast<std::size_t>(i)] + (e > 1 ? "^" + std::to_string(e) : "");
      }
      std::string cs = heunpull::to_string(c);
      std::string term = mono.empty() ? cs : detail::coeff_term(cs, 1, mono);
      if (out.empty())
        out = term;
      else if (term.front() == '-')
        out += " - " + term.substr(1);
      else
        out += " + " + term;
    }
    return out;
  }

  static Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
  }

 private:
  int n_ = 0;
  Terms t_;
};

namespace detail {

inline bool divides(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}
inline Monomial mono_lcm(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}
inline Monomial mono_div(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}
inline int total_degree(const Monomial& m) {
  int d = 0;
  for (int e : m) d += e;
  return d;
}

}  // namespace detail

/// Full reduction of p modulo the list g.
template <Field F>
MPoly<F> normal_form(MPoly<F> p, const std::vector<MPoly<F>>& g) {
  MPoly<F> rem(p.nvars());
  while (!p.is_zero()) {
    const Monomial lm = p.leading_monomial();
    const F lc = p.leading_coeff();
    bool reduced = false;
    for (const auto& gi : g) {
      if (detail::divides(gi.leading_monomial(), lm)) {
        p = p - gi.times_term(detail::mono_div(lm, gi.leading_monomial()), lc / gi.leading_coeff());
        reduced = true;
        break;
      }
    }
    if (!reduced) {
      rem.add_term(lm, lc);
      p.add_term(lm, -lc);
    }
  }
  return rem;
}

/// Reduced lex Groebner basis (Buchberger with the coprime and chain criteria).
template <Field F>
std::vector<MPoly<F>> groebner_basis(const std::vector<MPoly<F>>& input) {
  std::vector<MPoly<F>> g;
  for (const auto& p : input)
    if (!p.is_zero()) g.push_back(p.monic());
  if (g.empty()) return g;
  for (const auto& p : g)
    if (p.is_nonzero_constant()) return {MPoly<F>(p.nvars(), F(Rational(1)))};

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 1; j < g.size(); ++j)
    for (std::size_t i = 0; i < j; ++i) pairs.emplace_back(i, j);

  while (!pairs.empty()) {
    // Normal selection strategy: smallest lcm first.
    auto best = std::min_element(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
      return detail::total_degree(detail::mono_lcm(g[a.first].leading_monomial(), g[a.second].leading_monomial())) <
             detail::total_degree(detail::mono_lcm(g[b.first].leading_monomial(), g[b.second].leading_monomial()));
    });
    auto [i, j] = *best;
    pairs.erase(best);
    const Monomial& li = g[i].leading_monomial();
    const Monomial& lj = g[j].leading_monomial();
    const Monomial l = detail::mono_lcm(li, lj);
    // Coprime leading monomials: the S-polynomial reduces to zero.
    if (MPoly<F>::mono_mul(li, lj) == l) continue;
    // Chain criterion.
    bool chain = false;
    for (std::size_t k = 0; k < g.size() && !chain; ++k) {
      if (k == i || k == j || !detail::divides(g[k].leading_monomial(), l)) continue;
      auto open = [&](std::size_t a, std::size_t b) {
        auto key = std::minmax(a, b);
        return std::find(pairs.begin(), pairs.end(), std::pair<std::size_t, std::size_t>(key.first, key.second)) != pairs.end();
      };
      if (!open(i, k) && !open(j, k)) chain = true;
    }
    if (chain) continue;
    MPoly<F> s = g[i].times_term(detail::mono_div(l, li), F(Rational(1))) -
                 g[j].times_term(detail::mono_div(l, lj), F(Rational(1)));
    MPoly<F> r = normal_form(std::move(s), g);
    if (r.is_zero()) continue;
    r = r.monic();
    if (r.is_nonzero_constant()) return {r};
    g.push_back(std::move(r));
    for (std::size_t k = 0; k + 1 < g.size(); ++k) pairs.emplace_back(k, g.size() - 1);
  }

  // Minimalize, then inter-reduce.
  std::vector<MPoly<F>> minimal;
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < g.size() && !redundant; ++j) {
      if (i == j) continue;
      if (detail::divides(g[j].leading_monomial(), g[i].leading_monomial()) &&
          (g[j].leading_monomial() != g[i].leading_monomial() || j < i))
        redundant = true;
    }
    if (!redundant) minimal.push_back(g[i]);
  }
  std::vector<MPoly<F>> reduced;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<MPoly<F>> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    MPoly<F> lead(minimal[i].nvars());
    lead.add_term(minimal[i].leading_monomial(), minimal[i].leading_coeff());
    MPoly<F> tail = minimal[i] - lead;
    reduced.push_back((lead + normal_form(tail, others)).monic());
  }
  std::sort(reduced.begin(), reduced.end(),
            [](const MPoly<F>& a, const MPoly<F>& b) { return a.leading_monomial() > b.leading_monomial(); });
  return reduced;
}

template <Field F>
bool is_unit_ideal(const std::vector<MPoly<F>>& basis) {
  return basis.size() == 1 && basis.front().is_nonzero_constant();
}

enum class SystemStatus { kInconsistent, kSolved, kPositiveDimensional };

template <Field F>
struct SystemSolution {
  SystemStatus status = SystemStatus::kSolved;
  /// Solutions with every coordinate in F.
  std::vector<std::vector<F>> points;
  /// Some eliminant had roots outside F (solutions exist over the closure).
  bool roots_outside_field = false;
  /// Groebner basis of the full system (the certificate when inconsistent).
  std::vector<MPoly<F>> basis;
};

namespace detail {

template <Field F>
void solve_recursive(const std::vector<MPoly<F>>& system, int var, std::vector<F>& assignment,
                     SystemSolution<F>& out) {
  if (var < 0) {
    out.points.push_back(assignment);
    return;
  }
  auto g = groebner_basis(system);
  if (is_unit_ideal(g)) return;
  // Variables still present must be eliminable from the last one upwards.
  std::optional<Polynomial<F>> eliminant;
  bool any_var = false;
  for (const auto& p : g) {
    if (!p.support().empty()) any_var = true;
    auto u = p.as_univariate(var);
    if (u && u->degree() >= 1 && (!eliminant || u->degree() < eliminant->degree())) eliminant = u;
  }
  if (!eliminant) {
    bool var_free = true;
    for (const auto& p : g)
      for (int v : p.support())
        if (v == var) var_free = false;
    if (var_free && any_var) {
      out.status = SystemStatus::kPositiveDimensional;
      return;
    }
    if (!any_var) {
      // Remaining variables unconstrained.
      if (var >= 0) out.status = SystemStatus::kPositiveDimensional;
      return;
    }
    out.status = SystemStatus::kPositiveDimensional;
    return;
  }
  auto split = roots_in_field(*eliminant);
  if (split.remainder.degree() >= 1) out.roots_outside_field = true;
  for (const auto& [root, mult] : split.roots) {
    std::vector<MPoly<F>> sub;
    for (const auto& p : g) {
      auto q = p.substitute(var, root);
      if (!q.is_zero()) sub.push_back(std::move(q));
    }
    assignment[static_cast<std::size_t>(var)] = root;
    if (sub.empty()) {
      // Everything vanished: remaining variables are free unless none remain.
      if (var == 0) {
        out.points.push_back(assignment);
      } else {
        out.status = SystemStatus::kPositiveDimensional;
      }
      continue;
    }
    solve_recursive(sub, var - 1, assignment, out);
  }
}

}  // namespace detail

/// All solutions in F^n of a zero-dimensional polynomial system.
template <Field F>
SystemSolution<F> solve_system(const std::vector<MPoly<F>>& system, int nvars) {
  SystemSolution<F> out;
  out.basis = groebner_basis(system);
  if (is_unit_ideal(out.basis)) {
    out.status = SystemStatus::kInconsistent;
    return out;
  }
  std::vector<F> assignment(static_cast<std::size_t>(nvars), F(Rational(0)));
  detail::solve_recursive(out.basis, nvars - 1, assignment, out);
  return out;
}

/// Coefficient-wise embedding of a Q-polynomial system into F.
template <Field F>
MPoly<F> embed(const MPoly<Rational>& p) {
  MPoly<F> r(p.nvars());
  for (const auto& [m, c] : p.terms()) r.add_term(m, F(c));
  return r;
}

}  // namespace heunpull
