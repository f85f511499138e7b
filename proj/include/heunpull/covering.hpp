#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "heunpull/driver.hpp"
#include "heunpull/mpoly.hpp"
#include "heunpull/pullback.hpp"

namespace heunpull {

/// Three partitions of d: the multiplicities above z = 0, z = 1 and z = infinity.
struct BranchingPattern {
  int degree = 0;
  std::array<std::vector<int>, 3> fibers;  // each sorted descending

  /// "2+1=2+1=3"; throws ParseError.
  static BranchingPattern parse(const std::string& text);
  std::string to_string() const;
  int total_points() const;
  /// Total point count d+2: the equality case for a covering branched over three points.
  bool belyi() const { return total_points() == degree + 2; }
  friend bool operator==(const BranchingPattern&, const BranchingPattern&) = default;
};

/// A candidate row: exponent differences of the source and of the pulled-back equation.
struct PatternRow {
  int k = 0;  // the 1/k exponent difference; 0 when all three are free
  std::string source;
  std::string target;
  BranchingPattern pattern;
};

/// Belyi patterns giving a Heun equation with 2 free parameters (one exponent
/// difference 1/k, middle fiber) or with 3 (no restriction, d <= 2).
std::vector<PatternRow> admissible_patterns(int max_degree, int params = 2);

/// Degree/half-point combinations passing the four-fiber count between Heun equations.
struct HeunPatternRow {
  int degree;
  int half_points;  // how many of the four source points have exponent difference 1/2
  int nonsingular_bound;
  bool lame() const { return half_points == 4; }
};
std::vector<HeunPatternRow> heun_to_heun_patterns(int max_degree);

/// Default: x=infinity and x=0 at a smallest part above infinity and above 0; x=1 at a
/// smallest remaining part, above 0 when the fiber above 1 is a single point, else
/// above 1. Other placements of x=1 are tried when the solutions leave Q(w).
/// Alternate uses largest parts throughout.
enum class Gauge { kDefault, kAlternate };
const char* to_string(Gauge g);
Gauge parse_gauge(const std::string& s);

struct CoveringSolution {
  RationalFunction<OmegaRational> phi;
  bool rational = true;
  std::string normalization;
  /// phi over Q, when all coefficients are rational.
  std::optional<RationalFunction<Rational>> rational_phi() const;
};

struct CoveringSearch {
  BranchingPattern pattern;
  Gauge gauge = Gauge::kDefault;
  std::string field = "q";  // smallest field tried that held every solution
  std::string normalization;
  std::vector<CoveringSolution> solutions;
  /// Möbius class of each solution (0-based), and the number of classes.
  std::vector<int> mobius_class;
  int class_count = 0;
  /// Witness when solutions is empty.
  std::string certificate;
  int unknowns = 0;
  int equations = 0;
  bool exists() const { return !solutions.empty(); }
};

/// All coverings with the pattern in the fixed gauge. An empty result carries the
/// certificate that the nondegenerate ansatz generates the unit ideal.
CoveringSearch solve_covering(const BranchingPattern& p, Gauge gauge = Gauge::kDefault);

/// True iff the multiplicities above 0, 1, infinity are the pattern's partitions,
/// up to permuting the three critical values (strict: in the given order).
template <Field F>
bool verify_branching(const RationalFunction<F>& phi, const BranchingPattern& p, bool strict = false) {
  if (phi.degree() != p.degree) return false;
  std::array<std::vector<int>, 3> got = {fiber_partition(phi, std::optional<F>(F(Rational(0)))),
                                         fiber_partition(phi, std::optional<F>(F(Rational(1)))),
                                         fiber_partition(phi, std::optional<F>())};
  if (strict) return got == p.fibers;
  std::array<int, 3> perm = {0, 1, 2};
  do {
    if (got[0] == p.fibers[static_cast<std::size_t>(perm[0])] && got[1] == p.fibers[static_cast<std::size_t>(perm[1])] &&
        got[2] == p.fibers[static_cast<std::size_t>(perm[2])])
      return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

namespace detail {

/// Möbius map sending 0, 1, infinity to a, b, c (nullopt = infinity).
template <Field F>
RationalFunction<F> mobius_through(const std::optional<F>& a, const std::optional<F>& b, const std::optional<F>& c) {
  const F one(Rational(1));
  const Polynomial<F> x = Polynomial<F>::x();
  if (!a) return RationalFunction<F>(x.scaled(*c) + Polynomial<F>(*b - *c), x);
  if (!b) return RationalFunction<F>(x.scaled(*c) - Polynomial<F>(*a), x - Polynomial<F>(one));
  if (!c) return RationalFunction<F>(x.scaled(*b - *a) + Polynomial<F>(*a));
  return RationalFunction<F>(x.scaled(*c * (*b - *a)) + Polynomial<F>(*a * (*c - *b)),
                             x.scaled(*b - *a) + Polynomial<F>(*c - *b));
}

template <Field F>
std::optional<F> value_at(const RationalFunction<F>& f, const std::optional<F>& x) {
  if (x) return f.at(*x);
  if (f.num().degree() > f.den().degree()) return std::nullopt;
  if (f.num().degree() < f.den().degree()) return F(Rational(0));
  return f.num().leading() / f.den().leading();
}

template <Field F>
int index_at(const RationalFunction<F>& f, const std::optional<F>& x) {
  for (const auto& p : fiber_points(f, value_at(f, x)))
    if (!p.algebraic() && p.location == x) return p.index;
  return 0;
}

/// F-rational points of f above z with branching index m.
template <Field F>
std::vector<std::optional<F>> points_with_index(const RationalFunction<F>& f, const std::optional<F>& z, int m) {
  std::vector<std::optional<F>> out;
  for (const auto& p : fiber_points(f, z))
    if (!p.algebraic() && p.index == m) out.push_back(p.location);
  return out;
}

/// Basis of the nullspace of an r x n matrix.
template <Field F>
std::vector<std::vector<F>> nullspace(std::vector<std::vector<F>> m, std::size_t n) {
  std::vector<int> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m.size(); ++col) {
    std::size_t p = row;
    while (p < m.size() && is_zero(m[p][col])) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    const F inv = F(Rational(1)) / m[row][col];
    for (auto& v : m[row]) v = v * inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || is_zero(m[r][col])) continue;
      const F f = m[r][col];
      for (std::size_t k = 0; k < n; ++k) m[r][k] = m[r][k] - f * m[row][k];
    }
    pivot_col.push_back(static_cast<int>(col));
    ++row;
  }
  std::vector<std::vector<F>> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (std::find(pivot_col.begin(), pivot_col.end(), static_cast<int>(free)) != pivot_col.end()) continue;
    std::vector<F> v(n, F(Rational(0)));
    v[free] = F(Rational(1));
    for (std::size_t r = 0; r < pivot_col.size(); ++r) v[static_cast<std::size_t>(pivot_col[r])] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Numerator of f(x) - f(y) in F[x, y].
template <Field F>
MPoly<F> difference_numerator(const RationalFunction<F>& f) {
  auto nx = MPoly<F>::from_univariate(2, 0, f.num());
  auto ny = MPoly<F>::from_univariate(2, 1, f.num());
  auto dx = MPoly<F>::from_univariate(2, 0, f.den());
  auto dy = MPoly<F>::from_univariate(2, 1, f.den());
  return nx * dy - ny * dx;
}

/// f is a function of h: h(x) - h(y) divides f(x) - f(y).
template <Field F>
bool subfield_of(const RationalFunction<F>& h, const RationalFunction<F>& f) {
  auto p = difference_numerator(h);
  return normal_form(difference_numerator(f), {p}).is_zero();
}

/// Monic divisors of degree <= e of a polynomial, from its F-rational roots and
/// its non-split square-free pieces.
template <Field F>
std::vector<Polynomial<F>> small_divisors(const Polynomial<F>& p, int e) {
  std::vector<std::pair<Polynomial<F>, int>> atoms;
  if (p.degree() >= 1) {
    auto split = roots_in_field(p);
    for (const auto& [r, m] : split.roots) atoms.emplace_back(Polynomial<F>::linear_root(r), m);
    if (split.remainder.degree() >= 1)
      for (const auto& [m, f] : squarefree_decomposition(split.remainder)) atoms.emplace_back(f.monic(), m);
  }
  std::vector<Polynomial<F>> out = {Polynomial<F>(F(Rational(1)))};
  for (const auto& [f, m] : atoms) {
    std::vector<Polynomial<F>> next;
    for (const auto& d : out) {
      Polynomial<F> acc = d;
      for (int k = 0; k <= m && acc.degree() <= e; ++k) {
        next.push_back(acc);
        acc *= f;
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace detail

/// A Möbius map mu with f = g(mu(x)), if one sends 0, 1, infinity to F-rational points.
template <Field F>
std::optional<RationalFunction<F>> mobius_equivalence(const RationalFunction<F>& g, const RationalFunction<F>& f) {
  if (f.degree() != g.degree()) return std::nullopt;
  const std::array<std::optional<F>, 3> marks = {F(Rational(0)), F(Rational(1)), std::nullopt};
  std::array<std::vector<std::optional<F>>, 3> cand;
  for (std::size_t i = 0; i < 3; ++i)
    cand[i] = detail::points_with_index(g, detail::value_at(f, marks[i]), detail::index_at(f, marks[i]));
  for (const auto& a : cand[0])
    for (const auto& b : cand[1]) {
      if (a == b) continue;
      for (const auto& c : cand[2]) {
        if (c == a || c == b) continue;
        auto mu = detail::mobius_through(a, b, c);
        if (g.compose(mu) == f) return mu;
      }
    }
  return std::nullopt;
}

/// phi = outer(inner(x)) with 1 < deg inner < deg phi; inner normalized so that
/// inner(0) = 0 with monic numerator.
template <Field F>
struct Decomposition {
  RationalFunction<F> outer;
  RationalFunction<F> inner;
};

/// All decompositions up to Möbius maps between the factors, found from inner maps
/// whose fibers above two points lie in fibers of phi above 0, 1, infinity.
template <Field F>
std::vector<Decomposition<F>> decompose_covering(const RationalFunction<F>& phi) {
  const int d = phi.degree();
  if (d < 1) throw DomainError("covering must be nonconstant");
  std::vector<Decomposition<F>> out;
  const std::array<std::optional<F>, 3> values = {F(Rational(0)), F(Rational(1)), std::nullopt};
  const Polynomial<F> one(F(Rational(1)));
  for (int e = 2; e < d; ++e) {
    if (d % e != 0) continue;
    const int k = d / e;
    std::array<std::vector<Polynomial<F>>, 3> divs;
    for (std::size_t v = 0; v < 3; ++v) divs[v] = detail::small_divisors(detail::fiber_polynomial(phi, values[v]), e);
    std::vector<RationalFunction<F>> inners;
    for (std::size_t v1 = 0; v1 < 3; ++v1)
      for (std::size_t v2 = v1; v2 < 3; ++v2)
        for (const auto& a : divs[v1])
          for (const auto& b : divs[v2]) {
            if (std::max(a.degree(), b.degree()) != e || gcd(a, b).degree() > 0) continue;
            RationalFunction<F> h(a, b);
            if (!detail::subfield_of(h, phi)) continue;
            bool seen = false;
            for (const auto& h2 : inners)
              if (detail::subfield_of(h2, h)) seen = true;
            if (!seen) inners.push_back(h);
          }
    for (auto h : inners) {
      // Normalize: h(0) = 0, monic numerator.
      if (auto h0 = h.at(F(Rational(0))))
        h = h - RationalFunction<F>(*h0);
      else
        h = RationalFunction<F>(one) / h;
      h = h * RationalFunction<F>(F(Rational(1)) / h.num().leading());
      // Solve phi * sum q_i A^i B^(k-i) = sum p_i A^i B^(k-i) linearly.
      const auto& a = h.num();
      const auto& b = h.den();
      std::vector<Polynomial<F>> basis;
      for (int i = 0; i <= k; ++i) basis.push_back(a.pow(i) * b.pow(k - i));
      const std::size_t n = 2 * static_cast<std::size_t>(k + 1);
      std::vector<Polynomial<F>> cols;
      for (const auto& bi : basis) cols.push_back(bi * phi.den());
      for (const auto& bi : basis) cols.push_back(-(bi * phi.num()));
      int rows = 0;
      for (const auto& c : cols) rows = std::max(rows, c.degree() + 1);
      std::vector<std::vector<F>> m(static_cast<std::size_t>(rows), std::vector<F>(n, F(Rational(0))));
      for (std::size_t j = 0; j < n; ++j)
        for (int r = 0; r <= cols[j].degree(); ++r) m[static_cast<std::size_t>(r)][j] = cols[j].coeff(r);
      auto ns = detail::nullspace(m, n);
      if (ns.size() != 1) continue;
      std::vector<F> pn(ns[0].begin(), ns[0].begin() + k + 1);
      std::vector<F> qn(ns[0].begin() + k + 1, ns[0].end());
      Polynomial<F> gp(pn), gq(qn);
      if (gq.is_zero()) continue;
      RationalFunction<F> g(gp, gq);
      if (!(g.compose(h) == phi)) continue;
      out.push_back({g, h});
    }
  }
  return out;
}

/// One row of the re-derived classification.
struct ClassRow {
  PatternRow row;
  CoveringSearch search;
  std::vector<Decomposition<OmegaRational>> decompositions;
  std::string status;  // indecomposable, 2x2, various 2x2, no covering, fractional-linear, quadratic
};

/// Enumerate, solve and decompose every admissible pattern.
std::vector<ClassRow> classify(int params, Execution mode = Execution::kParallel);

}  // namespace heunpull
