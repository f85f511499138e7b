#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "heunpull/polynomial.hpp"

namespace heunpull {

template <Field F>
struct RootSplit {
  /// Exact roots in F with multiplicity.
  std::vector<std::pair<F, int>> roots;
  /// Monic factor (possibly 1) with no roots in F; product of the rest.
  Polynomial<F> remainder;
};

namespace detail {

/// Aberth iteration on a square-free polynomial with complex coefficients.
std::vector<std::complex<long double>> numeric_roots(const std::vector<std::complex<long double>>& coeffs);

}  // namespace detail

/// Roots of p lying in F. Candidates are located numerically, recognised as
/// small-height elements of F, and accepted only after exact evaluation.
template <Field F>
RootSplit<F> roots_in_field(const Polynomial<F>& p, long max_den = 100000000) {
  RootSplit<F> out;
  out.remainder = Polynomial<F>(F(Rational(1)));
  if (p.degree() < 1) return out;
  for (auto& [mult, factor] : squarefree_decomposition(p)) {
    Polynomial<F> rest = factor;
    std::vector<std::complex<long double>> cc;
    for (const auto& c : factor.coeffs()) cc.push_back(to_complex(c));
    for (const auto& z : detail::numeric_roots(cc)) {
      if (rest.degree() < 1) break;
      auto cand = FieldTraits<F>::recognize(z, max_den);
      if (!cand) continue;
      if (!is_zero(rest(*cand))) continue;
      out.roots.emplace_back(*cand, mult);
      rest = rest / Polynomial<F>::linear_root(*cand);
    }
    out.remainder *= rest.pow(mult);
  }
  out.remainder = out.remainder.monic();
  return out;
}

}  // namespace heunpull
