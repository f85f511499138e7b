#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "heunpull/fuchsian.hpp"
#include "heunpull/roots.hpp"

namespace heunpull {

/// factor(x)^exponent; factor is normalized to factor(0) = 1, or is a power of x.
template <Field F>
struct PrefactorFactor {
  Polynomial<F> base;
  F exponent;
};

template <Field F>
struct PullbackSpec {
  RationalFunction<F> phi;
  std::vector<PrefactorFactor<F>> theta;
  RiemannScheme<F> source;
};

enum class Classification { kNonsingular, kIrrelevant, kRelevant, kApparentCandidate };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::kNonsingular: return "nonsingular";
    case Classification::kIrrelevant: return "irrelevant";
    case Classification::kRelevant: return "relevant";
    case Classification::kApparentCandidate: return "apparent-candidate";
  }
  return "?";
}

template <Field F>
struct SingularityReport {
  std::optional<F> location;  // nullopt: x = infinity
  std::optional<F> image;     // nullopt: z = infinity
  int index = 1;
  F first, second;
  Classification classification = Classification::kRelevant;
  /// Irrelevance relies on the source point being non-logarithmic (not automatic).
  bool assumes_nonlogarithmic = false;
  /// Nonconstant when the report stands for all roots of this polynomial (points outside F).
  Polynomial<F> conjugates;

  bool algebraic() const { return conjugates.degree() >= 1; }
  F difference() const { return second - first; }
  bool is_relevant() const {
    return classification == Classification::kRelevant || classification == Classification::kApparentCandidate;
  }
};

/// A point of a fiber: location (nullopt = infinity) and branching index.
template <Field F>
struct FiberPoint {
  std::optional<F> location;
  int index;
  /// Nonconstant: the point is any root of this irreducible-over-F part.
  Polynomial<F> conjugates = Polynomial<F>();

  bool algebraic() const { return conjugates.degree() >= 1; }
};

namespace detail {

template <Field F>
Polynomial<F> fiber_polynomial(const RationalFunction<F>& phi, const std::optional<F>& z0) {
  if (!z0) return phi.den();
  return phi.num() - phi.den().scaled(*z0);
}

/// Multiplicity of x = infinity in the fiber above z0 (0 if not there).
template <Field F>
int infinity_multiplicity(const RationalFunction<F>& phi, const std::optional<F>& z0) {
  const int d = phi.degree();
  return d - fiber_polynomial(phi, z0).degree();
}

inline std::string location_string(const auto& loc) { return loc ? to_string(*loc) : std::string("infinity"); }

/// Distinct roots of poly with multiplicity; roots outside F come back as conjugate groups.
template <Field F>
std::vector<FiberPoint<F>> split_points(const Polynomial<F>& poly) {
  std::vector<FiberPoint<F>> out;
  if (poly.degree() < 1) return out;
  for (const auto& [m, f] : squarefree_decomposition(poly)) {
    auto split = roots_in_field(f);
    for (const auto& [r, k] : split.roots) out.push_back({r, m * k});
    if (split.remainder.degree() >= 1) out.push_back({std::nullopt, m, split.remainder.monic()});
  }
  return out;
}

template <Field F>
void sort_points(std::vector<FiberPoint<F>>& pts) {
  auto rank = [](const FiberPoint<F>& p) { return p.algebraic() ? 2 : (p.location ? 0 : 1); };
  std::sort(pts.begin(), pts.end(), [&](const FiberPoint<F>& a, const FiberPoint<F>& b) {
    if (rank(a) != rank(b)) return rank(a) < rank(b);
    if (rank(a) == 0) return canonical_less(*a.location, *b.location);
    if (rank(a) == 2) return a.conjugates.to_string() < b.conjugates.to_string();
    return false;
  });
}

}  // namespace detail

/// Points above z0 with branching indices; points outside F are grouped by conjugacy.
template <Field F>
std::vector<FiberPoint<F>> fiber_points(const RationalFunction<F>& phi, const std::optional<F>& z0) {
  if (phi.degree() < 1) throw DomainError("covering must be nonconstant");
  auto out = detail::split_points(detail::fiber_polynomial(phi, z0));
  if (int m = detail::infinity_multiplicity(phi, z0); m > 0) out.push_back({std::nullopt, m});
  detail::sort_points(out);
  return out;
}

/// Points above z0 with branching indices. Throws UnsupportedError if the fiber
/// does not split over F.
template <Field F>
std::vector<FiberPoint<F>> fiber(const RationalFunction<F>& phi, const std::optional<F>& z0) {
  auto out = fiber_points(phi, z0);
  for (const auto& p : out)
    if (p.algebraic())
      throw UnsupportedError("fiber above z = " + detail::location_string(z0) + " does not split over " +
                             FieldTraits<F>::name + "; irreducible factor " + p.conjugates.to_string());
  return out;
}

/// Multiplicity partition above z0, without factoring (from the square-free decomposition).
template <Field F>
std::vector<int> fiber_partition(const RationalFunction<F>& phi, const std::optional<F>& z0) {
  std::vector<int> parts;
  const auto poly = detail::fiber_polynomial(phi, z0);
  if (poly.degree() >= 1)
    for (const auto& [m, f] : squarefree_decomposition(poly))
      for (int i = 0; i < f.degree(); ++i) parts.push_back(m);
  if (int m = detail::infinity_multiplicity(phi, z0); m > 0) parts.push_back(m);
  std::sort(parts.rbegin(), parts.rend());
  return parts;
}

/// Ramification not accounted for by the given fibers: (point, index) pairs.
template <Field F>
std::vector<FiberPoint<F>> outside_branch_points(const RationalFunction<F>& phi,
                                                 const std::vector<std::optional<F>>& values) {
  const int d = phi.degree();
  Polynomial<F> w = phi.num().derivative() * phi.den() - phi.num() * phi.den().derivative();
  int infinity_ramification = 2 * d - 2 - w.degree();
  for (const auto& z0 : values) {
    const auto poly = detail::fiber_polynomial(phi, z0);
    if (poly.degree() >= 1)
      for (const auto& [m, f] : squarefree_decomposition(poly))
        if (m > 1) w = w / f.monic().pow(m - 1);
    if (int m = detail::infinity_multiplicity(phi, z0); m > 0) infinity_ramification -= m - 1;
  }
  std::vector<FiberPoint<F>> out;
  for (auto p : detail::split_points(w)) {
    p.index += 1;
    out.push_back(p);
  }
  if (infinity_ramification > 0) out.push_back({std::nullopt, infinity_ramification + 1});
  detail::sort_points(out);
  return out;
}

/// Local exponent of the prefactor at a point.
template <Field F>
F prefactor_exponent_at(const std::vector<PrefactorFactor<F>>& theta, const std::optional<F>& x0) {
  F g(Rational(0));
  for (const auto& f : theta) {
    if (!x0) {
      g = g - F(Rational(f.base.degree())) * f.exponent;
      continue;
    }
    Polynomial<F> b = f.base;
    int mult = 0;
    const auto lin = Polynomial<F>::linear_root(*x0);
    while (b.degree() >= 1 && is_zero(b(*x0))) {
      b = b / lin;
      ++mult;
    }
    g = g + F(Rational(mult)) * f.exponent;
  }
  return g;
}

/// Local exponent of the prefactor at each root of g (g without roots in F).
template <Field F>
F prefactor_exponent_on(const std::vector<PrefactorFactor<F>>& theta, const Polynomial<F>& g) {
  F e(Rational(0));
  for (const auto& f : theta) {
    const auto common = gcd(f.base, g);
    if (common.degree() < 1) continue;
    if (common.degree() != g.degree())
      throw UnsupportedError("prefactor factor " + f.base.to_string() + " splits the conjugate points of " +
                             g.to_string());
    Polynomial<F> b = f.base;
    int mult = 0;
    while (b.degree() >= 1 && b.divisible_by(g)) {
      b = b / g;
      ++mult;
    }
    e = e + F(Rational(mult)) * f.exponent;
  }
  return e;
}

template <Field F>
F prefactor_exponent_at(const std::vector<PrefactorFactor<F>>& theta, const FiberPoint<F>& pt) {
  return pt.algebraic() ? prefactor_exponent_on(theta, pt.conjugates) : prefactor_exponent_at(theta, pt.location);
}

/// Local exponents of the pulled-back equation at every point above the source
/// singularities, and at branch points outside them.
template <Field F>
std::vector<SingularityReport<F>> transport_exponents(const PullbackSpec<F>& spec,
                                                      bool heun_source = false) {
  std::vector<SingularityReport<F>> out;
  std::vector<std::optional<F>> values;
  const F one(Rational(1));
  for (const auto& sp : spec.source.points) {
    values.push_back(sp.location);
    const F diff = sp.second - sp.first;
    for (const auto& pt : fiber_points(spec.phi, sp.location)) {
      SingularityReport<F> r;
      r.location = pt.location;
      r.conjugates = pt.conjugates;
      r.image = sp.location;
      r.index = pt.index;
      const F k(Rational(pt.index));
      const F gamma = prefactor_exponent_at(spec.theta, pt);
      r.first = k * sp.first + gamma;
      r.second = k * sp.second + gamma;
      const F kd = k * diff;
      if (kd == one || kd == -one) {
        r.classification = Classification::kIrrelevant;
        // A hypergeometric point with difference 1/k, k >= 2, is never logarithmic.
        r.assumes_nonlogarithmic = heun_source || pt.index == 1;
      } else {
        r.classification = Classification::kRelevant;
      }
      out.push_back(std::move(r));
    }
  }
  for (const auto& pt : outside_branch_points(spec.phi, values)) {
    SingularityReport<F> r;
    r.location = pt.location;
    r.conjugates = pt.conjugates;
    r.image = pt.location ? spec.phi.at(*pt.location) : std::nullopt;
    if (pt.algebraic()) {
      r.image.reset();
    } else if (!pt.location) {
      const F lead_ratio = spec.phi.num().coeff(spec.phi.degree()) / spec.phi.den().coeff(spec.phi.degree());
      r.image = lead_ratio;
    }
    r.index = pt.index;
    const F gamma = prefactor_exponent_at(spec.theta, pt);
    r.first = gamma;
    r.second = F(Rational(pt.index)) + gamma;
    r.classification = pt.index == 1 ? Classification::kNonsingular : Classification::kApparentCandidate;
    out.push_back(std::move(r));
  }
  return out;
}

/// Number of distinct points above the given values (d + 2 for a Belyi covering over 3 values).
template <Field F>
int count_points_above(const RationalFunction<F>& phi, const std::vector<std::optional<F>>& values) {
  int n = 0;
  for (const auto& z0 : values) n += static_cast<int>(fiber_partition(phi, z0).size());
  return n;
}

/// Refuse coverings branching outside the source singular locus.
template <Field F>
void require_belyi(const RationalFunction<F>& phi, const std::vector<std::optional<F>>& values) {
  const auto extra = outside_branch_points(phi, values);
  if (extra.empty()) return;
  throw DomainError(
      "covering branches outside the singular locus (at x = " + detail::location_string(extra.front().location) +
      "); such a pull-back to Heun's equation requires one of: the source has only 2 relevant singular points "
      "(cyclic monodromy), two source exponent differences equal 1/2 (dihedral monodromy), or the source has "
      "a basis of algebraic solutions (finite monodromy)");
}

/// Prefactor that moves the chosen exponent (the first of each source pair) to 0
/// at every finite point, and irrelevant points to exponents {0, 1}.
template <Field F>
std::vector<PrefactorFactor<F>> synthesize_prefactor(const RationalFunction<F>& phi, const RiemannScheme<F>& source) {
  const F one(Rational(1));
  std::vector<std::pair<Polynomial<F>, F>> shifts;  // (normalized factor, exponent)
  for (const auto& sp : source.points) {
    const F diff = sp.second - sp.first;
    for (const auto& pt : fiber_points(phi, sp.location)) {
      if (!pt.location && !pt.algebraic()) continue;
      const F k(Rational(pt.index));
      F shift = -k * sp.first;
      if (k * diff == one || k * diff == -one) {
        const F e1 = k * sp.first, e2 = k * sp.second;
        const Rational r1 = require_rational(e1, "irrelevant exponent");
        const Rational r2 = require_rational(e2, "irrelevant exponent");
        shift = r1 < r2 ? -e1 : -e2;
      }
      if (is_zero(shift)) continue;
      if (pt.algebraic()) {
        shifts.emplace_back(pt.conjugates.scaled(one / pt.conjugates.coeff(0)), shift);
        continue;
      }
      const F root = *pt.location;
      shifts.emplace_back(is_zero(root) ? Polynomial<F>::x()
                                        : Polynomial<F>(std::vector<F>{one, -one / root}),  // 1 - x/root
                          shift);
    }
  }
  std::vector<PrefactorFactor<F>> out;
  for (const auto& [lin, e] : shifts) {
    auto it = std::find_if(out.begin(), out.end(), [&](const PrefactorFactor<F>& f) { return f.exponent == e; });
    if (it == out.end())
      out.push_back({lin, e});
    else
      it->base = it->base * lin;
  }
  return out;
}

/// Jet of prod base^exponent with each base(0) = 1.
template <Field F>
Series<F> prefactor_jet(const std::vector<PrefactorFactor<F>>& theta, int order) {
  Series<F> s = Series<F>::one(order);
  for (const auto& f : theta) {
    if (!(f.base.coeff(0) == F(Rational(1))))
      throw DomainError("prefactor base " + f.base.to_string() + " is not normalized to 1 at x = 0");
    s = s * Series<F>::from_polynomial(f.base, order).pow(require_rational(f.exponent, "prefactor exponent"));
  }
  return s;
}

/// q = c t (mu + A B lambda / C).
template <Field F>
F accessory_from_jet(const F& C, const F& A, const F& B, const F& c, const F& t, const F& lambda, const F& mu) {
  if (is_zero(C)) throw DomainError("accessory parameter undefined: target parameter C vanishes");
  return c * t * (mu + A * B * lambda / C);
}

}  // namespace heunpull
