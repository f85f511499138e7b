#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "heunpull/fuchsian.hpp"

namespace heunpull {

/// x -> (p x + q) / (r x + s).
template <Field F>
struct MoebiusMap {
  F p, q, r, s;

  static MoebiusMap identity() { return {F(Rational(1)), F(Rational(0)), F(Rational(0)), F(Rational(1))}; }
  F det() const { return p * s - q * r; }
  /// this(inner(x)).
  MoebiusMap compose(const MoebiusMap& in) const {
    return {p * in.p + q * in.r, p * in.q + q * in.s, r * in.p + s * in.r, r * in.q + s * in.s};
  }
  MoebiusMap inverse() const { return {s, -q, -r, p}; }
  /// Scale so the first nonzero entry is 1.
  MoebiusMap normalized() const {
    for (const F& v : {p, q, r, s})
      if (!is_zero(v)) {
        const F inv = F(Rational(1)) / v;
        return {p * inv, q * inv, r * inv, s * inv};
      }
    throw DomainError("zero matrix is not a Moebius map");
  }
  RationalFunction<F> as_function() const {
    return RationalFunction<F>(Polynomial<F>(std::vector<F>{q, p}), Polynomial<F>(std::vector<F>{s, r}));
  }
  /// Preimage of 0: nullopt means infinity.
  std::optional<F> zero_preimage() const {
    if (is_zero(p)) return std::nullopt;
    return -q / p;
  }
  std::string to_string() const {
    return "(" + heunpull::to_string(p) + "*x + " + heunpull::to_string(q) + ")/(" + heunpull::to_string(r) +
           "*x + " + heunpull::to_string(s) + ")";
  }
};

/// A power of a linear form alpha + beta x, normalized to constant term 1 or to x.
template <Field F>
struct PrefactorTerm {
  F constant, slope;
  F exponent;
};

/// theta(x) * G(params; argument(x)) with G the canonical local solution.
template <Field F, class Params>
struct SolutionRecord {
  MoebiusMap<F> argument;
  std::vector<PrefactorTerm<F>> prefactor;
  Params params;
  std::string label;
};

template <Field F>
using HeunRecord = SolutionRecord<F, HeunParams<F>>;
template <Field F>
using KummerRecord = SolutionRecord<F, HypergeometricParams<F>>;

namespace detail {

template <Field F>
void add_linear_power(std::vector<PrefactorTerm<F>>& out, F constant, F slope, const F& exponent) {
  if (is_zero(exponent) || is_zero(slope)) return;  // constants are dropped
  if (!is_zero(constant)) {
    slope = slope / constant;
    constant = F(Rational(1));
  } else {
    slope = F(Rational(1));
  }
  for (auto& t : out)
    if (t.constant == constant && t.slope == slope) {
      t.exponent = t.exponent + exponent;
      return;
    }
  out.push_back({constant, slope, exponent});
}

template <Field F>
std::vector<PrefactorTerm<F>> cleaned(std::vector<PrefactorTerm<F>> v) {
  std::erase_if(v, [](const PrefactorTerm<F>& t) { return is_zero(t.exponent); });
  return v;
}

/// Prefactor (alpha + beta y)^e pulled back along y = m(x), with m Moebius.
template <Field F>
void pull_back_term(std::vector<PrefactorTerm<F>>& out, const PrefactorTerm<F>& term, const MoebiusMap<F>& m) {
  // alpha + beta (p x + q)/(r x + s) = ((alpha r + beta p) x + alpha s + beta q) / (r x + s)
  add_linear_power(out, term.constant * m.s + term.slope * m.q, term.constant * m.r + term.slope * m.p, term.exponent);
  add_linear_power(out, m.s, m.r, -term.exponent);
}

template <Field F>
std::string canonical_pair(const F& a, const F& b) {
  return canonical_less(b, a) ? to_string(b) + "," + to_string(a) : to_string(a) + "," + to_string(b);
}

template <Field F>
std::string params_key(const HeunParams<F>& p) {
  return canonical_pair(p.a, p.b) + ";" + to_string(p.c) + ";" + to_string(p.d) + ";q=" + to_string(p.q) +
         ";t=" + to_string(p.t);
}
template <Field F>
std::string params_key(const HypergeometricParams<F>& p) {
  return canonical_pair(p.a, p.b) + ";" + to_string(p.c);
}

}  // namespace detail

/// Structural key: normalized Moebius class, (a,b)-symmetric params, prefactor multiset.
template <Field F, class Params>
std::string record_key(const SolutionRecord<F, Params>& rec) {
  const auto m = rec.argument.normalized();
  std::string key = "[" + to_string(m.p) + " " + to_string(m.q) + " " + to_string(m.r) + " " + to_string(m.s) + "]";
  key += detail::params_key(rec.params);
  std::vector<std::string> terms;
  for (const auto& t : detail::cleaned(rec.prefactor))
    terms.push_back("(" + to_string(t.constant) + "+" + to_string(t.slope) + "x)^" + to_string(t.exponent));
  std::sort(terms.begin(), terms.end());
  for (const auto& t : terms) key += "|" + t;
  return key;
}

/// A two-term identity G(p; y) = theta(y) G(p'; m(y)) used as an orbit generator.
template <Field F, class Params>
struct Generator {
  std::string name;
  std::function<Params(const Params&)> params;
  std::function<MoebiusMap<F>(const Params&)> argument;
  std::function<std::vector<PrefactorTerm<F>>(const Params&)> prefactor;
};

/// Apply a generator to the canonical function inside a record.
template <Field F, class Params>
SolutionRecord<F, Params> apply_generator(const SolutionRecord<F, Params>& rec, const Generator<F, Params>& g) {
  SolutionRecord<F, Params> out;
  out.params = g.params(rec.params);
  out.argument = g.argument(rec.params).compose(rec.argument);
  out.prefactor = rec.prefactor;
  for (const auto& term : g.prefactor(rec.params)) detail::pull_back_term(out.prefactor, term, rec.argument);
  out.prefactor = detail::cleaned(std::move(out.prefactor));
  out.label = rec.label + " . " + g.name;
  return out;
}

namespace detail {

template <Field F>
PrefactorTerm<F> one_minus(const F& scale, const F& e) {  // (1 - scale*x)^e
  return {F(Rational(1)), -scale, e};
}
template <Field F>
PrefactorTerm<F> x_power(const F& e) {
  return {F(Rational(0)), F(Rational(1)), e};
}
template <Field F>
MoebiusMap<F> moebius(F p, F q, F r, F s) {
  return {std::move(p), std::move(q), std::move(r), std::move(s)};
}
template <Field F>
HeunParams<F> swapped(HeunParams<F> p) {
  std::swap(p.a, p.b);
  return p;
}
template <Field F>
HypergeometricParams<F> swapped(HypergeometricParams<F> p) {
  std::swap(p.a, p.b);
  return p;
}

}  // namespace detail

/// The exponent interchanges at 1 and t and the permutations of {1, t, infinity},
/// each also applied with a and b exchanged.
template <Field F>
std::vector<Generator<F, HeunParams<F>>> heun_generators() {
  using P = HeunParams<F>;
  using G = Generator<F, P>;
  const F zero(Rational(0)), one(Rational(1));
  auto ident = [=](const P&) { return MoebiusMap<F>::identity(); };
  std::vector<G> base = {
      {"swap1", [=](const P& p) { return P{p.a - p.d + one, p.b - p.d + one, p.c, F(Rational(2)) - p.d, p.q - p.c * (p.d - one) * p.t, p.t}; },
       ident, [=](const P& p) { return std::vector<PrefactorTerm<F>>{detail::one_minus(one, one - p.d)}; }},
      {"swapt", [=](const P& p) { return P{p.c + p.d - p.a, p.c + p.d - p.b, p.c, p.d, p.q - p.c * (p.a + p.b - p.c - p.d), p.t}; },
       ident, [=](const P& p) { return std::vector<PrefactorTerm<F>>{detail::one_minus(one / p.t, p.c + p.d - p.a - p.b)}; }},
      {"swap1t",
       [=](const P& p) {
         return P{p.c - p.a + one, p.c - p.b + one, p.c, F(Rational(2)) - p.d,
                  p.q - p.c * (p.a + p.b - p.c - p.d + p.d * p.t - p.t), p.t};
       },
       ident,
       [=](const P& p) {
         return std::vector<PrefactorTerm<F>>{detail::one_minus(one, one - p.d),
                                              detail::one_minus(one / p.t, p.c + p.d - p.a - p.b)};
       }},
      {"perm-x/t", [=](const P& p) { return P{p.a, p.b, p.c, p.e(), p.q / p.t, one / p.t}; },
       [=](const P& p) { return detail::moebius(one, zero, zero, p.t); },
       [=](const P&) { return std::vector<PrefactorTerm<F>>{}; }},
      {"perm-x/(x-1)",
       [=](const P& p) {
         return P{p.a, p.a - p.d + one, p.c, p.a - p.b + one, (p.a * p.c * p.t - p.q) / (p.t - one), p.t / (p.t - one)};
       },
       [=](const P&) { return detail::moebius(one, zero, one, -one); },
       [=](const P& p) { return std::vector<PrefactorTerm<F>>{detail::one_minus(one, -p.a)}; }},
      {"perm-x/(x-t)",
       [=](const P& p) {
         return P{p.a, p.c + p.d - p.b, p.c, p.a - p.b + one, (p.q - p.a * p.c) / (p.t - one), one / (one - p.t)};
       },
       [=](const P& p) { return detail::moebius(one, zero, one, -p.t); },
       [=](const P& p) { return std::vector<PrefactorTerm<F>>{detail::one_minus(one / p.t, -p.a)}; }},
      {"perm-(1-t)x/(x-t)",
       [=](const P& p) { return P{p.a, p.c + p.d - p.b, p.c, p.d, p.a * p.c - p.q, one - p.t}; },
       [=](const P& p) { return detail::moebius(one - p.t, zero, one, -p.t); },
       [=](const P& p) { return std::vector<PrefactorTerm<F>>{detail::one_minus(one / p.t, -p.a)}; }},
      {"perm-(t-1)x/(t(x-1))",
       [=](const P& p) { return P{p.a, p.a - p.d + one, p.c, p.e(), p.a * p.c - p.q / p.t, one - one / p.t}; },
       [=](const P& p) { return detail::moebius(p.t - one, zero, p.t, -p.t); },
       [=](const P& p) { return std::vector<PrefactorTerm<F>>{detail::one_minus(one, -p.a)}; }},
  };
  std::vector<G> all = base;
  for (const auto& g : base) {
    if (g.name.rfind("swap", 0) == 0) continue;  // symmetric in a, b already
    all.push_back({g.name + "[b]", [f = g.params](const P& p) { return f(detail::swapped(p)); },
                   [f = g.argument](const P& p) { return f(detail::swapped(p)); },
                   [f = g.prefactor](const P& p) { return f(detail::swapped(p)); }});
  }
  return all;
}

/// Pfaff (both forms) and Euler transformations.
template <Field F>
std::vector<Generator<F, HypergeometricParams<F>>> kummer_generators() {
  using P = HypergeometricParams<F>;
  const F zero(Rational(0)), one(Rational(1));
  auto pfaff_arg = [=](const P&) { return detail::moebius(one, zero, one, -one); };
  return {
      {"pfaff-a", [](const P& p) { return P{p.a, p.c - p.b, p.c}; }, pfaff_arg,
       [=](const P& p) { return std::vector<PrefactorTerm<F>>{detail::one_minus(one, -p.a)}; }},
      {"pfaff-b", [](const P& p) { return P{p.c - p.a, p.b, p.c}; }, pfaff_arg,
       [=](const P& p) { return std::vector<PrefactorTerm<F>>{detail::one_minus(one, -p.b)}; }},
      {"euler", [](const P& p) { return P{p.c - p.a, p.c - p.b, p.c}; },
       [](const P&) { return MoebiusMap<F>::identity(); },
       [=](const P& p) { return std::vector<PrefactorTerm<F>>{detail::one_minus(one, p.c - p.a - p.b)}; }},
  };
}

enum class SingularPoint { kZero, kOne, kT, kInfinity };

namespace detail {
inline const char* point_name(SingularPoint pt) {
  switch (pt) {
    case SingularPoint::kZero: return "0";
    case SingularPoint::kOne: return "1";
    case SingularPoint::kT: return "t";
    case SingularPoint::kInfinity: return "inf";
  }
  return "?";
}

template <Field F>
void require_noninteger(const F& diff, const char* where) {
  auto r = FieldTraits<F>::as_rational(diff);
  if (r && r->is_integer())
    throw DegenerateError(std::string("integer exponent difference ") + to_string(diff) + " at x = " + where +
                          ": the second local solution may be logarithmic");
}
}  // namespace detail

/// The two canonical local solutions of the Heun equation at a singular point.
template <Field F>
std::array<HeunRecord<F>, 2> local_basis(const HeunParams<F>& p, SingularPoint pt) {
  using P = HeunParams<F>;
  const F zero(Rational(0)), one(Rational(1)), two(Rational(2));
  const F &a = p.a, &b = p.b, &c = p.c, &d = p.d, &q = p.q, &t = p.t;
  const F e = p.e();
  const char* where = detail::point_name(pt);
  switch (pt) {
    case SingularPoint::kZero: {
      detail::require_noninteger(one - c, where);
      const F q1 = q - (c - one) * (a + b - c - d + d * t + one);
      return {HeunRecord<F>{MoebiusMap<F>::identity(), {}, p, "0/1"},
              HeunRecord<F>{MoebiusMap<F>::identity(), {detail::x_power(one - c)},
                            P{a - c + one, b - c + one, two - c, d, q1, t}, "0/2"}};
    }
    case SingularPoint::kOne: {
      detail::require_noninteger(one - d, where);
      const F q2 = a * b - q - (d - one) * (a + b - c * t - d + one);
      const auto arg = detail::moebius(-one, one, zero, one);
      return {HeunRecord<F>{arg, {}, P{a, b, d, c, a * b - q, one - t}, "1/1"},
              HeunRecord<F>{arg, {detail::one_minus(one, one - d)}, P{a - d + one, b - d + one, two - d, c, q2, one - t},
                            "1/2"}};
    }
    case SingularPoint::kT: {
      detail::require_noninteger(c + d - a - b, where);
      const F q3 = a * b - q / t + (c / t - c - d) * (a + b - c - d);
      const auto arg = detail::moebius(-one, t, zero, t);
      return {HeunRecord<F>{arg, {}, P{a, b, e, c, a * b - q / t, one - one / t}, "t/1"},
              HeunRecord<F>{arg, {detail::one_minus(one / t, c + d - a - b)},
                            P{c + d - a, c + d - b, c + d - a - b + one, c, q3, one - one / t}, "t/2"}};
    }
    case SingularPoint::kInfinity: {
      detail::require_noninteger(b - a, where);
      const F q4 = q / t + a * (a - b / t - c - d + d / t + one);
      const F q5 = q / t + b * (b - a / t - c - d + d / t + one);
      const auto arg = detail::moebius(zero, one, one, zero);
      return {HeunRecord<F>{arg, {detail::x_power(-a)}, P{a, a - c + one, a - b + one, d, q4, one / t}, "inf/1"},
              HeunRecord<F>{arg, {detail::x_power(-b)}, P{b, b - c + one, b - a + one, d, q5, one / t}, "inf/2"}};
    }
  }
  throw DomainError("unknown singular point");
}

/// Six local Kummer solutions at 0, 1 and infinity.
template <Field F>
std::vector<KummerRecord<F>> kummer_local_solutions(const HypergeometricParams<F>& p) {
  using P = HypergeometricParams<F>;
  const F zero(Rational(0)), one(Rational(1)), two(Rational(2));
  const F &a = p.a, &b = p.b, &c = p.c;
  const auto id = MoebiusMap<F>::identity();
  const auto refl = detail::moebius(-one, one, zero, one);
  const auto inv = detail::moebius(zero, one, one, zero);
  return {
      {id, {}, p, "0/1"},
      {id, {detail::x_power(one - c)}, P{one + a - c, one + b - c, two - c}, "0/2"},
      {refl, {}, P{a, b, one + a + b - c}, "1/1"},
      {refl, {detail::one_minus(one, c - a - b)}, P{c - a, c - b, one + c - a - b}, "1/2"},
      {inv, {detail::x_power(-a)}, P{a, one + a - c, one + a - b}, "inf/1"},
      {inv, {detail::x_power(-b)}, P{b, one + b - c, one - a + b}, "inf/2"},
  };
}

template <Field F, class Params>
struct Orbit {
  std::vector<SolutionRecord<F, Params>> records;
  /// Size the orbit has at generic parameters.
  std::size_t generic_size = 0;
  bool collapsed() const { return records.size() != generic_size; }
};

/// Closure of the seeds under the generators; records are deduplicated by key.
template <Field F, class Params>
std::vector<SolutionRecord<F, Params>> close_orbit(const std::vector<SolutionRecord<F, Params>>& seeds,
                                                   const std::vector<Generator<F, Params>>& gens) {
  std::map<std::string, SolutionRecord<F, Params>> seen;
  std::vector<SolutionRecord<F, Params>> queue;
  std::vector<SolutionRecord<F, Params>> out;
  for (const auto& s : seeds)
    if (seen.emplace(record_key(s), s).second) queue.push_back(s);
  while (!queue.empty()) {
    auto rec = std::move(queue.back());
    queue.pop_back();
    out.push_back(rec);
    for (const auto& g : gens) {
      auto next = apply_generator(rec, g);
      if (seen.emplace(record_key(next), next).second) queue.push_back(std::move(next));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return record_key(x) < record_key(y); });
  return out;
}

template <Field F>
Orbit<F, HypergeometricParams<F>> kummer_orbit(const HypergeometricParams<F>& p) {
  return {close_orbit(kummer_local_solutions(p), kummer_generators<F>()), 24};
}

/// All Heun solution records. Local bases at points with integer exponent
/// difference are still seeded (only the first solution there is safe).
template <Field F>
Orbit<F, HeunParams<F>> heun_orbit(const HeunParams<F>& p) {
  std::vector<HeunRecord<F>> seeds;
  for (auto pt : {SingularPoint::kZero, SingularPoint::kOne, SingularPoint::kT, SingularPoint::kInfinity}) {
    try {
      for (auto& r : local_basis(p, pt)) seeds.push_back(r);
    } catch (const DegenerateError&) {
      // logarithmic risk: the orbit is reported as collapsed
    }
  }
  return {close_orbit(seeds, heun_generators<F>()), 192};
}

/// Check that a record solves the base equation, via its jet at the record's base point.
template <Field F, class Params>
bool verify_record(const SolutionRecord<F, Params>& rec, const Params& base, int order) {
  using R = RationalFunction<F>;
  using Poly = Polynomial<F>;
  const F zero(Rational(0)), one(Rational(1));
  const auto x0 = rec.argument.zero_preimage();
  // x = m(u) moves the base point to u = 0.
  MoebiusMap<F> m;
  if (!x0)
    m = detail::moebius(zero, one, one, zero);
  else if (is_zero(*x0))
    m = MoebiusMap<F>::identity();
  else
    m = detail::moebius(-one, *x0, zero, one);

  const auto op = cleared_operator(base);
  const R mf = m.as_function();
  const R m1 = mf.derivative();
  const R m2 = m1.derivative();
  const R pt = op.p().compose(mf) * m1 - m2 / m1;
  const R qt = op.q().compose(mf) * m1 * m1;
  const Poly a2 = pt.den() * qt.den() / gcd(pt.den(), qt.den());
  const Poly a1 = (pt * R(a2)).num();
  const Poly a0 = (qt * R(a2)).num();

  // Prefactor in u: u^lambda * unit(u) with unit(0) = 1.
  F lambda = zero;
  Series<F> unit = Series<F>::one(order);
  for (const auto& term : rec.prefactor) {
    const MoebiusMap<F> lin{term.slope, term.constant, zero, one};
    const MoebiusMap<F> pulled = lin.compose(m);  // (alpha' + beta' u)/(gamma + delta u)
    auto absorb = [&](const F& c0, const F& c1, const F& e) {
      if (is_zero(c0)) {
        if (is_zero(c1)) throw DegenerateError("prefactor base vanishes identically");
        lambda = lambda + e;
      } else if (!is_zero(c1)) {
        const Rational er = require_rational(e, "prefactor exponent");
        unit = unit * Series<F>(std::vector<F>{one, c1 / c0}, order).pow(er);
      }
    };
    absorb(pulled.q, pulled.p, term.exponent);
    absorb(pulled.s, pulled.r, -term.exponent);
  }
  const MoebiusMap<F> inner = rec.argument.compose(m);
  const R inner_f = inner.as_function();
  Series<F> arg;
  try {
    arg = series_at_zero(inner_f, order);
  } catch (const PoleError&) {
    return false;
  }
  const Series<F> g = unit * canonical_jet(rec.params, order).compose(arg);

  const int n = order - 2;
  const Series<F> g1 = g.derivative().truncated(n);
  const Series<F> g2 = g.derivative().derivative();
  const Series<F> g0 = g.truncated(n);
  auto S = [&](const Poly& p) { return Series<F>::from_polynomial(p, n); };
  const Series<F> inner2 = g0.scaled(lambda * (lambda - one)) + g1.shifted_up(1).scaled(F(Rational(2)) * lambda) +
                           g2.shifted_up(2);
  const Series<F> inner1 = (g0.scaled(lambda) + g1.shifted_up(1)).shifted_up(1);
  const Series<F> residual = S(a2) * inner2 + S(a1) * inner1 + S(a0) * g0.shifted_up(2);
  return !residual.valuation().has_value();
}

/// Apply a generator twice; used for the involution property.
template <Field F, class Params>
Params apply_params_twice(const Generator<F, Params>& g, const Params& p) {
  return g.params(g.params(p));
}

}  // namespace heunpull
