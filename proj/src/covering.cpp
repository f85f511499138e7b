#include "heunpull/covering.hpp"

#include <exception>
#include <map>
#include <numeric>
#include <type_traits>
#include <sstream>

namespace heunpull {

namespace {

using MP = MPoly<Rational>;
using XPoly = std::vector<MP>;  // coefficient of x^i

std::vector<int> parse_partition(const std::string& s) {
  std::vector<int> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, '+')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw ParseError("bad partition entry '" + item + "'");
    }
    while (used < item.size() && item[used] == ' ') ++used;
    if (used != item.size() || v <= 0) throw ParseError("bad partition entry '" + item + "'");
    parts.push_back(v);
  }
  if (parts.empty()) throw ParseError("empty partition");
  std::sort(parts.rbegin(), parts.rend());
  return parts;
}

std::string format_partition(const std::vector<int>& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "+" : "") + std::to_string(p[i]);
  return s;
}

void partitions_rec(int n, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(n, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_rec(n - p, p, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<int>> partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  partitions_rec(n, n, cur, out);
  return out;
}

/// Outer fibers: more parts first, then the smaller largest part.
bool outer_first(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return a.size() > b.size();
  return a < b;
}

std::string multiple(int m, const std::string& sym) { return m == 1 ? sym : std::to_string(m) + sym; }

std::string tuple(const std::vector<std::string>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
  return s + ")";
}

// ---- x-polynomials with multivariate coefficients ----

XPoly xtrim(XPoly p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

XPoly xmul(const XPoly& a, const XPoly& b, int nv) {
  if (a.empty() || b.empty()) return {};
  XPoly r(a.size() + b.size() - 1, MP(nv));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  return xtrim(r);
}

XPoly xadd(const XPoly& a, const XPoly& b, int nv) {
  XPoly r(std::max(a.size(), b.size()), MP(nv));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = r[i] + a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = r[i] + b[i];
  return xtrim(r);
}

XPoly xscale(const XPoly& a, const MP& s) {
  XPoly r;
  for (const auto& c : a) r.push_back(c * s);
  return xtrim(r);
}

XPoly xpow(const XPoly& a, int e, int nv) {
  XPoly r = {MP(nv, Rational(1))};
  for (int i = 0; i < e; ++i) r = xmul(r, a, nv);
  return r;
}

XPoly xderiv(const XPoly& a) {
  XPoly r;
  for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i].scaled(Rational(static_cast<long>(i))));
  return xtrim(r);
}

MP exact_div(MP a, const MP& b) {
  MP q(a.nvars());
  while (!a.is_zero()) {
    if (!detail::divides(b.leading_monomial(), a.leading_monomial()))
      throw std::logic_error("inexact multivariate division");
    const Monomial t = detail::mono_div(a.leading_monomial(), b.leading_monomial());
    const Rational c = a.leading_coeff() / b.leading_coeff();
    q.add_term(t, c);
    a = a - b.times_term(t, c);
  }
  return q;
}

/// Fraction-free (Bareiss) determinant.
MP determinant(std::vector<std::vector<MP>> m, int nv) {
  const std::size_t n = m.size();
  if (n == 0) return MP(nv, Rational(1));
  MP prev(nv, Rational(1));
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t p = k + 1;
      while (p < n && m[p][k].is_zero()) ++p;
      if (p == n) return MP(nv);
      std::swap(m[p], m[k]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = exact_div(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
    prev = m[k][k];
  }
  return negate ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

MP sylvester(const XPoly& p, const XPoly& q, int nv) {
  const int dp = static_cast<int>(p.size()) - 1;
  const int dq = static_cast<int>(q.size()) - 1;
  const auto n = static_cast<std::size_t>(dp + dq);
  std::vector<std::vector<MP>> m(n, std::vector<MP>(n, MP(nv)));
  for (int r = 0; r < dq; ++r)
    for (int i = 0; i <= dp; ++i) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + dp - i)] = p[static_cast<std::size_t>(i)];
  for (int r = 0; r < dp; ++r)
    for (int i = 0; i <= dq; ++i)
      m[static_cast<std::size_t>(dq + r)][static_cast<std::size_t>(r + dq - i)] = q[static_cast<std::size_t>(i)];
  return determinant(std::move(m), nv);
}

template <Field F>
F eval_at(const MP& p, const std::vector<F>& pt) {
  F acc(Rational(0));
  for (const auto& [m, c] : p.terms()) {
    F t(c);
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] > 0) t = t * field_pow(pt[i], m[i]);
    acc = acc + t;
  }
  return acc;
}

template <Field F>
Polynomial<F> eval_x(const XPoly& p, const std::vector<F>& pt) {
  std::vector<F> c;
  for (const auto& m : p) c.push_back(eval_at(m, pt));
  return Polynomial<F>(std::move(c));
}

/// The gauge-fixed ansatz c*(N - M) = D with a Rabinowitsch nondegeneracy equation.
struct Ansatz {
  int nvars = 0;
  XPoly n, m, d;  // fiber products above 0, 1, infinity
  std::vector<MP> system;
  int equations = 0;
  std::string normalization;
};

struct Pin {
  int fiber;
  int mult;
};

/// Candidates for the point sent to x=1, primary rule first.
std::vector<Pin> third_pins(const BranchingPattern& p, Gauge gauge) {
  const bool def = gauge == Gauge::kDefault;
  auto pick = [&](const std::vector<int>& v) { return def ? v.back() : v.front(); };
  std::array<std::vector<int>, 3> rest = p.fibers;
  rest[2].erase(std::find(rest[2].begin(), rest[2].end(), pick(p.fibers[2])));
  rest[0].erase(std::find(rest[0].begin(), rest[0].end(), pick(p.fibers[0])));
  std::vector<Pin> out;
  auto add = [&](int f) {
    auto v = rest[static_cast<std::size_t>(f)];
    if (!def) std::reverse(v.begin(), v.end());
    for (auto it = v.rbegin(); it != v.rend(); ++it) {
      Pin pin{f, *it};
      if (std::none_of(out.begin(), out.end(), [&](const Pin& q) { return q.fiber == f && q.mult == *it; }))
        out.push_back(pin);
    }
  };
  if (p.fibers[1].size() == 1 && !rest[0].empty()) {
    add(0);
    add(1);
  } else {
    add(1);
    add(0);
  }
  add(2);
  return out;
}

Ansatz build_ansatz(const BranchingPattern& p, Gauge gauge, Pin third) {
  const bool def = gauge == Gauge::kDefault;
  const auto& f0 = p.fibers[0];
  const auto& fi = p.fibers[2];
  auto pick = [&](const std::vector<int>& v) { return def ? v.back() : v.front(); };
  // pins[f][m]: pinned finite values for multiplicity m in fiber f
  std::array<std::map<int, std::vector<int>>, 3> pins;
  const int inf_mult = pick(fi);
  const int zero_mult = pick(f0);
  pins[0][zero_mult].push_back(0);
  pins[static_cast<std::size_t>(third.fiber)][third.mult].push_back(1);
  static const char* names[] = {"0", "1", "infinity"};
  std::string norm = "x=infinity above infinity (index " + std::to_string(inf_mult) + "), x=0 above 0 (index " +
                     std::to_string(zero_mult) + "), x=1 above " + names[third.fiber] + " (index " +
                     std::to_string(third.mult) + ")";

  struct Group {
    int fiber, mult, free;
    std::vector<int> pinned;
  };
  std::vector<Group> groups;
  int nfree = 0;
  for (int f = 0; f < 3; ++f) {
    std::map<int, int> count;
    for (int m : p.fibers[static_cast<std::size_t>(f)]) ++count[m];
    for (const auto& [m, n] : count) {
      Group g{f, m, n, pins[static_cast<std::size_t>(f)][m]};
      g.free -= static_cast<int>(g.pinned.size()) + (f == 2 && m == inf_mult ? 1 : 0);
      nfree += g.free;
      groups.push_back(g);
    }
  }

  Ansatz a;
  a.normalization = norm;
  const int nv = 2 + nfree;  // y, c, coefficients
  a.nvars = nv;
  const MP one(nv, Rational(1));
  const MP y = MP::var(nv, 0);
  const MP c = MP::var(nv, 1);
  int next = 2;
  std::array<XPoly, 3> prod = {XPoly{one}, XPoly{one}, XPoly{one}};
  struct Atom {
    XPoly poly;
    bool pinned;
  };
  std::vector<Atom> atoms;
  for (const auto& g : groups) {
    std::vector<XPoly> mine;
    for (int v : g.pinned) {
      XPoly lin = {MP(nv, Rational(-v)), one};
      atoms.push_back({lin, true});
      mine.push_back(lin);
    }
    if (g.free > 0) {
      XPoly fp;
      for (int i = 0; i < g.free; ++i) fp.push_back(MP::var(nv, next++));
      fp.push_back(one);
      atoms.push_back({fp, false});
      mine.push_back(fp);
    }
    for (const auto& q : mine)
      prod[static_cast<std::size_t>(g.fiber)] = xmul(prod[static_cast<std::size_t>(g.fiber)], xpow(q, g.mult, nv), nv);
  }
  a.n = prod[0];
  a.m = prod[1];
  a.d = prod[2];

  XPoly lhs = xadd(xscale(xadd(a.n, xscale(a.m, -one), nv), c), xscale(a.d, -one), nv);
  for (const auto& coef : lhs)
    if (!coef.is_zero()) a.system.push_back(coef);
  a.equations = static_cast<int>(a.system.size());

  MP delta = c;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!atoms[i].pinned && atoms[i].poly.size() >= 3) delta = delta * sylvester(atoms[i].poly, xderiv(atoms[i].poly), nv);
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (atoms[i].pinned && atoms[j].pinned) continue;
      delta = delta * sylvester(atoms[i].poly, atoms[j].poly, nv);
    }
  }
  a.system.push_back(y * delta - one);
  return a;
}

template <Field F>
void collect(const Ansatz& a, const SystemSolution<F>& sol, const BranchingPattern& p,
             std::vector<RationalFunction<OmegaRational>>& out) {
  for (const auto& pt : sol.points) {
    const F c = pt[1];
    RationalFunction<F> phi(eval_x(a.n, pt).scaled(c), eval_x(a.d, pt));
    if (!verify_branching(phi, p, true)) throw std::logic_error("solver returned a degenerate covering");
    RationalFunction<OmegaRational> w;
    if constexpr (std::is_same_v<F, Rational>) {
      auto lift = [](const Polynomial<Rational>& q) {
        std::vector<OmegaRational> v;
        for (const auto& x : q.coeffs()) v.emplace_back(x);
        return Polynomial<OmegaRational>(std::move(v));
      };
      w = RationalFunction<OmegaRational>(lift(phi.num()), lift(phi.den()));
    } else {
      w = phi;
    }
    if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
  }
}

std::vector<MPoly<OmegaRational>> embed_all(const std::vector<MP>& s) {
  std::vector<MPoly<OmegaRational>> out;
  for (const auto& p : s) out.push_back(embed<OmegaRational>(p));
  return out;
}

}  // namespace

BranchingPattern BranchingPattern::parse(const std::string& text) {
  std::vector<std::string> pieces;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, '=')) pieces.push_back(item);
  if (pieces.size() != 3) throw ParseError("branching pattern needs three partitions: '" + text + "'");
  BranchingPattern p;
  for (std::size_t i = 0; i < 3; ++i) p.fibers[i] = parse_partition(pieces[i]);
  auto sum = [](const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); };
  p.degree = sum(p.fibers[0]);
  if (sum(p.fibers[1]) != p.degree || sum(p.fibers[2]) != p.degree)
    throw ParseError("partitions of different degrees: '" + text + "'");
  return p;
}

std::string BranchingPattern::to_string() const {
  return format_partition(fibers[0]) + "=" + format_partition(fibers[1]) + "=" + format_partition(fibers[2]);
}

int BranchingPattern::total_points() const {
  return static_cast<int>(fibers[0].size() + fibers[1].size() + fibers[2].size());
}

std::vector<PatternRow> admissible_patterns(int max_degree, int params) {
  if (max_degree < 2) throw DomainError("maxDegree must be at least 2");
  std::vector<PatternRow> rows;
  if (params == 3) {
    // every point above 0, 1, infinity is singular: d + 2 <= 4
    for (int d = 1; d <= std::min(max_degree, 2); ++d) {
      PatternRow r;
      r.source = "(α, β, γ)";
      if (d == 1) {
        r.pattern = BranchingPattern::parse("1=1=1");
        r.target = "(α, β, γ)";
      } else {
        r.pattern = BranchingPattern::parse("2=1+1=2");
        r.target = "(2α, β, β, 2γ)";
      }
      rows.push_back(r);
    }
    return rows;
  }
  if (params != 2) throw DomainError("params must be 2 or 3");
  // One exponent difference 1/k, k > 1, degree d > 2. Exactly four singular points
  // and d + 2 points in total force d - 2 parts equal to k above the 1/k point.
  for (int k = 2; k <= 3; ++k) {
    for (int d = 3; d <= max_degree; ++d) {
      if (k * (d - 2) > d) continue;
      std::vector<PatternRow> block;
      for (const auto& a : partitions(d)) {
        if (std::count(a.begin(), a.end(), k) != d - 2) continue;
        const int rest = d + 2 - static_cast<int>(a.size());
        const auto all = partitions(d);
        for (std::size_t i = 0; i < all.size(); ++i)
          for (std::size_t j = i; j < all.size(); ++j) {
            if (static_cast<int>(all[i].size() + all[j].size()) != rest) continue;
            auto b = all[i];
            auto c = all[j];
            if (outer_first(c, b)) std::swap(b, c);
            PatternRow r;
            r.k = k;
            r.pattern.degree = d;
            r.pattern.fibers = {b, a, c};
            r.source = "(1/" + std::to_string(k) + ", α, β)";
            std::vector<std::string> t;
            for (int m : a)
              if (m != k) t.push_back(std::to_string(m) + "/" + std::to_string(k));
            for (auto it = b.rbegin(); it != b.rend(); ++it) t.push_back(multiple(*it, "α"));
            for (auto it = c.rbegin(); it != c.rend(); ++it) t.push_back(multiple(*it, "β"));
            r.target = tuple(t);
            block.push_back(r);
          }
      }
      std::stable_sort(block.begin(), block.end(), [](const PatternRow& x, const PatternRow& y) {
        const auto& xc = x.pattern.fibers[2];
        const auto& yc = y.pattern.fibers[2];
        if (xc.size() != yc.size()) return xc.size() < yc.size();
        if (xc != yc) return xc > yc;
        return x.pattern.fibers[0] > y.pattern.fibers[0];
      });
      rows.insert(rows.end(), block.begin(), block.end());
    }
  }
  return rows;
}

std::vector<HeunPatternRow> heun_to_heun_patterns(int max_degree) {
  // At least 2d + 2 points lie above the four singular points; four of them stay
  // singular and only index-2 points above the 1/2 points can be nonsingular.
  std::vector<HeunPatternRow> rows;
  for (int d = 2; d <= max_degree; ++d)
    for (int j = 0; j <= 4; ++j) {
      const int bound = j * (d / 2);
      if (2 * d - 2 <= bound) rows.push_back({d, j, bound});
    }
  return rows;
}

const char* to_string(Gauge g) { return g == Gauge::kDefault ? "default" : "alternate"; }

Gauge parse_gauge(const std::string& s) {
  if (s == "default") return Gauge::kDefault;
  if (s == "alternate") return Gauge::kAlternate;
  throw ParseError("unknown gauge '" + s + "' (default|alternate)");
}

std::optional<RationalFunction<Rational>> CoveringSolution::rational_phi() const {
  auto down = [](const Polynomial<OmegaRational>& p) -> std::optional<Polynomial<Rational>> {
    std::vector<Rational> v;
    for (const auto& c : p.coeffs()) {
      if (!c.is_rational()) return std::nullopt;
      v.push_back(c.re());
    }
    return Polynomial<Rational>(std::move(v));
  };
  auto n = down(phi.num());
  auto d = down(phi.den());
  if (!n || !d) return std::nullopt;
  return RationalFunction<Rational>(*n, *d);
}

CoveringSearch solve_covering(const BranchingPattern& p, Gauge gauge) {
  if (p.degree > 6) throw UnsupportedError("solver supports degree <= 6, got " + std::to_string(p.degree));
  if (!p.belyi())
    throw DomainError("pattern " + p.to_string() + " has " + std::to_string(p.total_points()) +
                      " points; a covering branched over three points needs d+2");
  CoveringSearch out;
  out.pattern = p;
  out.gauge = gauge;
  std::vector<RationalFunction<OmegaRational>> found;
  std::string normalization;
  for (const Pin& pin : third_pins(p, gauge)) {
    const Ansatz a = build_ansatz(p, gauge, pin);
    out.normalization = a.normalization;
    out.unknowns = a.nvars;
    out.equations = static_cast<int>(a.system.size());
    const auto q = solve_system(a.system, a.nvars);
    if (q.status == SystemStatus::kInconsistent) {
      out.certificate = "Groebner basis of " + std::to_string(out.equations) + " equations in " +
                        std::to_string(out.unknowns) + " unknowns (gauge " + a.normalization +
                        ", nondegeneracy via y*Delta - 1) is {1}: no covering over the algebraic closure";
      return out;
    }
    if (q.status == SystemStatus::kPositiveDimensional) throw UnsupportedError("positive-dimensional covering family");
    if (!q.roots_outside_field) {
      collect(a, q, p, found);
      out.field = "q";
      break;
    }
    const auto w = solve_system(embed_all(a.system), a.nvars);
    if (!w.roots_outside_field) {
      collect(a, w, p, found);
      out.field = "q-omega";
      break;
    }
  }
  if (found.empty()) throw UnsupportedError("no gauge places the coverings of " + p.to_string() + " over Q or Q(w)");
  for (const auto& phi : found) {
    CoveringSolution s;
    s.phi = phi;
    s.normalization = out.normalization;
    s.rational = s.rational_phi().has_value();
    out.solutions.push_back(s);
  }
  // Möbius classes.
  out.mobius_class.assign(out.solutions.size(), -1);
  for (std::size_t i = 0; i < out.solutions.size(); ++i) {
    if (out.mobius_class[i] >= 0) continue;
    out.mobius_class[i] = out.class_count;
    for (std::size_t j = i + 1; j < out.solutions.size(); ++j)
      if (out.mobius_class[j] < 0 && mobius_equivalence(out.solutions[i].phi, out.solutions[j].phi))
        out.mobius_class[j] = out.class_count;
    ++out.class_count;
  }
  return out;
}

std::vector<ClassRow> classify(int params, Execution mode) {
  const auto rows = admissible_patterns(params == 3 ? 2 : 6, params);
  std::vector<ClassRow> out(rows.size());
  std::vector<std::exception_ptr> errors(rows.size());
  auto one = [&](long i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      ClassRow r;
      r.row = rows[idx];
      r.search = solve_covering(r.row.pattern);
      if (!r.search.exists()) {
        r.status = "no covering";
      } else if (params == 3) {
        r.status = r.row.pattern.degree == 1 ? "fractional-linear" : "quadratic";
      } else {
        r.decompositions = decompose_covering(r.search.solutions.front().phi);
        r.status = r.decompositions.empty() ? "indecomposable"
                   : r.decompositions.size() == 1 ? "2×2"
                                                   : "various 2×2";
      }
      out[idx] = std::move(r);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  };
  const auto n = static_cast<long>(rows.size());
  if (mode == Execution::kSerial) {
    for (long i = 0; i < n; ++i) one(i);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) one(i);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace heunpull
