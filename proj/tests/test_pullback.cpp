#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heunpull/catalog.hpp"
#include "heunpull/omega.hpp"

using namespace heunpull;
using Q = Rational;
using R = RationalFunction<Q>;
using P = Polynomial<Q>;

namespace {

R fn(const std::string& text, Environment<Q> env = {}) { return evaluate_function(Expr::parse(text), env); }

const SingularityReport<Q>* at(const std::vector<SingularityReport<Q>>& reps, std::optional<Q> loc) {
  for (const auto& r : reps)
    if (!r.algebraic() && r.location == loc) return &r;
  return nullptr;
}

}  // namespace

TEST_CASE("expressions print canonically and round-trip") {
  for (const char* s : {"a + b - c", "-(a - b)", "2*a*b/3", "x*(4*x - 3)^2", "(1 + s)^2*q - 2*a*b*s",
                        "x^2*(1 - x)*(49*x - 81)^7/(4*(16807*x^3 - 9261*x^2 - 13851*x + 6561)^3)", "a - (b - c)",
                        "a/(b*c)", "-3*a", "3*(1 - w)*a*b"}) {
    const Expr e = Expr::parse(s);
    CHECK(Expr::parse(e.to_string()).to_string() == e.to_string());
  }
  CHECK(Expr::parse("a - (b - c)").to_string() == "a - (b - c)");
  CHECK(Expr::parse("a-b-c").to_string() == "a - b - c");
  CHECK(Expr::parse("x^-2").to_string() == "x^(-2)");
  CHECK_THROWS_AS(Expr::parse("a + "), ParseError);
  CHECK_THROWS_AS(Expr::parse("(a"), ParseError);
}

TEST_CASE("expression evaluation and substitution") {
  const Expr e = Expr::parse("2*a + b/3");
  CHECK(evaluate_scalar<Q>(e, {{"a", Q(1)}, {"b", Q(3)}}) == Q(3));
  const Expr f = e.substitute({{"a", Expr::parse("s - 1")}});
  CHECK(f.symbols() == std::set<std::string>{"b", "s"});
  CHECK(evaluate_scalar<Q>(f, {{"s", Q(2)}, {"b", Q(0)}}) == Q(2));
  CHECK_THROWS_AS(evaluate_scalar<Q>(Expr::parse("w + 1"), {}), FieldError);
  CHECK(evaluate_scalar<OmegaRational>(Expr::parse("w^2 + w + 1"), {}) == OmegaRational(0));
  CHECK_THROWS_AS(evaluate_scalar<Q>(Expr::parse("z"), {}), ParseError);
  CHECK(fn("x*(2 - x)") == R(P({Q(0), Q(2), Q(-1)})));
}

TEST_CASE("transport through x^2 doubles the exponent at 0") {
  const HypergeometricParams<Q> src{Q(1, 3), Q(2, 7), Q(5, 11)};
  const auto reps = transport_exponents(PullbackSpec<Q>{fn("x^2"), {}, riemann_scheme_of(src)});
  const auto* zero = at(reps, Q(0));
  REQUIRE(zero);
  CHECK(zero->index == 2);
  CHECK(zero->first == Q(0));
  CHECK(zero->second == Q(2) - Q(2) * src.c);
  CHECK(zero->is_relevant());
}

TEST_CASE("cubic x(4x-3)^2 has four relevant points and two irrelevant ones") {
  const Q a(1, 5), b(2, 9);
  const HypergeometricParams<Q> src{a, b, Q(1, 2)};
  const auto reps = transport_exponents(PullbackSpec<Q>{fn("x*(4*x - 3)^2"), {}, riemann_scheme_of(src)});
  int relevant = 0;
  for (const auto& r : reps) relevant += r.is_relevant() ? 1 : 0;
  CHECK(relevant == 4);
  const auto* p34 = at(reps, Q(3, 4));
  REQUIRE(p34);
  CHECK(p34->classification == Classification::kIrrelevant);
  CHECK(p34->second - p34->first == Q(1));
  const auto* p14 = at(reps, Q(1, 4));
  REQUIRE(p14);
  CHECK(p14->is_relevant());
  CHECK(p14->difference() == Q(2) * (Q(1, 2) - a - b));
  CHECK(count_points_above(fn("x*(4*x - 3)^2"), {Q(0), Q(1), std::nullopt}) == 5);
}

TEST_CASE("conjugate fiber points are grouped") {
  const auto pts = fiber_points(fn("4*x^2*(1 - x^2)"), std::optional<Q>(Q(1)));
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].algebraic());
  CHECK(pts[0].index == 2);
  CHECK_THROWS_AS(fiber(fn("4*x^2*(1 - x^2)"), std::optional<Q>(Q(1))), UnsupportedError);
}

TEST_CASE("prefactor synthesis reproduces the stored prefactors") {
  const Q a(3, 7), b(-2, 5);
  const HypergeometricParams<Q> src{a, b, a + b + Q(1, 2)};
  auto check = [&](const char* phi, const P& base, const Q& e) {
    const auto want = prefactor_jet<Q>({{base, e}}, 8);
    bool ok = false;
    for (int flip = 0; flip < 2; ++flip) {
      auto s = riemann_scheme_of(src);
      if (flip) std::swap(s.points.back().first, s.points.back().second);
      ok = ok || prefactor_jet(synthesize_prefactor(fn(phi), s), 8) == want;
    }
    CHECK(ok);
  };
  check("x^3/(4 - 3*x)^2", P({Q(1), Q(-3, 4)}), Q(-2) * a);
  check("64*x^3*(1 - x)/(9 - 8*x)^3", P({Q(1), Q(-8, 9)}), Q(-3) * a);
}

TEST_CASE("accessory parameter from the jet") {
  const Q a(5, 13), b(-7, 4);
  const auto recs = load_catalog(HEUNPULL_CATALOG_PATH);
  auto implied = [&](const std::string& id) {
    const auto& rec = find_record(recs, id);
    return implied_accessory(rec, instantiate<Q>(rec, {{"a", a}, {"b", b}, {"c", Q(3, 8)}}));
  };
  CHECK(implied("cubic-half-3") == Q(27) * a * b / Q(4));
  CHECK(implied("quad-heun-3") == Q(2) * a * b);
  CHECK(implied("cubic-half-1") == Q(9) * a * b / Q(4));
  CHECK(implied("cubic-third-1") == Q(18) * a * a - Q(9) * a * b + Q(6) * a);
  // branching at 0 with trivial prefactor gives q = 0
  CHECK(implied("quad-heun-1") == Q(0));
  CHECK(implied("cubic-half-4") == Q(0));
  CHECK_THROWS_AS(accessory_from_jet(Q(0), a, b, Q(1), Q(2), Q(1), Q(0)), DomainError);
}

TEST_CASE("coverings branching off the singular locus are refused") {
  CHECK_NOTHROW(require_belyi(fn("x*(4*x - 3)^2"), {Q(0), Q(1), std::nullopt}));
  CHECK_THROWS_AS(require_belyi(fn("x*(x - 3)^2"), {Q(0), Q(1), std::nullopt}), DomainError);
  try {
    require_belyi(fn("x^3 - 3*x"), {Q(0), Q(1), std::nullopt});
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("dihedral") != std::string::npos);
  }
}

TEST_CASE("every hypergeometric catalog covering has d + 2 points above 0, 1, infinity") {
  const auto recs = load_catalog(HEUNPULL_CATALOG_PATH);
  int checked = 0;
  for (const auto& rec : recs) {
    if (!rec.verifiable() || rec.rhs_is_heun()) continue;
    Environment<Q> env;
    for (const auto& s : rec.free) env[s] = Q(3, 17);
    if (rec.field != "q") continue;
    const auto inst = instantiate<Q>(rec, env);
    CAPTURE(rec.id);
    CHECK(count_points_above(inst.phi, {Q(0), Q(1), std::nullopt}) == inst.phi.degree() + 2);
    CHECK(outside_branch_points(inst.phi, {Q(0), Q(1), std::nullopt}).empty());
    ++checked;
  }
  CHECK(checked >= 20);
}
