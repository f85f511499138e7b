#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "heunpull/covering.hpp"
#include "heunpull/expr.hpp"

using namespace heunpull;
using Q = Rational;
using W = OmegaRational;
using R = RationalFunction<Q>;

namespace {

R fn(const std::string& text) { return evaluate_function(Expr::parse(text), Environment<Q>{}); }
RationalFunction<W> fnw(const std::string& text) { return evaluate_function(Expr::parse(text), Environment<W>{}); }

std::set<std::string> pattern_strings(const std::vector<PatternRow>& rows) {
  std::set<std::string> out;
  for (const auto& r : rows) out.insert(r.pattern.to_string());
  return out;
}

const std::vector<std::string> kTable = {"2+1=2+1=3",     "2+1+1=2+2=4", "3+1=2+2=3+1", "2+2=2+2=3+1",
                                         "2+2=2+2=2+2",   "2+1=3=2+1",   "1+1+1=3=3"};

}  // namespace

TEST_CASE("branching patterns parse and print") {
  auto p = BranchingPattern::parse("1+2=2+1=3");
  CHECK(p.degree == 3);
  CHECK(p.to_string() == "2+1=2+1=3");
  CHECK(p.belyi());
  CHECK_FALSE(BranchingPattern::parse("2+2=2+2=2+1+1").belyi());
  CHECK_THROWS_AS(BranchingPattern::parse("2+1=3"), ParseError);
  CHECK_THROWS_AS(BranchingPattern::parse("2+1=3=2"), ParseError);
  CHECK_THROWS_AS(BranchingPattern::parse("2+x=3=3"), ParseError);
  CHECK_THROWS_AS(BranchingPattern::parse("0+3=3=3"), ParseError);
}

TEST_CASE("two-parameter enumeration gives the seven candidate rows") {
  auto rows = admissible_patterns(4);
  CHECK(rows.size() == 7);
  CHECK(pattern_strings(rows) == std::set<std::string>(kTable.begin(), kTable.end()));
  // the Diophantine bound caps the degree at 4
  CHECK(pattern_strings(admissible_patterns(12)) == pattern_strings(rows));
  CHECK(admissible_patterns(3).size() == 3);
  std::set<std::string> k3;
  for (const auto& r : rows)
    if (r.k == 3) k3.insert(r.pattern.to_string());
  CHECK(k3 == std::set<std::string>{"2+1=3=2+1", "1+1+1=3=3"});
  for (const auto& r : rows) {
    CHECK(r.pattern.belyi());
    if (r.pattern.to_string() == "2+1=2+1=3") CHECK(r.target == "(1/2, α, 2α, 3β)");
    if (r.pattern.to_string() == "3+1=2+2=3+1") CHECK(r.target == "(α, 3α, β, 3β)");
    if (r.pattern.to_string() == "1+1+1=3=3") CHECK(r.target == "(α, α, α, 3β)");
  }
  CHECK_THROWS_AS(admissible_patterns(1), DomainError);
}

TEST_CASE("three-parameter enumeration stops at degree 2") {
  auto rows = admissible_patterns(8, 3);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].pattern.degree == 1);
  CHECK(rows[1].pattern.to_string() == "2=1+1=2");
  CHECK(rows[1].target == "(2α, β, β, 2γ)");
}

TEST_CASE("Heun-to-Heun admissibility: quadratics, the quartic, and all-1/2 Lame") {
  std::set<std::pair<int, int>> got;
  for (const auto& r : heun_to_heun_patterns(7)) got.insert({r.degree, r.half_points});
  CHECK(got.count({2, 2}));
  CHECK(got.count({2, 3}));
  CHECK(got.count({4, 3}));
  CHECK_FALSE(got.count({3, 3}));
  CHECK_FALSE(got.count({6, 3}));
  CHECK_FALSE(got.count({3, 2}));
  CHECK_FALSE(got.count({2, 1}));
  for (int d = 2; d <= 7; ++d) CHECK(got.count({d, 4}));
  for (const auto& [d, j] : got)
    if (j < 4) CHECK((d == 2 || d == 4));
}

TEST_CASE("verify_branching") {
  CHECK(verify_branching(fn("x^2*(x+3)/4"), BranchingPattern::parse("2+1=2+1=3")));
  CHECK(verify_branching(fn("x^2"), BranchingPattern::parse("2=2=1+1")));
  CHECK(verify_branching(fn("x^2"), BranchingPattern::parse("2=1+1=2"), true));
  CHECK_FALSE(verify_branching(fn("x^2"), BranchingPattern::parse("2=2=1+1"), true));
  CHECK_FALSE(verify_branching(fn("x*(4*x-3)^2"), BranchingPattern::parse("2+2=2+2=3+1")));
  CHECK(verify_branching(fn("x*(4*x-3)^2"), BranchingPattern::parse("2+1=2+1=3"), true));
  // non-Belyi: the Lame quartic branches over four points
  CHECK_FALSE(verify_branching(fn("12*x*(x-1)*(x-3)/(x^2-3)^2"), BranchingPattern::parse("2+2=2+2=2+2")));
}

TEST_CASE("solve_covering: the cubic x(4x-3)^2") {
  auto s = solve_covering(BranchingPattern::parse("2+1=2+1=3"));
  REQUIRE(s.solutions.size() == 1);
  CHECK(s.field == "q");
  auto phi = s.solutions[0].rational_phi();
  REQUIRE(phi);
  CHECK(*phi == fn("x*(4*x-3)^2"));
  // both have pattern 2+1=2+1=3, hence the same covering up to Möbius
  CHECK(mobius_equivalence(fn("x^2*(x+3)/4"), fn("1 - x*(4*x-3)^2")));
  CHECK_FALSE(mobius_equivalence(fn("x^3"), fn("x*(4*x-3)^2")));
  CHECK(mobius_equivalence(fn("x*(4*x-3)^2"), fn("(1-x)*(4*(1-x)-3)^2")));
}

TEST_CASE("solve_covering: 1+1+1=3=3 needs Q(w)") {
  auto s = solve_covering(BranchingPattern::parse("1+1+1=3=3"));
  CHECK(s.field == "q-omega");
  REQUIRE(s.exists());
  CHECK(s.class_count == 1);
  auto target = fnw("1 - (1 - (w+2)*x)^3");
  CHECK(target == fnw("3*(2*w+1)*x*(x-1)*(x+w)"));
  bool found = false;
  for (const auto& sol : s.solutions) {
    CHECK_FALSE(sol.rational);
    if (sol.phi == target) found = true;
  }
  CHECK(found);
}

TEST_CASE("solve_covering: 2+2=2+2=3+1 has no covering in either gauge") {
  auto p = BranchingPattern::parse("2+2=2+2=3+1");
  for (Gauge g : {Gauge::kDefault, Gauge::kAlternate}) {
    auto s = solve_covering(p, g);
    CHECK_FALSE(s.exists());
    CHECK(s.certificate.find("is {1}") != std::string::npos);
  }
  CHECK(solve_covering(p).normalization != solve_covering(p, Gauge::kAlternate).normalization);
}

TEST_CASE("solve_covering preconditions") {
  CHECK_THROWS_AS(solve_covering(BranchingPattern::parse("4+3=7=7")), UnsupportedError);
  CHECK_THROWS_AS(solve_covering(BranchingPattern::parse("2+2=2+2=2+1+1")), DomainError);
  CHECK(parse_gauge("alternate") == Gauge::kAlternate);
  CHECK_THROWS_AS(parse_gauge("other"), ParseError);
}

TEST_CASE("every existing table pattern: unique up to Möbius, d+2 points, branching verified") {
  for (Gauge g : {Gauge::kDefault, Gauge::kAlternate})
    for (const auto& text : kTable) {
      CAPTURE(text);
      auto p = BranchingPattern::parse(text);
      auto s = solve_covering(p, g);
      if (text == "2+2=2+2=3+1") {
        CHECK_FALSE(s.exists());
        continue;
      }
      REQUIRE(s.exists());
      CHECK(s.class_count == 1);
      for (const auto& sol : s.solutions) {
        CHECK(verify_branching(sol.phi, p, true));
        int points = 0;
        for (auto z : {std::optional<W>(W(0)), std::optional<W>(W(1)), std::optional<W>()})
          points += static_cast<int>(fiber_partition(sol.phi, z).size());
        CHECK(points == p.degree + 2);
        CHECK(outside_branch_points(sol.phi, {std::optional<W>(W(0)), std::optional<W>(W(1)), std::optional<W>()})
                  .empty());
      }
    }
}

TEST_CASE("decompose_covering") {
  auto d1 = decompose_covering(fn("4*x^2*(1-x^2)"));
  REQUIRE(d1.size() == 1);
  CHECK(d1[0].inner == fn("x^2"));
  CHECK(d1[0].outer == fn("4*x*(1-x)"));
  CHECK(decompose_covering(fn("x*(4*x-3)^2")).empty());
  CHECK(decompose_covering(fn("x^2*(x+3)/4")).empty());
  for (const char* t : {"3", "-5/7", "9"}) {
    CAPTURE(t);
    std::string tt(t);
    auto lame = fn("4*(" + tt + ")*x*(x-1)*(x-(" + tt + "))/(x^2-(" + tt + "))^2");
    auto ds = decompose_covering(lame);
    CHECK(ds.size() == 3);  // one per rational 2-torsion point
    for (const auto& d : ds) {
      CHECK(d.inner.degree() == 2);
      CHECK(d.outer.degree() == 2);
      CHECK(d.outer.compose(d.inner) == lame);
      CHECK(d.inner.at(Q(0)) == std::optional<Q>(Q(0)));
    }
  }
  // degree 6: x^6 = x^2 o x^3 = x^3 o x^2
  auto d6 = decompose_covering(fn("x^6"));
  CHECK(d6.size() == 2);
}

TEST_CASE("classify: table statuses, serial and parallel agree") {
  auto rows = classify(2, Execution::kSerial);
  REQUIRE(rows.size() == 7);
  std::map<std::string, std::string> status;
  for (const auto& r : rows) status[r.row.pattern.to_string()] = r.status;
  CHECK(status["2+1=2+1=3"] == "indecomposable");
  CHECK(status["2+1+1=2+2=4"] == "2×2");
  CHECK(status["3+1=2+2=3+1"] == "indecomposable");
  CHECK(status["2+2=2+2=3+1"] == "no covering");
  CHECK(status["2+2=2+2=2+2"] == "various 2×2");
  CHECK(status["2+1=3=2+1"] == "indecomposable");
  CHECK(status["1+1+1=3=3"] == "indecomposable");
  auto par = classify(2, Execution::kParallel);
  REQUIRE(par.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(par[i].status == rows[i].status);
    CHECK(par[i].search.solutions.size() == rows[i].search.solutions.size());
    for (std::size_t j = 0; j < rows[i].search.solutions.size(); ++j)
      CHECK(par[i].search.solutions[j].phi == rows[i].search.solutions[j].phi);
  }
  auto three = classify(3);
  REQUIRE(three.size() == 2);
  CHECK(three[0].status == "fractional-linear");
  CHECK(three[1].status == "quadratic");
}
