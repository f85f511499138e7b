#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "heunpull/fuchsian.hpp"

using namespace heunpull;
using Q = Rational;

namespace {

Q random_q(std::mt19937_64& rng, int h = 50) {
  std::uniform_int_distribution<int> num(-h, h), den(1, h);
  return Q(num(rng), den(rng));
}

bool bad_c(const Q& c) { return c.is_integer() && c <= Q(0); }

}  // namespace

TEST_CASE("Gauss series coefficients") {
  HypergeometricParams<Q> p{Q(2, 3), Q(-5, 7), Q(3, 11)};
  auto s = hpg_series(p, 6);
  CHECK(s[0] == Q(1));
  CHECK(s[1] == p.a * p.b / p.c);
  auto term = hpg_series(HypergeometricParams<Q>{Q(-1), Q(4, 5), Q(7, 2)}, 8);
  for (int n = 2; n <= 8; ++n) CHECK(is_zero(term[n]));
}

TEST_CASE("vanishing Pochhammer names its index") {
  try {
    hpg_series(HypergeometricParams<Q>{Q(1, 2), Q(1, 3), Q(-2)}, 6);
    FAIL("expected an error");
  } catch (const DegenerateError& e) {
    CHECK(std::string(e.what()).find("(c)_3") != std::string::npos);
  }
}

TEST_CASE("Heun series basics") {
  HeunParams<Q> p{Q(1, 3), Q(2, 5), Q(3, 7), Q(5, 4), Q(7, 9), Q(3, 2)};
  auto s = heun_series(p, 8);
  CHECK(s[1] == p.q / (p.c * p.t));
  HeunParams<Q> trivial{Q(0), Q(2, 5), Q(3, 7), Q(5, 4), Q(0), Q(3, 2)};
  auto one = heun_series(trivial, 8);
  for (int n = 1; n <= 8; ++n) CHECK(is_zero(one[n]));
  CHECK_THROWS_AS(heun_series(HeunParams<Q>{Q(1), Q(1), Q(1), Q(1), Q(1), Q(1)}, 4), DegenerateError);
  CHECK_THROWS_AS(heun_series(HeunParams<Q>{Q(1), Q(1), Q(-1), Q(1), Q(1), Q(3)}, 4), DegenerateError);
}

TEST_CASE("constant series residual is abx - q") {
  HeunParams<Q> p{Q(2), Q(3), Q(1, 2), Q(1, 3), Q(5), Q(7)};
  auto r = ode_residual(p, Series<Q>::one(6));
  CHECK(r[0] == -p.q);
  CHECK(r[1] == p.a * p.b);
}

TEST_CASE("residuals vanish on 50 random tuples") {
  std::mt19937_64 rng(2024);
  int done = 0;
  while (done < 50) {
    HeunParams<Q> p{random_q(rng), random_q(rng), random_q(rng), random_q(rng), random_q(rng), random_q(rng)};
    if (bad_c(p.c) || is_zero(p.t) || p.t == Q(1)) continue;
    auto s = heun_series(p, 16);
    CHECK(!ode_residual(p, s).valuation().has_value());
    HypergeometricParams<Q> h{p.a, p.b, p.c};
    CHECK(!ode_residual(h, hpg_series(h, 16)).valuation().has_value());
    ++done;
  }
}

TEST_CASE("Heun reduces to Gauss") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 20; ++i) {
    Q a = random_q(rng), b = random_q(rng), c = random_q(rng), t = random_q(rng);
    if (bad_c(c) || is_zero(t) || t == Q(1)) continue;
    HeunParams<Q> p{a, b, c, a + b - c + Q(1), a * b * t, t};
    CHECK(heun_series(p, 16) == hpg_series(HypergeometricParams<Q>{a, b, c}, 16));
  }
}

TEST_CASE("Riemann schemes") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    HeunParams<Q> p{random_q(rng), random_q(rng), random_q(rng), random_q(rng), random_q(rng), random_q(rng)};
    auto s = riemann_scheme_of(p);
    CHECK(s.points.size() == 4);
    CHECK(s.exponent_sum() == Q(2));
    auto diffs = s.differences();
    CHECK(diffs[0] == Q(1) - p.c);
    CHECK(diffs[1] == Q(1) - p.d);
    CHECK(diffs[2] == p.c + p.d - p.a - p.b);
    CHECK(diffs[3] == p.b - p.a);
    CHECK(s.points[2].location == p.t);
    CHECK(!s.points[3].location.has_value());
    HypergeometricParams<Q> h{p.a, p.b, p.c};
    auto sh = riemann_scheme_of(h);
    CHECK(sh.points.size() == 3);
    CHECK(sh.exponent_sum() == Q(1));
    CHECK(sh.points[1].second == p.c - p.a - p.b);
  }
}
