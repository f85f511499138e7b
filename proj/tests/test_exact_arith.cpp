#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "heunpull/mpoly.hpp"
#include "heunpull/series.hpp"

using namespace heunpull;
using Q = Rational;
using S = Series<Q>;
using P = Polynomial<Q>;

namespace {
S jet(std::vector<Q> c, int n) { return S(std::move(c), n); }
}  // namespace

TEST_CASE("series product") {
  CHECK(jet({1, 1}, 3) * jet({1, -1}, 3) == jet({1, 0, -1, 0}, 3));
  auto s = jet({2, 5, 7}, 4);
  CHECK(S::one(4) * s == s);
  auto t = jet({1, 2, 3}, 2);
  CHECK(t * t == jet({1, 4, 10}, 2));
  // truncation at the smaller order
  CHECK((jet({1, 1}, 5) * jet({1, 1}, 2)).order() == 2);
}

TEST_CASE("rational powers") {
  CHECK(jet({1, -1}, 3).pow(Q(-1)) == jet({1, 1, 1, 1}, 3));
  CHECK(jet({1, 1}, 2).pow(Q(1, 2)) == jet({1, Q(1, 2), Q(-1, 8)}, 2));
  CHECK(jet({1, Q(-4, 3)}, 2).pow(Q(1)) == jet({1, Q(-4, 3), 0}, 2));
  CHECK_THROWS_AS(jet({2, 1}, 2).pow(Q(1, 2)), DomainError);
}

TEST_CASE("composition") {
  CHECK(jet({1, 1}, 4).compose(jet({0, 0, 1}, 4)) == jet({1, 0, 1, 0, 0}, 4));
  CHECK(jet({1, 1, 1}, 2).compose(jet({0, 2}, 2)) == jet({1, 2, 4}, 2));
  CHECK(jet({1, 1, Q(1, 2)}, 2).compose(jet({0, 1, 1}, 2)) == jet({1, 1, Q(3, 2)}, 2));
  CHECK_THROWS_AS(jet({1, 1}, 2).compose(jet({1, 1}, 2)), DomainError);
}

TEST_CASE("rational function jets") {
  P x = P::x();
  RationalFunction<Q> f(x * (x.scaled(4) - P(Q(3))).pow(2));
  CHECK(series_at_zero(f, 3) == jet({0, 9, -24, 16}, 3));
  RationalFunction<Q> g(x.pow(3), (P(Q(4)) - x.scaled(3)).pow(2));
  CHECK(series_at_zero(g, 3) == jet({0, 0, 0, Q(1, 16)}, 3));
  RationalFunction<Q> h(P(Q(1)), P(Q(1)) - x);
  CHECK(series_at_zero(h, 2) == jet({1, 1, 1}, 2));
  RationalFunction<Q> pole(P(Q(1)), x.pow(2) * (x - P(Q(1))));
  try {
    series_at_zero(pole, 3);
    FAIL("expected a pole");
  } catch (const PoleError& e) {
    CHECK(e.order() == 2);
  }
}

TEST_CASE("omega arithmetic") {
  OmegaRational w = OmegaRational::omega();
  OmegaRational one(Q(1));
  CHECK(w * w * w == one);
  CHECK(is_zero(one + w + w * w));
  CHECK(w.inverse() * w == one);
}

TEST_CASE("random property checks") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> d(-9, 9);
  auto rq = [&] { return Q(d(rng), 1 + (d(rng) + 9) % 7); };
  auto rp = [&](int deg) {
    std::vector<Q> c;
    for (int i = 0; i <= deg; ++i) c.push_back(rq());
    return P(c);
  };
  const int n = 8;
  for (int trial = 0; trial < 20; ++trial) {
    P p = rp(3), q = rp(4);
    CHECK(S::from_polynomial(p * q, n) == S::from_polynomial(p, n) * S::from_polynomial(q, n));

    std::vector<Q> c{1};
    for (int i = 1; i <= n; ++i) c.push_back(rq());
    S s(c, n);
    Q g1 = rq(), g2 = rq();
    CHECK(s.pow(g1 + g2) == s.pow(g1) * s.pow(g2));
    CHECK(s.pow(Q(3)) == s * s * s);

    std::vector<Q> f1{rq()}, f2{0}, f3{0};
    for (int i = 1; i <= n; ++i) {
      f1.push_back(rq());
      f2.push_back(rq());
      f3.push_back(rq());
    }
    S a(f1, n), b(f2, n), e(f3, n);
    CHECK(a.compose(b).compose(e) == a.compose(b.compose(e)));
  }
}

TEST_CASE("polynomial gcd, resultant and roots") {
  P x = P::x();
  P a = (x - P(Q(1))) * (x + P(Q(2))).pow(2);
  P b = (x + P(Q(2))) * (x - P(Q(5)));
  CHECK(gcd(a, b) == x + P(Q(2)));
  CHECK(resultant(x - P(Q(1)), x - P(Q(3))) == Q(-2));
  auto split = roots_in_field(a * (x.pow(2) + P(Q(1))));
  CHECK(split.roots.size() == 2);
  CHECK(split.remainder == x.pow(2) + P(Q(1)));
  // x^2 + x + 1 splits over Q(w)
  auto split2 = roots_in_field(embed<OmegaRational>(x.pow(2) + x + P(Q(1))));
  CHECK(split2.roots.size() == 2);
  CHECK(split2.remainder.degree() == 0);
}

TEST_CASE("groebner basis and system solving") {
  using M = MPoly<Q>;
  M X = M::var(2, 0), Y = M::var(2, 1);
  // x^2 + y^2 = 5, x - y = 1
  auto sol = solve_system<Q>({X * X + Y * Y - M(2, Q(5)), X - Y - M(2, Q(1))}, 2);
  CHECK(sol.status == SystemStatus::kSolved);
  CHECK(sol.points.size() == 2);
  // inconsistent: x*y = 1, x = 0
  auto bad = solve_system<Q>({X * Y - M(2, Q(1)), X}, 2);
  CHECK(bad.status == SystemStatus::kInconsistent);
  CHECK(is_unit_ideal(bad.basis));
}
