#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "heunpull/group.hpp"

using namespace heunpull;
using Q = Rational;

namespace {

Q random_q(std::mt19937_64& rng, int h = 30) {
  std::uniform_int_distribution<int> num(-h, h), den(2, h);
  Q r(num(rng), den(rng));
  return r.is_integer() ? r + Q(1, 7) : r;  // keep exponent data generic
}

HeunParams<Q> generic_heun(std::mt19937_64& rng) {
  for (;;) {
    HeunParams<Q> p{random_q(rng), random_q(rng), random_q(rng), random_q(rng), random_q(rng), random_q(rng)};
    Q diffs[] = {p.b - p.a, p.c + p.d - p.a - p.b, p.a + p.b, p.c - p.a, p.c - p.b, p.a - p.d, p.b - p.d};
    bool ok = true;
    for (const Q& v : diffs) ok = ok && !v.is_integer();
    if (ok && !(p.t == Q(1, 2)) && !(p.t == Q(2)) && !(p.t == Q(-1))) return p;
  }
}

}  // namespace

TEST_CASE("Kummer orbit has 24 records solving the equation") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 3; ++i) {
    HypergeometricParams<Q> p{random_q(rng), random_q(rng), random_q(rng)};
    auto orbit = kummer_orbit(p);
    CHECK(orbit.records.size() == 24);
    for (const auto& r : orbit.records) CHECK(verify_record(r, p, 10));
  }
}

TEST_CASE("Euler record at 0") {
  HypergeometricParams<Q> p{Q(1, 3), Q(2, 7), Q(5, 11)};
  auto rec = apply_generator(kummer_local_solutions(p)[0], kummer_generators<Q>()[2]);
  CHECK(rec.params == HypergeometricParams<Q>{p.c - p.a, p.c - p.b, p.c});
  REQUIRE(rec.prefactor.size() == 1);
  CHECK(rec.prefactor[0].exponent == p.c - p.a - p.b);
  CHECK(rec.prefactor[0].slope == Q(-1));
}

TEST_CASE("Heun orbit has 192 records solving the equation") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 3; ++i) {
    auto p = generic_heun(rng);
    auto orbit = heun_orbit(p);
    CHECK(orbit.records.size() == 192);
    CHECK(!orbit.collapsed());
    int bad = 0;
    for (const auto& r : orbit.records)
      if (!verify_record(r, p, 10)) {
        ++bad;
        MESSAGE("failing record " << r.label);
      }
    CHECK(bad == 0);
  }
}

TEST_CASE("named transformations") {
  HeunParams<Q> p{Q(1, 3), Q(2, 5), Q(3, 7), Q(5, 4), Q(7, 9), Q(3, 2)};
  auto gens = heun_generators<Q>();
  auto find = [&](const std::string& n) {
    for (const auto& g : gens)
      if (g.name == n) return g;
    FAIL("missing generator");
    return gens[0];
  };
  auto ident = HeunRecord<Q>{MoebiusMap<Q>::identity(), {}, p, "id"};
  CHECK(verify_record(ident, p, 12));
  auto r = apply_generator(ident, find("perm-x/t"));
  CHECK(r.params == HeunParams<Q>{p.a, p.b, p.c, p.e(), p.q / p.t, Q(1) / p.t});
  auto s = apply_generator(ident, find("swap1"));
  CHECK(s.params.q == p.q - p.c * (p.d - Q(1)) * p.t);
  CHECK(s.prefactor[0].exponent == Q(1) - p.d);
  CHECK(verify_record(s, p, 12));

  for (const auto& g : gens)
    if (g.name.rfind("swap", 0) == 0) CHECK(apply_params_twice(g, p) == p);

  auto bumped = s;
  bumped.params.q = bumped.params.q + Q(1);
  CHECK(!verify_record(bumped, p, 12));
}

TEST_CASE("local bases") {
  HeunParams<Q> p{Q(1, 3), Q(2, 5), Q(3, 7), Q(5, 4), Q(7, 9), Q(3, 2)};
  auto zero = local_basis(p, SingularPoint::kZero);
  CHECK(zero[1].params.q == p.q - (p.c - Q(1)) * (p.a + p.b - p.c - p.d + p.d * p.t + Q(1)));
  auto inf = local_basis(p, SingularPoint::kInfinity);
  CHECK(inf[0].params.q == p.q / p.t + p.a * (p.a - p.b / p.t - p.c - p.d + p.d / p.t + Q(1)));
  auto one = local_basis(p, SingularPoint::kOne);
  CHECK(one[0].params.t == Q(1) - p.t);
  CHECK(one[0].params.q == p.a * p.b - p.q);
  for (auto pt : {SingularPoint::kZero, SingularPoint::kOne, SingularPoint::kT, SingularPoint::kInfinity})
    for (const auto& r : local_basis(p, pt)) CHECK(verify_record(r, p, 12));
  HeunParams<Q> integral = p;
  integral.c = Q(3);
  CHECK_THROWS_AS(local_basis(integral, SingularPoint::kZero), DegenerateError);
}

TEST_CASE("degenerate samples collapse the orbit") {
  HeunParams<Q> p{Q(1, 3), Q(4, 3), Q(3, 7), Q(5, 4), Q(7, 9), Q(3, 2)};
  auto orbit = heun_orbit(p);
  CHECK(orbit.collapsed());
  MESSAGE("collapsed orbit size " << orbit.records.size());
}
