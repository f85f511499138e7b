#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "heunpull/driver.hpp"

using namespace heunpull;
using Q = Rational;

namespace {

const std::vector<TransformationRecord>& catalog() {
  static const auto recs = load_catalog(HEUNPULL_CATALOG_PATH);
  return recs;
}

std::string file_text() {
  std::ifstream in(HEUNPULL_CATALOG_PATH);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

VerifyOptions quick(std::uint64_t seed = 11) {
  VerifyOptions o;
  o.order = 12;
  o.samples = 5;
  o.seed = seed;
  return o;
}

std::map<std::string, Expr> bind(std::initializer_list<std::pair<const char*, const char*>> xs) {
  std::map<std::string, Expr> m;
  for (const auto& [k, v] : xs) m[k] = Expr::parse(v);
  return m;
}

TransformationRecord identity_record(bool heun) {
  TransformationRecord r;
  r.id = heun ? "identity-heun" : "identity-hpg";
  r.kind = heun ? RecordKind::kHeunToHeun : RecordKind::kHpgToHpg;
  r.free = heun ? std::vector<std::string>{"a", "b", "c", "d", "q", "t"} : std::vector<std::string>{"a", "b", "c"};
  for (const auto& n : r.free) {
    r.lhs.emplace_back(n, Expr::symbol(n));
    r.rhs.emplace_back(n, Expr::symbol(n));
  }
  r.phi = Expr::symbol("x");
  return r;
}

}  // namespace

TEST_CASE("catalog file round-trips byte for byte") {
  const std::string text = file_text();
  CHECK(serialize_catalog(parse_catalog(text)) == text);
}

TEST_CASE("catalog contents") {
  int hpg_to_heun_two = 0, hpg = 0, quad_heun = 0, hh = 0, sig = 0;
  for (const auto& r : catalog()) {
    if (r.kind == RecordKind::kHpgToHeun && r.free == std::vector<std::string>{"a", "b"}) ++hpg_to_heun_two;
    if (r.kind == RecordKind::kHpgToHpg) ++hpg;
    if (r.kind == RecordKind::kHpgToHeun && r.free.size() == 3) ++quad_heun;
    if (r.kind == RecordKind::kHeunToHeun) ++hh;
    if (r.kind == RecordKind::kSignatureOnly) ++sig;
  }
  CHECK(hpg_to_heun_two == 15);
  CHECK(hpg == 6);
  CHECK(quad_heun == 3);
  CHECK(hh == 4);
  CHECK(sig == 7);
}

TEST_CASE("parse errors name the problem") {
  CHECK_THROWS_AS(parse_catalog("kind: hpg-to-hpg\n"), ParseError);
  CHECK_THROWS_AS(parse_catalog("id: x\nkind: nope\n"), ParseError);
  CHECK_THROWS_AS(parse_catalog("id: x\nkind: hpg-to-hpg\nfree: a\nlhs: a = a; b = a\nrhs: a = a; b = a; c = a\nphi: x\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_catalog("id: x\nkind: hpg-to-hpg\nfree: a\nlhs: a = a; b = a; c = z\nrhs: a = a; b = a; c = a\nphi: x\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_signature("(1/2, a) -> (a)"), ParseError);
  const Signature s = parse_signature("(1/2, alpha, beta) <-2- (alpha, alpha, 2*beta) <-2- (alpha, alpha, 2*alpha, 4*beta)");
  CHECK(s.degree == 4);
  CHECK(s.source.size() == 3);
  CHECK(s.target.size() == 4);
}

TEST_CASE("every identity verifies; serial and parallel agree") {
  for (std::uint64_t seed : {7ULL, 12345ULL}) {
    const auto par = verify_records(catalog(), quick(seed), Execution::kParallel);
    const auto ser = verify_records(catalog(), quick(seed), Execution::kSerial);
    CHECK(par == ser);
    int passed = 0;
    for (std::size_t i = 0; i < par.size(); ++i) {
      if (!catalog()[i].verifiable()) continue;
      CAPTURE(par[i].id);
      CAPTURE(par[i].error);
      CHECK(par[i].passed);
      CHECK(par[i].samples == 5);
      passed += par[i].passed ? 1 : 0;
    }
    CHECK(passed == 28);
  }
}

TEST_CASE("accessory and exponent checks hold for every record") {
  for (const auto& r : catalog()) {
    if (!r.verifiable() || r.lhs_arg) continue;
    CAPTURE(r.id);
    if (r.lhs_is_heun()) {
      const auto acc = check_accessory(r, quick());
      CHECK(acc.passed);
    }
    const auto sch = check_scheme(r, quick());
    CAPTURE(sch.mismatch ? sch.mismatch->lhs : sch.error);
    CHECK(sch.passed);
  }
}

TEST_CASE("single-parameter mutations are caught") {
  int total = 0;
  for (const auto& r : catalog()) {
    if (!r.verifiable()) continue;
    for (const char* side : {"lhs", "rhs"}) {
      for (const auto& [name, e] : (std::string(side) == "lhs" ? r.lhs : r.rhs)) {
        const auto m = mutated(r, side, name);
        const auto rep = verify_identity(m, quick());
        CAPTURE(m.id);
        CHECK_FALSE(rep.passed);
        ++total;
      }
    }
  }
  CHECK(total > 150);
}

TEST_CASE("mutating the stored accessory breaks the accessory check") {
  const auto m = mutated(find_record(catalog(), "cubic-half-3"), "lhs", "q");
  CHECK_FALSE(check_accessory(m, quick()).passed);
}

TEST_CASE("field handling") {
  const auto& w = find_record(catalog(), "cubic-omega-1");
  VerifyOptions o = quick();
  o.field = "q";
  CHECK_THROWS_AS(verify_identity(w, o), FieldError);
  o.field = "auto";
  const auto rep = verify_identity(w, o);
  CHECK(rep.passed);
  CHECK(rep.field == "q-omega");
  o.field = "q-omega";
  CHECK(verify_identity(find_record(catalog(), "cubic-half-1"), o).passed);
}

TEST_CASE("reports are deterministic per seed") {
  const auto& r = find_record(catalog(), "lame-cubic");
  const auto m = mutated(r, "lhs", "t");
  CHECK(verify_identity(m, quick(3)) == verify_identity(m, quick(3)));
  CHECK(verify_identity(r, quick(3)).samples == 5);
}

TEST_CASE("paired identities for the second local solutions") {
  int paired = 0;
  for (const auto& r : catalog()) {
    if (!r.verifiable() || r.lhs_arg) continue;
    try {
      const auto p = paired_identity(r, quick());
      CAPTURE(p.id);
      const auto rep = verify_identity(p, quick());
      CAPTURE(rep.error);
      CHECK(rep.passed);
      ++paired;
    } catch (const DomainError&) {
      // m(1 - C) != 1 - c: no paired identity
    }
  }
  CHECK(paired >= 10);
  const auto k = paired_constant(find_record(catalog(), "cubic-half-3"), {{"a", Q(1, 5)}, {"b", Q(2, 7)}});
  CHECK(k.lambda == Q(9));
  CHECK(k.valuation == 1);
  CHECK_THROWS_AS(paired_identity(mutated(find_record(catalog(), "cubic-half-1"), "lhs", "c")), DomainError);
}

TEST_CASE("two Heun-to-Heun quadratics compose to the quartic") {
  const auto& quad = find_record(catalog(), "hh-quad-2");
  const auto outer_b = bind({{"s", "1/(2*s)"}, {"b", "2*a + 1/2"}});
  const Expr inner_q = quad.lhs_param("q").substitute(outer_b);
  auto inner_b = bind({{"a", "2*a"}, {"b", "2*a + 1/2"}});
  inner_b["q"] = inner_q;
  const auto composed = compose_records(quad, quad, outer_b, inner_b);
  CHECK(composed.kind == RecordKind::kHeunToHeun);
  CHECK(verify_identity(composed, quick()).passed);
  CHECK(record_difference(composed, find_record(catalog(), "hh-quartic"), quick()) == "");
}

TEST_CASE("quadratic hypergeometric after the third quadratic Heun record gives the first 2x2 quartic") {
  const auto composed = compose_records(find_record(catalog(), "hpg-quad-1"), find_record(catalog(), "quad-heun-3"), {},
                                        bind({{"a", "2*a"}, {"b", "2*b"}, {"c", "a + b + 1/2"}}));
  CHECK(verify_identity(composed, quick()).passed);
  CHECK(record_difference(composed, find_record(catalog(), "quartic-2x2-1"), quick()) == "");
}

TEST_CASE("identity coverings are neutral for composition") {
  for (const auto& r : catalog()) {
    if (!r.verifiable() || r.lhs_arg) continue;
    CAPTURE(r.id);
    const auto expanded = expand_defines(r);
    const std::map<std::string, Expr> rhs(expanded.rhs.begin(), expanded.rhs.end());
    const std::map<std::string, Expr> lhs(expanded.lhs.begin(), expanded.lhs.end());
    const auto left = compose_records(identity_record(r.rhs_is_heun()), r, rhs, {});
    const auto right = compose_records(r, identity_record(r.lhs_is_heun()), {}, lhs);
    CHECK(record_difference(left, r, quick()) == "");
    CHECK(record_difference(right, r, quick()) == "");
  }
}

TEST_CASE("mismatched interfaces name the failing parameter") {
  const auto& quad = find_record(catalog(), "hh-quad-2");
  try {
    compose_records(quad, quad, {}, bind({{"a", "2*a"}, {"b", "2*a + 1/2"}}));
    FAIL("expected an interface error");
  } catch (const InterfaceError& e) {
    CHECK(e.parameter() == "b");
  }
  CHECK_THROWS_AS(compose_records(find_record(catalog(), "hpg-quad-1"), quad, {}, {}), InterfaceError);
}

TEST_CASE("record differences are reported") {
  const auto& r = find_record(catalog(), "cubic-half-1");
  CHECK(record_difference(r, mutated(r, "lhs", "q"), quick()).find("lhs.q") == 0);
  CHECK(record_difference(r, find_record(catalog(), "cubic-half-3"), quick()) != "");
}
