// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <string>

#include "heunpull/covering.hpp"
#include "heunpull/driver.hpp"
#include "heunpull/expr.hpp"
#include "heunpull/fuchsian.hpp"

using namespace heunpull;
using Q = Rational;

namespace {

const std::vector<TransformationRecord>& catalog() {
  static const auto recs = load_catalog(HEUNPULL_CATALOG_PATH);
  return recs;
}

VerifyOptions opts(int order = 12, int samples = 5, std::uint64_t seed = 2026) {
  VerifyOptions o;
  o.order = order;
  o.samples = samples;
  o.seed = seed;
  return o;
}

Q random_q(std::mt19937_64& rng, int h, int den_min = 1) {
  std::uniform_int_distribution<int> num(-h, h), den(den_min, h);
  return Q(num(rng), den(rng));
}

bool bad_c(const Q& c) { return c.is_integer() && c <= Q(0); }

int failures = 0;

void criterion(int n, const std::string& name, const std::function<std::string()>& body) {
  std::string why;
  try {
    why = body();
  } catch (const std::exception& e) {
    why = std::string("exception: ") + e.what();
  }
  if (why.empty()) {
    std::cout << "PASS [" << n << "] " << name << "\n";
  } else {
    ++failures;
    std::cout << "FAIL [" << n << "] " << name << ": " << why << "\n";
  }
  std::cout.flush();
}

// stored expression agrees with the expected one at a few random (a, b)
bool same_expr(const Expr& stored, const std::string& expected) {
  const Expr e = Expr::parse(expected);
  std::mt19937_64 rng(41);
  for (int i = 0; i < 4; ++i) {
    Environment<Q> env{{"a", random_q(rng, 40)}, {"b", random_q(rng, 40)}};
    if (evaluate_scalar(stored, env) != evaluate_scalar(e, env)) return false;
  }
  return true;
}

std::map<std::string, Expr> bind(std::initializer_list<std::pair<const char*, const char*>> xs) {
  std::map<std::string, Expr> m;
  for (const auto& [k, v] : xs) m[k] = Expr::parse(v);
  return m;
}

HeunParams<Q> generic_heun(std::mt19937_64& rng) {
  for (;;) {
    auto r = [&] {
      Q v = random_q(rng, 30, 2);
      return v.is_integer() ? v + Q(1, 7) : v;
    };
    HeunParams<Q> p{r(), r(), r(), r(), r(), r()};
    Q diffs[] = {p.b - p.a, p.c + p.d - p.a - p.b, p.a + p.b, p.c - p.a, p.c - p.b, p.a - p.d, p.b - p.d};
    bool ok = true;
    for (const Q& v : diffs) ok = ok && !v.is_integer();
    if (ok && p.t != Q(1, 2) && p.t != Q(2) && p.t != Q(-1)) return p;
  }
}

}  // namespace

int main() {
  criterion(1, "verify-all: every identity at order 12, 5 samples, within 60 s", [] {
    const auto start = std::chrono::steady_clock::now();
    std::vector<TransformationRecord> todo;
    for (const auto& r : catalog())
      if (r.verifiable()) todo.push_back(r);
    const auto reps = verify_records(todo, opts());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    int verified = 0, total = 0;
    std::string bad;
    for (const auto& r : reps) {
      ++total;
      if (r.passed) ++verified;
      else bad += " " + r.id;
    }
    if (total != 28) return "expected 28 verifiable records, got " + std::to_string(total);
    if (verified != total) return "failed:" + bad;
    if (secs > 60) return "took " + std::to_string(secs) + " s";
    return std::string();
  });

  criterion(2, "accessory oracle: every stored q matches; 27ab/4, 2ab and q = 0 cases", [] {
    std::string bad;
    for (const auto& r : catalog())
      if (r.kind == RecordKind::kHpgToHeun && !check_accessory(r, opts()).passed) bad += " " + r.id;
    if (!bad.empty()) return "accessory mismatch:" + bad;
    const std::pair<const char*, const char*> expected[] = {{"cubic-half-3", "27*a*b/4"},
                                                            {"quad-heun-3", "2*a*b"},
                                                            {"quad-heun-1", "0"},
                                                            {"cubic-half-4", "0"},
                                                            {"quartic-2x2-2", "0"}};
    for (const auto& [id, q] : expected)
      if (!same_expr(find_record(catalog(), id).lhs_param("q"), q)) return std::string(id) + ": q is not " + q;
    // the oracle rejects a shifted accessory
    if (check_accessory(mutated(find_record(catalog(), "cubic-half-3"), "lhs", "q"), opts()).passed)
      return std::string("shifted accessory accepted");
    return std::string();
  });

  criterion(3, "classify: three parameters stop at degree 2; two parameters give the 7-row table", [] {
    const auto three = classify(3);
    if (three.size() != 2 || three[0].row.pattern.degree != 1 || three[1].row.pattern.degree != 2)
      return std::string("three-parameter rows wrong");
    const std::map<std::string, std::string> want = {
        {"2+1=2+1=3", "indecomposable"}, {"2+1+1=2+2=4", "2×2"},         {"3+1=2+2=3+1", "indecomposable"},
        {"2+2=2+2=3+1", "no covering"},  {"2+2=2+2=2+2", "various 2×2"}, {"2+1=3=2+1", "indecomposable"},
        {"1+1+1=3=3", "indecomposable"}};
    const auto rows = classify(2);
    if (rows.size() != want.size()) return "got " + std::to_string(rows.size()) + " rows";
    for (const auto& r : rows) {
      const auto key = r.row.pattern.to_string();
      const auto it = want.find(key);
      if (it == want.end()) return "unexpected row " + key;
      if (r.status != it->second) return key + ": status " + r.status;
      if (r.search.exists() && r.search.class_count != 1) return key + ": not unique up to Möbius";
    }
    return std::string();
  });

  criterion(4, "orbits: 24 Kummer and 192 Heun records on 3 generic tuples, residual order 10", [] {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 3; ++i) {
      HypergeometricParams<Q> h{random_q(rng, 30, 2) + Q(1, 7), random_q(rng, 30, 2) + Q(1, 11),
                                random_q(rng, 30, 2) + Q(1, 13)};
      const auto ko = kummer_orbit(h);
      if (ko.records.size() != 24) return "Kummer orbit of size " + std::to_string(ko.records.size());
      for (char ok : verify_orbit(ko, h, 10))
        if (!ok) return std::string("Kummer record fails the residual check");
      const auto p = generic_heun(rng);
      const auto ho = heun_orbit(p);
      if (ho.records.size() != 192) return "Heun orbit of size " + std::to_string(ho.records.size());
      for (char ok : verify_orbit(ho, p, 10))
        if (!ok) return std::string("Heun record fails the residual check");
    }
    return std::string();
  });

  criterion(5, "Heun-to-Heun: two quadratics compose to the quartic; Lamé cubic verifies", [] {
    const auto& quad = find_record(catalog(), "hh-quad-2");
    const auto outer_b = bind({{"s", "1/(2*s)"}, {"b", "2*a + 1/2"}});
    auto inner_b = bind({{"a", "2*a"}, {"b", "2*a + 1/2"}});
    inner_b["q"] = quad.lhs_param("q").substitute(outer_b);
    const auto composed = compose_records(quad, quad, outer_b, inner_b);
    if (!verify_identity(composed, opts()).passed) return std::string("composition does not verify");
    const auto diff = record_difference(composed, find_record(catalog(), "hh-quartic"), opts());
    if (!diff.empty()) return "differs from hh-quartic: " + diff;
    const auto lame = verify_identity(find_record(catalog(), "lame-cubic"), opts());
    if (!lame.passed || lame.samples != 5) return "lame-cubic: " + lame.error;
    return std::string();
  });

  criterion(6, "both Q(w) cubics verify over Q(w) at order 12", [] {
    for (const char* id : {"cubic-omega-1", "cubic-omega-2"}) {
      auto o = opts();
      o.field = "q-omega";
      const auto rep = verify_identity(find_record(catalog(), id), o);
      if (!rep.passed || rep.field != "q-omega") return std::string(id) + " failed: " + rep.error;
    }
    return std::string();
  });

  criterion(7, "properties: residuals, reduction to 2F1, Fuchs sums, mutations caught", [] {
    std::mt19937_64 rng(2024);
    for (int done = 0; done < 50;) {
      HeunParams<Q> p{random_q(rng, 50), random_q(rng, 50), random_q(rng, 50),
                      random_q(rng, 50), random_q(rng, 50), random_q(rng, 50)};
      if (bad_c(p.c) || is_zero(p.t) || p.t == Q(1)) continue;
      if (ode_residual(p, heun_series(p, 16)).valuation()) return std::string("Heun residual nonzero");
      HypergeometricParams<Q> h{p.a, p.b, p.c};
      if (ode_residual(h, hpg_series(h, 16)).valuation()) return std::string("2F1 residual nonzero");
      HeunParams<Q> red{p.a, p.b, p.c, p.a + p.b - p.c + Q(1), p.a * p.b * p.t, p.t};
      if (heun_series(red, 16) != hpg_series(h, 16)) return std::string("reduction to 2F1 fails");
      if (riemann_scheme_of(p).exponent_sum() != Q(2) || riemann_scheme_of(h).exponent_sum() != Q(1))
        return std::string("Fuchs relation fails");
      ++done;
    }
    int caught = 0, total = 0;
    for (const auto& r : catalog()) {
      if (!r.verifiable()) continue;
      for (const char* side : {"lhs", "rhs"})
        for (const auto& b : (std::string(side) == "lhs" ? r.lhs : r.rhs)) {
          ++total;
          if (!verify_identity(mutated(r, side, b.first), opts()).passed) ++caught;
        }
    }
    if (caught != total) return std::to_string(total - caught) + " mutations slipped through";
    return std::string();
  });

  return failures == 0 ? 0 : 1;
}
