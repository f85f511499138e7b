// Command-line front end: expand, verify, orbit, search-covering, classify, catalog.
#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <sstream>

#include "heunpull/catalog.hpp"
#include "heunpull/covering.hpp"
#include "heunpull/driver.hpp"
#include "heunpull/expr.hpp"
#include "heunpull/group.hpp"

#ifndef HEUNPULL_CATALOG_PATH
#define HEUNPULL_CATALOG_PATH "data/catalog.txt"
#endif

using namespace heunpull;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFail = 1, kInput = 2, kUnsupported = 3 };

struct Options {
  std::string catalog = HEUNPULL_CATALOG_PATH;
  VerifyOptions verify;
  std::string format = "text";
  bool serial = false;
  bool structured() const { return format == "structured"; }
};

template <Field F>
std::map<std::string, F> parse_params(const std::string& text) {
  std::map<std::string, F> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("expected name=value, got '" + item + "'");
    std::string name = item.substr(0, eq);
    name.erase(std::remove(name.begin(), name.end(), ' '), name.end());
    out[name] = evaluate_scalar(Expr::parse(item.substr(eq + 1)), Environment<F>{});
  }
  return out;
}

template <Field F>
F need(const std::map<std::string, F>& m, const std::string& k) {
  auto it = m.find(k);
  if (it == m.end()) throw ParseError("missing parameter '" + k + "'");
  return it->second;
}

template <Field F>
HeunParams<F> heun_params(const std::map<std::string, F>& m) {
  return {need(m, "a"), need(m, "b"), need(m, "c"), need(m, "d"), need(m, "q"), need(m, "t")};
}
template <Field F>
HypergeometricParams<F> hpg_params(const std::map<std::string, F>& m) {
  return {need(m, "a"), need(m, "b"), need(m, "c")};
}

template <Field F>
int run_expand(const Options& o, const std::string& equation, const std::string& params) {
  auto m = parse_params<F>(params);
  Series<F> s = equation == "heun" ? heun_series(heun_params(m), o.verify.order) : hpg_series(hpg_params(m), o.verify.order);
  if (o.structured()) {
    json j;
    j["equation"] = equation;
    j["order"] = o.verify.order;
    for (const auto& c : s.coeffs()) j["coefficients"].push_back(to_string(c));
    std::cout << j.dump(2) << "\n";
  } else {
    for (int i = 0; i <= s.order(); ++i) std::cout << "x^" << i << ": " << to_string(s[i]) << "\n";
  }
  return kOk;
}

json report_json(const VerifyReport& r) {
  json j;
  j["id"] = r.id;
  j["field"] = r.field;
  j["passed"] = r.passed;
  j["samples"] = r.samples;
  j["rejected"] = r.rejected;
  if (r.mismatch) j["mismatch"] = {{"sample", r.mismatch->sample}, {"index", r.mismatch->index},
                                  {"lhs", r.mismatch->lhs}, {"rhs", r.mismatch->rhs}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

std::string report_line(const VerifyReport& r) {
  std::string s = std::string(r.passed ? "PASS" : "FAIL") + "  " + r.id + "  [" + r.field + ", " +
                  std::to_string(r.samples) + " samples";
  if (r.rejected) s += ", " + std::to_string(r.rejected) + " degenerate draws";
  s += "]";
  if (r.mismatch)
    s += "  coefficient " + std::to_string(r.mismatch->index) + " differs at " + r.mismatch->sample + ": " +
         r.mismatch->lhs + " vs " + r.mismatch->rhs;
  if (!r.error.empty()) s += "  " + r.error;
  return s;
}

int run_verify(const Options& o, const std::vector<std::string>& ids, bool all) {
  auto records = load_catalog(o.catalog);
  std::vector<TransformationRecord> todo;
  if (all) {
    for (const auto& r : records)
      if (r.verifiable()) todo.push_back(r);
  } else {
    for (const auto& id : ids) {
      const auto& r = find_record(records, id);
      if (!r.verifiable()) throw UnsupportedError("record '" + id + "' stores a signature only");
      todo.push_back(r);
    }
  }
  auto reports = verify_records(todo, o.verify, o.serial ? Execution::kSerial : Execution::kParallel);
  // Accessory check rides along for Heun left-hand sides.
  std::vector<VerifyReport> accessory;
  for (const auto& r : todo)
    if (r.kind == RecordKind::kHpgToHeun) accessory.push_back(check_accessory(r, o.verify));
  int passed = 0;
  for (const auto& r : reports) passed += r.passed ? 1 : 0;
  bool acc_ok = std::all_of(accessory.begin(), accessory.end(), [](const VerifyReport& r) { return r.passed; });
  if (o.structured()) {
    json j;
    j["order"] = o.verify.order;
    j["samples"] = o.verify.samples;
    j["seed"] = o.verify.seed;
    for (const auto& r : reports) j["records"].push_back(report_json(r));
    for (const auto& r : accessory) j["accessory"].push_back(report_json(r));
    j["passed"] = passed;
    j["total"] = reports.size();
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& r : reports) std::cout << report_line(r) << "\n";
    for (const auto& r : accessory)
      if (!r.passed) std::cout << "ACCESSORY " << report_line(r) << "\n";
    std::cout << passed << "/" << reports.size() << " identities verified (order " << o.verify.order << ", "
              << o.verify.samples << " samples, seed " << o.verify.seed << "); accessory "
              << (acc_ok ? "ok" : "MISMATCH") << "\n";
  }
  return passed == static_cast<int>(reports.size()) && acc_ok ? kOk : kFail;
}

template <Field F, class Params>
json orbit_record(const SolutionRecord<F, Params>& r) {
  json j;
  j["label"] = r.label;
  j["argument"] = r.argument.to_string();
  std::string pre;
  for (const auto& t : r.prefactor)
    pre += (pre.empty() ? "" : " * ") + std::string("(") + to_string(t.constant) + " + " + to_string(t.slope) +
           "*x)^(" + to_string(t.exponent) + ")";
  j["prefactor"] = pre.empty() ? "1" : pre;
  j["params"] = to_string(r.params);
  return j;
}

template <class Orb, class Params>
int report_orbit(const Options& o, const Orb& orbit, const Params& base, const std::string& equation) {
  auto ok = verify_orbit(orbit, base, std::min(o.verify.order, 10), o.serial ? Execution::kSerial : Execution::kParallel);
  const auto good = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
  if (o.structured()) {
    json j;
    j["equation"] = equation;
    j["size"] = orbit.records.size();
    j["generic_size"] = orbit.generic_size;
    j["verified"] = good;
    for (std::size_t i = 0; i < orbit.records.size(); ++i) {
      auto r = orbit_record(orbit.records[i]);
      r["verified"] = ok[i] != 0;
      j["records"].push_back(r);
    }
    std::cout << j.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < orbit.records.size(); ++i) {
      auto r = orbit_record(orbit.records[i]);
      std::cout << (ok[i] ? "ok  " : "BAD ") << r["params"].template get<std::string>() << "  argument "
                << r["argument"].template get<std::string>() << "  prefactor " << r["prefactor"].template get<std::string>() << "\n";
    }
    std::cout << orbit.records.size() << " records (generic " << orbit.generic_size << "), " << good
              << " pass the residual check\n";
  }
  return good == orbit.records.size() && !orbit.collapsed() ? kOk : kFail;
}

template <Field F>
int run_orbit(const Options& o, const std::string& equation, const std::string& params) {
  auto m = parse_params<F>(params);
  if (equation == "heun") {
    auto p = heun_params(m);
    return report_orbit(o, heun_orbit(p), p, equation);
  }
  auto p = hpg_params(m);
  return report_orbit(o, kummer_orbit(p), p, equation);
}

json search_json(const CoveringSearch& s) {
  json j;
  j["pattern"] = s.pattern.to_string();
  j["gauge"] = to_string(s.gauge);
  j["normalization"] = s.normalization;
  j["field"] = s.field;
  j["exists"] = s.exists();
  for (std::size_t i = 0; i < s.solutions.size(); ++i)
    j["solutions"].push_back({{"phi", s.solutions[i].phi.to_string()}, {"mobius_class", s.mobius_class[i]}});
  j["classes"] = s.class_count;
  if (!s.exists()) j["certificate"] = s.certificate;
  return j;
}

int run_search(const Options& o, const std::string& pattern, const std::string& gauge) {
  auto s = solve_covering(BranchingPattern::parse(pattern), parse_gauge(gauge));
  if (o.structured()) {
    std::cout << search_json(s).dump(2) << "\n";
    return kOk;
  }
  std::cout << "pattern " << s.pattern.to_string() << "  (gauge: " << s.normalization << ")\n";
  if (!s.exists()) {
    std::cout << "NO COVERING\ncertificate: " << s.certificate << "\n";
    return kOk;
  }
  std::cout << s.solutions.size() << " solution(s) over " << s.field << ", " << s.class_count
            << " up to Möbius transformations\n";
  for (std::size_t i = 0; i < s.solutions.size(); ++i)
    std::cout << "  [class " << s.mobius_class[i] << "] phi = " << s.solutions[i].phi << "\n";
  return kOk;
}

int run_classify(const Options& o, int params) {
  auto rows = classify(params, o.serial ? Execution::kSerial : Execution::kParallel);
  if (o.structured()) {
    json j;
    j["params"] = params;
    for (const auto& r : rows) {
      json x;
      x["source"] = r.row.source;
      x["target"] = r.row.target;
      x["degree"] = r.row.pattern.degree;
      x["pattern"] = r.row.pattern.to_string();
      x["status"] = r.status;
      x["search"] = search_json(r.search);
      for (const auto& d : r.decompositions)
        x["decompositions"].push_back({{"outer", d.outer.to_string("z")}, {"inner", d.inner.to_string()}});
      j["rows"].push_back(x);
    }
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  if (params == 3)
    std::cout << "3 free parameters: every point above 0, 1, infinity is singular, so d + 2 <= 4\n";
  else
    std::cout << "2 free parameters: exponent difference 1/k, 2/d + 1/k >= 1 with k > 1, d > 2\n";
  for (const auto& r : rows) {
    std::cout << r.row.source << " <-" << r.row.pattern.degree << "- " << r.row.target << "  "
              << r.row.pattern.to_string() << "  " << r.status;
    if (r.search.exists()) {
      std::cout << "  phi = " << r.search.solutions.front().phi;
      if (r.search.class_count != 1) std::cout << "  (" << r.search.class_count << " Möbius classes)";
    }
    std::cout << "\n";
    for (const auto& d : r.decompositions) std::cout << "    = " << d.outer.to_string("z") << " at z = " << d.inner << "\n";
  }
  return kOk;
}

int run_catalog(const Options& o, bool list, const std::string& show, bool dump) {
  auto records = load_catalog(o.catalog);
  if (dump) {
    std::cout << serialize_catalog(records);
    return kOk;
  }
  if (!show.empty()) {
    std::cout << serialize_record(find_record(records, show));
    return kOk;
  }
  (void)list;
  if (o.structured()) {
    json j;
    for (const auto& r : records)
      j.push_back({{"id", r.id}, {"kind", to_string(r.kind)}, {"field", r.field}, {"signature", r.signature}});
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& r : records) std::cout << r.id << "  " << to_string(r.kind) << "  " << r.signature << "\n";
  }
  return kOk;
}

bool want_omega(const Options& o, const std::string& params) {
  return o.verify.field == "q-omega" || (o.verify.field == "auto" && params.find('w') != std::string::npos);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact pull-back transformations between hypergeometric and Heun equations"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--catalog", o.catalog, "catalog file")->capture_default_str();
  app.add_option("--order", o.verify.order, "series order N")->capture_default_str();
  app.add_option("--samples", o.verify.samples, "random parameter samples per record")->capture_default_str();
  app.add_option("--seed", o.verify.seed, "random seed")->capture_default_str();
  app.add_option("--height", o.verify.height, "max numerator/denominator of samples")->capture_default_str();
  app.add_option("--field", o.verify.field, "q | q-omega | auto")
      ->check(CLI::IsMember({"q", "q-omega", "auto"}))
      ->capture_default_str();
  app.add_option("--format", o.format, "text | structured")->check(CLI::IsMember({"text", "structured"}));
  app.add_flag("--serial", o.serial, "use the serial reference kernels");

  std::string equation = "heun", params, pattern, gauge = "default", show;
  std::vector<std::string> ids;
  int class_params = 2;
  bool list = false, dump = false;

  auto* expand = app.add_subcommand("expand", "series jet of a canonical local solution");
  expand->add_option("--equation", equation)->check(CLI::IsMember({"heun", "hpg"}));
  expand->add_option("--params", params, "e.g. a=1/2,b=1/3,c=2/3,d=1/5,q=1,t=3")->required();
  auto* verify = app.add_subcommand("verify", "verify catalog identities by id");
  verify->add_option("ids", ids)->required();
  auto* verify_all = app.add_subcommand("verify-all", "verify every catalog identity");
  auto* orbit = app.add_subcommand("orbit", "Kummer (24) or Heun (192) solution records");
  orbit->add_option("--equation", equation)->check(CLI::IsMember({"heun", "hpg"}));
  orbit->add_option("--params", params)->required();
  auto* search = app.add_subcommand("search-covering", "solve for coverings with a branching pattern");
  search->add_option("--pattern", pattern)->required();
  search->add_option("--gauge", gauge)->check(CLI::IsMember({"default", "alternate"}));
  auto* cls = app.add_subcommand("classify", "re-derive the pattern classification");
  cls->add_option("--params", class_params)->check(CLI::IsMember({2, 3}));
  auto* cat = app.add_subcommand("catalog", "list, show or dump records");
  cat->add_flag("--list", list);
  cat->add_option("--show", show);
  cat->add_flag("--dump", dump);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    if (*expand)
      return want_omega(o, params) ? run_expand<OmegaRational>(o, equation, params) : run_expand<Rational>(o, equation, params);
    if (*verify) return run_verify(o, ids, false);
    if (*verify_all) return run_verify(o, ids, true);
    if (*orbit)
      return want_omega(o, params) ? run_orbit<OmegaRational>(o, equation, params) : run_orbit<Rational>(o, equation, params);
    if (*search) return run_search(o, pattern, gauge);
    if (*cls) return run_classify(o, class_params);
    if (*cat) return run_catalog(o, list, show, dump);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kUnsupported;
  } catch (const FieldError& e) {
    std::cerr << "field: " << e.what() << "\n";
    return kUnsupported;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }
  return kInput;
}
