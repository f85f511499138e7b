#include "heunpull/catalog.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "heunpull/omega.hpp"

namespace heunpull {

namespace {

const std::vector<std::string> kHeunNames = {"a", "b", "c", "d", "q", "t"};
const std::vector<std::string> kHpgNames = {"a", "b", "c"};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

Binding parse_binding(const std::string& text, const std::string& where) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ParseError(where + ": expected 'name = expression', got '" + text + "'");
  std::string name = trim(std::string_view(text).substr(0, eq));
  if (name.empty()) throw ParseError(where + ": missing name before '='");
  return {name, Expr::parse(std::string_view(text).substr(eq + 1))};
}

const std::vector<std::string>& names_for(bool heun) { return heun ? kHeunNames : kHpgNames; }

std::vector<Binding> parse_params(const std::string& text, bool heun, const std::string& where) {
  std::map<std::string, Expr> got;
  for (const auto& part : split(text, ';')) {
    if (part.empty()) continue;
    auto [name, e] = parse_binding(part, where);
    if (!got.emplace(name, e).second) throw ParseError(where + ": parameter '" + name + "' given twice");
  }
  std::vector<Binding> out;
  for (const auto& n : names_for(heun)) {
    auto it = got.find(n);
    if (it == got.end()) throw ParseError(where + ": missing parameter '" + n + "'");
    out.emplace_back(n, it->second);
    got.erase(it);
  }
  if (!got.empty()) throw ParseError(where + ": unexpected parameter '" + got.begin()->first + "'");
  return out;
}

std::vector<ThetaTerm> parse_theta(const std::string& text, const std::string& where) {
  std::vector<ThetaTerm> out;
  if (text == "1") return out;
  std::size_t i = 0;
  auto fail = [&](const std::string& what) { throw ParseError(where + ": theta " + what + " in '" + text + "'"); };
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  while (true) {
    skip();
    if (i >= text.size() || text[i] != '[') fail("expects '[base]^(exponent)'");
    const auto close = text.find(']', i);
    if (close == std::string::npos) fail("has an unclosed '['");
    Expr base = Expr::parse(std::string_view(text).substr(i + 1, close - i - 1));
    i = close + 1;
    if (text.compare(i, 2, "^(") != 0) fail("factor lacks '^('");
    i += 2;
    int depth = 1;
    const std::size_t start = i;
    while (i < text.size() && depth > 0) {
      if (text[i] == '(') ++depth;
      if (text[i] == ')') --depth;
      ++i;
    }
    if (depth != 0) fail("has an unbalanced exponent");
    out.push_back({base, Expr::parse(std::string_view(text).substr(start, i - 1 - start))});
    skip();
    if (i >= text.size()) break;
    if (text[i] != '*') fail("factors must be joined by '*'");
    ++i;
  }
  return out;
}

std::string params_string(const std::vector<Binding>& ps) {
  std::string out;
  for (const auto& [n, e] : ps) out += (out.empty() ? "" : "; ") + n + " = " + e.to_string();
  return out;
}

std::string theta_string(const std::vector<ThetaTerm>& th) {
  if (th.empty()) return "1";
  std::string out;
  for (const auto& t : th) out += (out.empty() ? "" : " * ") + ("[" + t.base.to_string() + "]^(" + t.exponent.to_string() + ")");
  return out;
}

void check_record(const TransformationRecord& r) {
  const std::string where = "record '" + r.id + "'";
  if (r.id.empty()) throw ParseError("record without id");
  if (!r.verifiable()) {
    if (r.signature.empty()) throw ParseError(where + ": signature-only record needs a signature");
    return;
  }
  if (r.lhs.empty() || r.rhs.empty()) throw ParseError(where + ": lhs and rhs are required");
  if (!r.phi) throw ParseError(where + ": phi is required");
  if (r.field != "q" && r.field != "q-omega") throw ParseError(where + ": unknown field '" + r.field + "'");
  std::set<std::string> known(r.free.begin(), r.free.end());
  known.insert("w");
  for (const auto& [n, e] : r.defines) {
    for (const auto& s : e.symbols())
      if (!known.count(s)) throw ParseError(where + ": define '" + n + "' uses unknown symbol '" + s + "'");
    known.insert(n);
  }
  auto check = [&](const Expr& e, bool allow_x) {
    for (const auto& s : e.symbols())
      if (!known.count(s) && !(allow_x && s == "x"))
        throw ParseError(where + ": unknown symbol '" + s + "' in " + e.to_string());
  };
  for (const auto& [n, e] : r.lhs) check(e, false);
  for (const auto& [n, e] : r.rhs) check(e, false);
  check(*r.phi, true);
  if (r.lhs_arg) check(*r.lhs_arg, true);
  for (const auto& t : r.theta) {
    check(t.base, true);
    check(t.exponent, false);
  }
  for (const auto& [n, e] : r.signature_symbols) check(e, false);
}

}  // namespace

std::string to_string(RecordKind k) {
  switch (k) {
    case RecordKind::kHpgToHpg: return "hpg-to-hpg";
    case RecordKind::kHpgToHeun: return "hpg-to-heun";
    case RecordKind::kHeunToHeun: return "heun-to-heun";
    case RecordKind::kSignatureOnly: return "signature-only";
  }
  return "?";
}

RecordKind parse_kind(std::string_view s) {
  for (auto k : {RecordKind::kHpgToHpg, RecordKind::kHpgToHeun, RecordKind::kHeunToHeun, RecordKind::kSignatureOnly})
    if (to_string(k) == s) return k;
  throw ParseError("unknown record kind '" + std::string(s) + "'");
}

const Expr& TransformationRecord::lhs_param(const std::string& name) const {
  for (const auto& [n, e] : lhs)
    if (n == name) return e;
  throw DomainError("record '" + id + "' has no lhs parameter '" + name + "'");
}

const Expr& TransformationRecord::rhs_param(const std::string& name) const {
  for (const auto& [n, e] : rhs)
    if (n == name) return e;
  throw DomainError("record '" + id + "' has no rhs parameter '" + name + "'");
}

std::vector<TransformationRecord> parse_catalog(std::string_view text) {
  std::vector<TransformationRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool open = false;
  TransformationRecord cur;
  std::string lhs_text, rhs_text;
  int lhs_line = 0, rhs_line = 0;

  auto flush = [&] {
    if (!open) return;
    if (!lhs_text.empty()) cur.lhs = parse_params(lhs_text, cur.lhs_is_heun(), "line " + std::to_string(lhs_line));
    if (!rhs_text.empty()) cur.rhs = parse_params(rhs_text, cur.rhs_is_heun(), "line " + std::to_string(rhs_line));
    check_record(cur);
    for (const auto& r : out)
      if (r.id == cur.id) throw ParseError("duplicate record id '" + cur.id + "'");
    out.push_back(std::move(cur));
    cur = TransformationRecord{};
    lhs_text.clear();
    rhs_text.clear();
    open = false;
  };

  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) {
      flush();
      continue;
    }
    if (t[0] == '#') continue;
    const auto colon = t.find(':');
    const std::string where = "line " + std::to_string(lineno);
    if (colon == std::string::npos) throw ParseError(where + ": expected 'key: value'");
    const std::string key = trim(std::string_view(t).substr(0, colon));
    const std::string value = trim(std::string_view(t).substr(colon + 1));
    if (!open && key != "id") throw ParseError(where + ": record must start with 'id:'");
    open = true;
    if (key == "id") {
      if (!cur.id.empty()) throw ParseError(where + ": second id in one record (missing blank line?)");
      cur.id = value;
    } else if (key == "kind") {
      cur.kind = parse_kind(value);
    } else if (key == "anchor") {
      cur.anchor = value;
    } else if (key == "field") {
      cur.field = value;
    } else if (key == "free") {
      std::istringstream ws(value);
      for (std::string s; ws >> s;) cur.free.push_back(s);
    } else if (key == "define") {
      cur.defines.push_back(parse_binding(value, where));
    } else if (key == "exclude") {
      const auto eq = value.find('=');
      if (eq == std::string::npos) throw ParseError(where + ": exclude needs 'symbol = v1, v2'");
      std::vector<Expr> vals;
      for (const auto& v : split(value.substr(eq + 1), ',')) vals.push_back(Expr::parse(v));
      cur.excludes.emplace_back(trim(std::string_view(value).substr(0, eq)), std::move(vals));
    } else if (key == "lhs") {
      lhs_text = value;
      lhs_line = lineno;
    } else if (key == "lhs-arg") {
      cur.lhs_arg = Expr::parse(value);
    } else if (key == "rhs") {
      rhs_text = value;
      rhs_line = lineno;
    } else if (key == "phi") {
      cur.phi = Expr::parse(value);
    } else if (key == "theta") {
      cur.theta = parse_theta(value, where);
    } else if (key == "signature") {
      cur.signature = value;
      parse_signature(value);
    } else if (key == "alpha" || key == "beta" || key == "gamma") {
      cur.signature_symbols.emplace_back(key, Expr::parse(value));
    } else {
      throw ParseError(where + ": unknown key '" + key + "'");
    }
  }
  flush();
  return out;
}

std::string serialize_record(const TransformationRecord& r) {
  std::string out;
  auto put = [&](const std::string& k, const std::string& v) { out += k + ": " + v + "\n"; };
  put("id", r.id);
  put("kind", to_string(r.kind));
  if (!r.anchor.empty()) put("anchor", r.anchor);
  put("field", r.field);
  if (!r.free.empty()) {
    std::string f;
    for (const auto& s : r.free) f += (f.empty() ? "" : " ") + s;
    put("free", f);
  }
  for (const auto& [n, e] : r.defines) put("define", n + " = " + e.to_string());
  for (const auto& [n, vals] : r.excludes) {
    std::string v;
    for (const auto& e : vals) v += (v.empty() ? "" : ", ") + e.to_string();
    put("exclude", n + " = " + v);
  }
  if (!r.lhs.empty()) put("lhs", params_string(r.lhs));
  if (r.lhs_arg) put("lhs-arg", r.lhs_arg->to_string());
  if (!r.rhs.empty()) put("rhs", params_string(r.rhs));
  if (r.phi) put("phi", r.phi->to_string());
  if (r.verifiable()) put("theta", theta_string(r.theta));
  if (!r.signature.empty()) put("signature", r.signature);
  for (const auto& [n, e] : r.signature_symbols) put(n, e.to_string());
  return out;
}

std::string serialize_catalog(const std::vector<TransformationRecord>& records) {
  std::string out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i) out += "\n";
    out += serialize_record(records[i]);
  }
  return out;
}

std::vector<TransformationRecord> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open catalog '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_catalog(ss.str());
}

const TransformationRecord& find_record(const std::vector<TransformationRecord>& records, const std::string& id) {
  for (const auto& r : records)
    if (r.id == id) return r;
  throw ParseError("no record with id '" + id + "'");
}

Signature parse_signature(const std::string& text) {
  // (e1, e2, ...) <-d- (f1, ...) [<-d'- (...)]
  std::vector<std::vector<Expr>> lists;
  std::vector<int> degrees;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto fail = [&](const std::string& what) -> void {
    throw ParseError("signature '" + text + "': " + what);
  };
  while (true) {
    skip();
    if (i >= text.size() || text[i] != '(') fail("expected '('");
    int depth = 0;
    const std::size_t start = i + 1;
    for (; i < text.size(); ++i) {
      if (text[i] == '(') ++depth;
      if (text[i] == ')' && --depth == 0) break;
    }
    if (i >= text.size()) fail("unbalanced parentheses");
    std::vector<Expr> list;
    for (const auto& part : split(text.substr(start, i - start), ',')) list.push_back(Expr::parse(part));
    lists.push_back(std::move(list));
    ++i;
    skip();
    if (i >= text.size()) break;
    if (text.compare(i, 2, "<-") != 0) fail("expected '<-d-'");
    i += 2;
    const std::size_t dstart = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == dstart || i >= text.size() || text[i] != '-') fail("malformed degree arrow");
    degrees.push_back(std::stoi(text.substr(dstart, i - dstart)));
    ++i;
  }
  if (degrees.empty()) fail("needs at least one arrow");
  Signature s;
  s.source = lists.front();
  s.target = lists.back();
  s.degree = 1;
  for (int d : degrees) s.degree *= d;
  return s;
}

TransformationRecord mutated(const TransformationRecord& rec, const std::string& side, const std::string& name,
                             const Rational& delta) {
  TransformationRecord r = rec;
  auto& ps = side == "lhs" ? r.lhs : r.rhs;
  if (side != "lhs" && side != "rhs") throw DomainError("mutation side must be lhs or rhs");
  for (auto& [n, e] : ps)
    if (n == name) {
      e = e + Expr(delta);
      r.id += "+" + side + "." + name;
      return r;
    }
  throw DomainError("record '" + rec.id + "' has no " + side + " parameter '" + name + "'");
}

TransformationRecord substitute_record(const TransformationRecord& rec, const std::map<std::string, Expr>& b) {
  TransformationRecord r = rec;
  for (auto& [n, e] : r.defines) e = e.substitute(b);
  for (auto& [n, e] : r.lhs) e = e.substitute(b);
  for (auto& [n, e] : r.rhs) e = e.substitute(b);
  if (r.phi) r.phi = r.phi->substitute(b);
  if (r.lhs_arg) r.lhs_arg = r.lhs_arg->substitute(b);
  for (auto& t : r.theta) {
    t.base = t.base.substitute(b);
    t.exponent = t.exponent.substitute(b);
  }
  for (auto& [n, e] : r.signature_symbols) e = e.substitute(b);
  return r;
}

TransformationRecord expand_defines(const TransformationRecord& rec) {
  std::map<std::string, Expr> b;
  for (const auto& [n, e] : rec.defines) b[n] = e.substitute(b);
  TransformationRecord r = rec;
  r.defines.clear();
  return substitute_record(r, b);
}

std::uint64_t record_seed(std::uint64_t seed, const std::string& id) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : id) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::string resolve_field(const TransformationRecord& rec, const std::string& requested) {
  if (requested == "auto") return rec.field;
  if (requested == "q") {
    if (rec.field == "q-omega")
      throw FieldError("record '" + rec.id + "' has coefficients in Q(w), which --field q cannot represent");
    return "q";
  }
  if (requested == "q-omega") return "q-omega";
  throw ParseError("unknown field '" + requested + "' (expected q, q-omega or auto)");
}

VerifyReport verify_identity(const TransformationRecord& rec, const VerifyOptions& opt) {
  return resolve_field(rec, opt.field) == "q" ? verify_identity_in<Rational>(rec, opt)
                                              : verify_identity_in<OmegaRational>(rec, opt);
}

VerifyReport check_accessory(const TransformationRecord& rec, const VerifyOptions& opt) {
  return resolve_field(rec, opt.field) == "q" ? check_accessory_in<Rational>(rec, opt)
                                              : check_accessory_in<OmegaRational>(rec, opt);
}

VerifyReport check_scheme(const TransformationRecord& rec, const VerifyOptions& opt) {
  return resolve_field(rec, opt.field) == "q" ? check_scheme_in<Rational>(rec, opt)
                                              : check_scheme_in<OmegaRational>(rec, opt);
}

// ---------------------------------------------------------------------------

namespace {

Expr sym(const char* n) { return Expr::symbol(n); }

/// Parameters of the exponent-(1-c) solution at 0 in terms of the exponent-0 ones.
std::vector<Binding> second_solution_params(const std::vector<Binding>& ps, bool heun) {
  std::map<std::string, Expr> m(ps.begin(), ps.end());
  const Expr one(1);
  const Expr a = m.at("a"), b = m.at("b"), c = m.at("c");
  std::vector<Binding> out = {{"a", a - c + one}, {"b", b - c + one}, {"c", Expr(2) - c}};
  if (heun) {
    const Expr d = m.at("d"), q = m.at("q"), t = m.at("t");
    out.emplace_back("d", d);
    out.emplace_back("q", q - (c - one) * (a + b - c - d + d * t + one));
    out.emplace_back("t", t);
  }
  return out;
}

/// Call fn(env) for up to `count` admissible samples of the free symbols.
template <Field F, class Fn>
int for_samples(const std::vector<std::string>& free, std::uint64_t seed, const VerifyOptions& opt, int count, Fn&& fn) {
  std::mt19937_64 rng(seed);
  int done = 0;
  for (int attempt = 0; attempt < opt.max_attempts && done < count; ++attempt) {
    Environment<F> env;
    for (const auto& s : free) env[s] = detail::random_scalar<F>(rng, opt.height);
    try {
      fn(env);
      ++done;
    } catch (const DomainError&) {
    }
  }
  return done;
}

std::vector<std::string> merged(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  for (const auto& s : b)
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  return out;
}

/// m(1-C) = 1-c at a sample; returns the instance and valuation m.
template <Field F>
std::pair<Instance<F>, int> paired_condition(const TransformationRecord& rec, const Environment<F>& sample) {
  const Instance<F> inst = instantiate(rec, sample);
  const auto& num = inst.phi.num();
  const int m = num.valuation();
  if (m < 1) throw DomainError("phi does not vanish at x = 0");
  const F big_c = rec.rhs_is_heun() ? detail::heun_from(inst.rhs).c : detail::hpg_from(inst.rhs).c;
  const F small_c = rec.lhs_is_heun() ? detail::heun_from(inst.lhs).c : detail::hpg_from(inst.lhs).c;
  const F one(Rational(1));
  if (!(F(Rational(m)) * (one - big_c) == one - small_c))
    throw DomainError("K undefined: m(1 - C) = " + to_string(F(Rational(m)) * (one - big_c)) + " differs from 1 - c = " +
                      to_string(one - small_c));
  return {inst, m};
}

}  // namespace

PairedConstant paired_constant(const TransformationRecord& rec, const Environment<Rational>& sample) {
  const TransformationRecord r = expand_defines(rec);
  const auto [inst, m] = paired_condition<Rational>(r, sample);
  const Rational c = r.rhs_is_heun() ? detail::heun_from(inst.rhs).c : detail::hpg_from(inst.rhs).c;
  return {inst.phi.num().coeff(m) / inst.phi.den().coeff(0), m, Rational(1) - c};
}

TransformationRecord paired_identity(const TransformationRecord& rec, const VerifyOptions& opt) {
  if (!rec.verifiable() || rec.lhs_arg) throw DomainError("record '" + rec.id + "' has no paired identity");
  const TransformationRecord base = expand_defines(rec);

  // Valuation of phi and the K-consistency condition m(1-C) = 1-c, checked at samples.
  int m = 0;
  auto probe = [&]<Field F>() {
    return for_samples<F>(base.free, record_seed(opt.seed ^ 0x7a11ULL, rec.id), opt, 3, [&](const Environment<F>& env) {
      const Instance<F> inst = instantiate(base, env);
      const int v = inst.phi.num().valuation();
      if (m != 0 && v != m) throw UnsupportedError("valuation of phi at 0 depends on the parameters");
      m = v;
      paired_condition<F>(base, env);
    });
  };
  const int ok = base.field == "q" ? probe.template operator()<Rational>() : probe.template operator()<OmegaRational>();
  if (ok == 0) throw DomainError("K undefined for record '" + rec.id + "': m(1 - C) differs from 1 - c");

  TransformationRecord r = base;
  r.id = rec.id + "-paired";
  r.signature.clear();
  r.signature_symbols.clear();
  r.lhs = second_solution_params(base.lhs, base.lhs_is_heun());
  r.rhs = second_solution_params(base.rhs, base.rhs_is_heun());
  const Expr big_c = base.rhs_param("c");
  r.theta.push_back({*base.phi / Expr::symbol("x").pow(Expr(m)), Expr(1) - big_c});
  return r;
}

namespace {

RecordKind composed_kind(bool lhs_heun, bool rhs_heun) {
  if (lhs_heun && rhs_heun) return RecordKind::kHeunToHeun;
  if (lhs_heun) return RecordKind::kHpgToHeun;
  if (!rhs_heun) return RecordKind::kHpgToHpg;
  throw UnsupportedError("composition would give a 2F1 pulled back from Heun's equation");
}

template <Field F>
void check_interface(const TransformationRecord& outer, const TransformationRecord& inner,
                     const std::vector<std::string>& free, const VerifyOptions& opt) {
  // inner's right side must be outer's left side
  TransformationRecord probe;
  probe.id = "interface";
  probe.free = free;
  probe.lhs = inner.rhs;
  probe.rhs = outer.lhs;
  for (const auto& ex : inner.excludes) probe.excludes.push_back(ex);
  for (const auto& ex : outer.excludes) probe.excludes.push_back(ex);
  const int n = for_samples<F>(free, record_seed(opt.seed ^ 0x1f1fULL, outer.id + "|" + inner.id), opt, 4,
                               [&](const Environment<F>& env) {
                                 const Instance<F> inst = instantiate(probe, env);
                                 const auto& have = inst.lhs;
                                 const auto& want = inst.rhs;
                                 const bool ab = (have.at("a") == want.at("a") && have.at("b") == want.at("b")) ||
                                                 (have.at("a") == want.at("b") && have.at("b") == want.at("a"));
                                 const bool a_ok = have.at("a") == want.at("a") || have.at("a") == want.at("b");
                                 if (!ab)
                                   throw InterfaceError("interface mismatch in parameters a, b: inner gives (" +
                                                            to_string(have.at("a")) + ", " + to_string(have.at("b")) +
                                                            "), outer expects (" + to_string(want.at("a")) + ", " +
                                                            to_string(want.at("b")) + ") at " +
                                                            describe_sample(probe, env),
                                                        a_ok ? "b" : "a");
                                 for (const auto& [name, v] : want) {
                                   if (name == "a" || name == "b") continue;
                                   if (!(have.at(name) == v))
                                     throw InterfaceError("interface mismatch in parameter '" + name + "': inner gives " +
                                                              to_string(have.at(name)) + ", outer expects " +
                                                              to_string(v) + " at " + describe_sample(probe, env),
                                                          name);
                                 }
                               });
  if (n == 0) throw DomainError("no admissible sample to check the composition interface");
}

}  // namespace

TransformationRecord compose_records(const TransformationRecord& outer, const TransformationRecord& inner,
                                     const std::map<std::string, Expr>& outer_bindings,
                                     const std::map<std::string, Expr>& inner_bindings, const VerifyOptions& opt) {
  if (!outer.verifiable() || !inner.verifiable()) throw DomainError("signature-only records cannot be composed");
  if (outer.lhs_arg || inner.lhs_arg) throw UnsupportedError("records with a non-identity lhs argument cannot be composed");
  const TransformationRecord o = substitute_record(expand_defines(outer), outer_bindings);
  const TransformationRecord i = substitute_record(expand_defines(inner), inner_bindings);
  if (i.rhs_is_heun() != o.lhs_is_heun())
    throw InterfaceError("inner right side and outer left side are different equation types", "kind");

  // free symbols that survive the bindings
  std::vector<std::string> free;
  auto collect = [&](const TransformationRecord& r, const std::map<std::string, Expr>& b) {
    for (const auto& s : r.free) {
      auto it = b.find(s);
      if (it == b.end()) {
        free = merged(free, {s});
      } else {
        for (const auto& t : it->second.symbols())
          if (t != "w" && t != "x") free = merged(free, {t});
      }
    }
  };
  collect(inner, inner_bindings);
  collect(outer, outer_bindings);

  const bool omega = o.field == "q-omega" || i.field == "q-omega";
  if (omega)
    check_interface<OmegaRational>(o, i, free, opt);
  else
    check_interface<Rational>(o, i, free, opt);

  TransformationRecord r;
  r.id = outer.id + "*" + inner.id;
  r.kind = composed_kind(i.lhs_is_heun(), o.rhs_is_heun());
  r.field = omega ? "q-omega" : "q";
  r.free = free;
  for (const auto& [name, vals] : i.excludes)
    if (std::find(free.begin(), free.end(), name) != free.end()) r.excludes.emplace_back(name, vals);
  for (const auto& [name, vals] : o.excludes)
    if (std::find(free.begin(), free.end(), name) != free.end()) r.excludes.emplace_back(name, vals);
  r.lhs = i.lhs;
  r.rhs = o.rhs;
  const std::map<std::string, Expr> into{{"x", *i.phi}};
  r.phi = o.phi->substitute(into);
  r.theta = i.theta;
  for (const auto& t : o.theta) r.theta.push_back({t.base.substitute(into), t.exponent});
  return r;
}

namespace {

template <Field F>
std::string record_difference_in(const TransformationRecord& a, const TransformationRecord& b, const VerifyOptions& opt) {
  if (a.kind != b.kind) return "kinds differ: " + to_string(a.kind) + " vs " + to_string(b.kind);
  if (a.lhs_arg.has_value() != b.lhs_arg.has_value()) return "only one record has an lhs argument";
  const auto free = merged(a.free, b.free);
  std::string diff;
  const int n = for_samples<F>(free, record_seed(opt.seed ^ 0xe9ULL, a.id + "=" + b.id), opt, opt.samples,
                               [&](const Environment<F>& env) {
                                 if (!diff.empty()) return;
                                 const Instance<F> x = instantiate(a, env);
                                 const Instance<F> y = instantiate(b, env);
                                 const std::string at = " at " + describe_sample(TransformationRecord{.free = free}, env);
                                 auto cmp = [&](const std::map<std::string, F>& p, const std::map<std::string, F>& q,
                                                const char* side) {
                                   for (const auto& [name, v] : p) {
                                     if (name == "a" || name == "b") continue;
                                     if (!(q.at(name) == v))
                                       diff = std::string(side) + "." + name + ": " + to_string(v) + " vs " +
                                              to_string(q.at(name)) + at;
                                   }
                                   const bool ab = (p.at("a") == q.at("a") && p.at("b") == q.at("b")) ||
                                                   (p.at("a") == q.at("b") && p.at("b") == q.at("a"));
                                   if (!ab && diff.empty()) diff = std::string(side) + ".{a,b} differ" + at;
                                 };
                                 cmp(x.lhs, y.lhs, "lhs");
                                 if (diff.empty()) cmp(x.rhs, y.rhs, "rhs");
                                 if (diff.empty() && !(x.phi == y.phi))
                                   diff = "phi: " + x.phi.to_string() + " vs " + y.phi.to_string() + at;
                                 if (diff.empty() && x.lhs_arg && !(*x.lhs_arg == *y.lhs_arg)) diff = "lhs-arg differs" + at;
                                 if (diff.empty() && !(theta_jet(x, opt.order) == theta_jet(y, opt.order)))
                                   diff = "theta jets differ" + at;
                               });
  if (n == 0) return "no admissible sample";
  return diff;
}

}  // namespace

std::string record_difference(const TransformationRecord& a, const TransformationRecord& b, const VerifyOptions& opt) {
  const TransformationRecord x = expand_defines(a), y = expand_defines(b);
  if (x.field == "q" && y.field == "q") return record_difference_in<Rational>(x, y, opt);
  return record_difference_in<OmegaRational>(x, y, opt);
}

}  // namespace heunpull
