#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heunpull/expr.hpp"
#include "heunpull/pullback.hpp"

namespace heunpull {

enum class RecordKind { kHpgToHpg, kHpgToHeun, kHeunToHeun, kSignatureOnly };

std::string to_string(RecordKind k);
RecordKind parse_kind(std::string_view s);

struct ThetaTerm {
  Expr base;
  Expr exponent;
};

using Binding = std::pair<std::string, Expr>;

/// One two-term identity  LHS(x) = theta(x) * RHS(phi(x)).
/// LHS and RHS are canonical local solutions (2F1 or Heun) with the given parameter maps.
struct TransformationRecord {
  std::string id;
  RecordKind kind = RecordKind::kHpgToHeun;
  std::string anchor;
  std::string field = "q";
  std::vector<std::string> free;
  std::vector<Binding> defines;
  std::vector<std::pair<std::string, std::vector<Expr>>> excludes;
  std::vector<Binding> lhs;
  std::optional<Expr> lhs_arg;
  std::vector<Binding> rhs;
  std::optional<Expr> phi;
  std::vector<ThetaTerm> theta;
  std::string signature;
  std::vector<Binding> signature_symbols;

  bool verifiable() const { return kind != RecordKind::kSignatureOnly; }
  bool lhs_is_heun() const { return kind == RecordKind::kHpgToHeun || kind == RecordKind::kHeunToHeun; }
  bool rhs_is_heun() const { return kind == RecordKind::kHeunToHeun; }
  const Expr& lhs_param(const std::string& name) const;
  const Expr& rhs_param(const std::string& name) const;
};

std::vector<TransformationRecord> parse_catalog(std::string_view text);
std::string serialize_record(const TransformationRecord& rec);
std::string serialize_catalog(const std::vector<TransformationRecord>& records);
std::vector<TransformationRecord> load_catalog(const std::string& path);
const TransformationRecord& find_record(const std::vector<TransformationRecord>& records, const std::string& id);

/// Exponent-difference signature: (sources) <-d- (targets).
struct Signature {
  std::vector<Expr> source;
  int degree = 0;
  std::vector<Expr> target;
};
Signature parse_signature(const std::string& text);

/// Replace +1 on one parameter expression ("lhs.q", "rhs.c", ...).
TransformationRecord mutated(const TransformationRecord& rec, const std::string& side, const std::string& name,
                             const Rational& delta = Rational(1));

/// Inline define lines into every expression.
TransformationRecord expand_defines(const TransformationRecord& rec);

struct VerifyOptions {
  int order = kDefaultOrder;
  int samples = 5;
  std::uint64_t seed = 0;
  int height = 50;
  std::string field = "auto";  // q | q-omega | auto
  int max_attempts = 200;
};

struct Mismatch {
  std::string sample;
  int index = 0;
  std::string lhs, rhs;
};

struct VerifyReport {
  std::string id;
  std::string field;
  bool passed = false;
  int samples = 0;
  int rejected = 0;
  std::optional<Mismatch> mismatch;
  std::string error;

  friend bool operator==(const VerifyReport& a, const VerifyReport& b) {
    return a.id == b.id && a.field == b.field && a.passed == b.passed && a.samples == b.samples &&
           a.rejected == b.rejected && a.error == b.error && a.mismatch.has_value() == b.mismatch.has_value() &&
           (!a.mismatch || (a.mismatch->sample == b.mismatch->sample && a.mismatch->index == b.mismatch->index &&
                            a.mismatch->lhs == b.mismatch->lhs && a.mismatch->rhs == b.mismatch->rhs));
  }
};

/// Deterministic per-record generator seed.
std::uint64_t record_seed(std::uint64_t seed, const std::string& id);

/// Field actually used for a record under the requested field option.
std::string resolve_field(const TransformationRecord& rec, const std::string& requested);

// ---------------------------------------------------------------------------
// Instances: a record evaluated at one parameter sample.

template <Field F>
struct Instance {
  Environment<F> env;
  std::map<std::string, F> lhs, rhs;
  RationalFunction<F> phi;
  std::optional<RationalFunction<F>> lhs_arg;
  std::vector<std::pair<RationalFunction<F>, F>> theta;
};

namespace detail {

template <Field F>
HeunParams<F> heun_from(const std::map<std::string, F>& m) {
  return {m.at("a"), m.at("b"), m.at("c"), m.at("d"), m.at("q"), m.at("t")};
}
template <Field F>
HypergeometricParams<F> hpg_from(const std::map<std::string, F>& m) {
  return {m.at("a"), m.at("b"), m.at("c")};
}

template <Field F>
F random_scalar(std::mt19937_64& rng, int height) {
  std::uniform_int_distribution<long> num(-height, height), den(1, height);
  const long n = num(rng), d = den(rng);
  return F(Rational(n, d));
}

}  // namespace detail

/// Evaluate a record at given free-symbol values. Throws DomainError on degenerate samples.
template <Field F>
Instance<F> instantiate(const TransformationRecord& rec, Environment<F> env) {
  for (const auto& [name, values] : rec.excludes) {
    const auto it = env.find(name);
    if (it == env.end()) continue;
    for (const auto& v : values)
      if (it->second == evaluate_scalar<F>(v, {})) throw DegenerateError(name + " hits an excluded value");
  }
  for (const auto& [name, e] : rec.defines) env[name] = evaluate_scalar(e, env);
  Instance<F> inst;
  for (const auto& [name, e] : rec.lhs) inst.lhs[name] = evaluate_scalar(e, env);
  for (const auto& [name, e] : rec.rhs) inst.rhs[name] = evaluate_scalar(e, env);
  if (rec.phi) inst.phi = evaluate_function(*rec.phi, env);
  if (rec.lhs_arg) inst.lhs_arg = evaluate_function(*rec.lhs_arg, env);
  for (const auto& t : rec.theta)
    inst.theta.emplace_back(evaluate_function(t.base, env), evaluate_scalar(t.exponent, env));
  inst.env = std::move(env);
  return inst;
}

template <Field F>
Series<F> theta_jet(const Instance<F>& inst, int order) {
  Series<F> s = Series<F>::one(order);
  for (const auto& [base, e] : inst.theta) {
    Series<F> b = series_at_zero(base, order);
    if (is_zero(b[0])) throw DegenerateError("prefactor base vanishes at x = 0");
    b = b.scaled(F(Rational(1)) / b[0]);
    s = s * b.pow(require_rational(e, "prefactor exponent"));
  }
  return s;
}

template <Field F>
Series<F> argument_jet(const RationalFunction<F>& f, int order) {
  Series<F> s = series_at_zero(f, order);
  if (!is_zero(s[0])) throw DegenerateError("argument does not vanish at x = 0");
  return s;
}

template <Field F>
Series<F> lhs_jet(const TransformationRecord& rec, const Instance<F>& inst, int order) {
  Series<F> s = rec.lhs_is_heun() ? heun_series(detail::heun_from(inst.lhs), order)
                                  : hpg_series(detail::hpg_from(inst.lhs), order);
  if (inst.lhs_arg) s = s.compose(argument_jet(*inst.lhs_arg, order));
  return s;
}

template <Field F>
Series<F> rhs_jet(const TransformationRecord& rec, const Instance<F>& inst, int order) {
  const Series<F> target = rec.rhs_is_heun() ? heun_series(detail::heun_from(inst.rhs), order)
                                             : hpg_series(detail::hpg_from(inst.rhs), order);
  return theta_jet(inst, order) * target.compose(argument_jet(inst.phi, order));
}

template <Field F>
std::string describe_sample(const TransformationRecord& rec, const Environment<F>& env) {
  std::string out;
  for (const auto& s : rec.free) {
    if (!out.empty()) out += ", ";
    out += s + " = " + to_string(env.at(s));
  }
  return out;
}

/// Draw random free-symbol values until the record instantiates without degeneracy.
template <Field F, class Check>
std::optional<Instance<F>> draw_instance(const TransformationRecord& rec, std::mt19937_64& rng, const VerifyOptions& opt,
                                         int& rejected, Check&& usable) {
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    Environment<F> env;
    for (const auto& s : rec.free) env[s] = detail::random_scalar<F>(rng, opt.height);
    try {
      Instance<F> inst = instantiate(rec, std::move(env));
      usable(inst);
      return inst;
    } catch (const DomainError&) {
      ++rejected;
    }
  }
  return std::nullopt;
}

/// Exact jet comparison of both sides at random admissible samples.
template <Field F>
VerifyReport verify_identity_in(const TransformationRecord& rec, const VerifyOptions& opt) {
  VerifyReport rep;
  rep.id = rec.id;
  rep.field = FieldTraits<F>::name;
  if (!rec.verifiable()) {
    rep.error = "signature-only record has no identity to verify";
    return rep;
  }
  std::mt19937_64 rng(record_seed(opt.seed, rec.id));
  for (int k = 0; k < opt.samples; ++k) {
    Series<F> l, r;
    auto inst = draw_instance<F>(rec, rng, opt, rep.rejected, [&](const Instance<F>& in) {
      l = lhs_jet(rec, in, opt.order);
      r = rhs_jet(rec, in, opt.order);
    });
    if (!inst) {
      rep.error = "no admissible parameter sample after " + std::to_string(opt.max_attempts) + " attempts";
      return rep;
    }
    ++rep.samples;
    for (int i = 0; i <= opt.order; ++i)
      if (!(l[i] == r[i])) {
        rep.mismatch = Mismatch{describe_sample(rec, inst->env), i, to_string(l[i]), to_string(r[i])};
        return rep;
      }
  }
  rep.passed = true;
  return rep;
}

VerifyReport verify_identity(const TransformationRecord& rec, const VerifyOptions& opt);

// ---------------------------------------------------------------------------
// Accessory parameter from the first jet coefficients.

/// q implied by phi = lambda x + ..., theta = 1 + mu x + ... for the record at a sample.
template <Field F>
F implied_accessory(const TransformationRecord& rec, const Instance<F>& inst, int order = 2) {
  const Series<F> ph = argument_jet(inst.phi, order);
  const Series<F> th = theta_jet(inst, order);
  const auto lhs = detail::heun_from(inst.lhs);
  if (!rec.rhs_is_heun()) {
    const auto t = detail::hpg_from(inst.rhs);
    return accessory_from_jet(t.c, t.a, t.b, lhs.c, lhs.t, ph[1], th[1]);
  }
  const auto t = detail::heun_from(inst.rhs);
  if (is_zero(t.c * t.t)) throw DomainError("target Heun jet undefined");
  return lhs.c * lhs.t * (th[1] + ph[1] * t.q / (t.c * t.t));
}

template <Field F>
VerifyReport check_accessory_in(const TransformationRecord& rec, const VerifyOptions& opt) {
  VerifyReport rep;
  rep.id = rec.id;
  rep.field = FieldTraits<F>::name;
  if (!rec.lhs_is_heun() || rec.lhs_arg) {
    rep.error = "record has no Heun accessory parameter on the left";
    return rep;
  }
  std::mt19937_64 rng(record_seed(opt.seed ^ 0x5bd1e995ULL, rec.id));
  for (int k = 0; k < opt.samples; ++k) {
    F implied;
    auto inst = draw_instance<F>(rec, rng, opt, rep.rejected, [&](const Instance<F>& in) { implied = implied_accessory(rec, in); });
    if (!inst) {
      rep.error = "no admissible parameter sample";
      return rep;
    }
    ++rep.samples;
    if (!(implied == inst->lhs.at("q"))) {
      rep.mismatch = Mismatch{describe_sample(rec, inst->env), 1, to_string(inst->lhs.at("q")), to_string(implied)};
      return rep;
    }
  }
  rep.passed = true;
  return rep;
}

VerifyReport check_accessory(const TransformationRecord& rec, const VerifyOptions& opt);

// ---------------------------------------------------------------------------
// Exponent transport and signature.

template <Field F>
RiemannScheme<F> lhs_scheme(const TransformationRecord& rec, const Instance<F>& inst) {
  return rec.lhs_is_heun() ? riemann_scheme_of(detail::heun_from(inst.lhs)) : riemann_scheme_of(detail::hpg_from(inst.lhs));
}
template <Field F>
RiemannScheme<F> rhs_scheme(const TransformationRecord& rec, const Instance<F>& inst) {
  return rec.rhs_is_heun() ? riemann_scheme_of(detail::heun_from(inst.rhs)) : riemann_scheme_of(detail::hpg_from(inst.rhs));
}

template <Field F>
std::vector<PrefactorFactor<F>> theta_factors(const Instance<F>& inst) {
  std::vector<PrefactorFactor<F>> out;
  for (const auto& [base, e] : inst.theta) {
    if (base.num().degree() >= 1) out.push_back({base.num(), e});
    if (base.den().degree() >= 1) out.push_back({base.den(), -e});
  }
  return out;
}

namespace detail {

template <Field F>
bool same_pair(const F& a1, const F& a2, const F& b1, const F& b2) {
  return (a1 == b1 && a2 == b2) || (a1 == b2 && a2 == b1);
}

template <Field F>
std::vector<Rational> abs_sorted(const std::vector<F>& v) {
  std::vector<Rational> out;
  for (const auto& x : v) out.push_back(require_rational(x, "exponent difference").abs());
  std::sort(out.begin(), out.end());
  return out;
}

template <Field F>
std::string pair_string(const F& a, const F& b) {
  return "(" + to_string(a) + ", " + to_string(b) + ")";
}

}  // namespace detail

/// Check the transported scheme, the synthesized prefactor and the signature at one sample.
/// Returns an empty string on success.
template <Field F>
std::string check_scheme_at(const TransformationRecord& rec, const Instance<F>& inst) {
  const auto source = rhs_scheme(rec, inst);
  const auto target = lhs_scheme(rec, inst);
  const PullbackSpec<F> spec{inst.phi, theta_factors(inst), source};
  const auto reports = transport_exponents(spec, rec.rhs_is_heun());
  const F zero(Rational(0)), one(Rational(1));
  for (const auto& tp : target.points) {
    auto it = std::find_if(reports.begin(), reports.end(),
                           [&](const auto& r) { return !r.algebraic() && r.location == tp.location; });
    if (it == reports.end())
      return "no point of the covering above the source singularities at x = " + detail::location_string(tp.location);
    if (!detail::same_pair(it->first, it->second, tp.first, tp.second))
      return "exponents at x = " + detail::location_string(tp.location) + " are " +
             detail::pair_string(it->first, it->second) + ", scheme needs " + detail::pair_string(tp.first, tp.second);
  }
  for (const auto& r : reports) {
    if (r.algebraic()) {
      if (!detail::same_pair(r.first, r.second, zero, one))
        return "extra singularities at the roots of " + r.conjugates.to_string() + " with exponents " +
               detail::pair_string(r.first, r.second);
      continue;
    }
    const bool listed = std::any_of(target.points.begin(), target.points.end(),
                                    [&](const auto& tp) { return tp.location == r.location; });
    if (listed) continue;
    if (!r.location) return "x = infinity carries exponents but is not a singular point of the left side";
    if (!detail::same_pair(r.first, r.second, zero, one))
      return "extra singularity at x = " + to_string(*r.location) + " with exponents " +
             detail::pair_string(r.first, r.second);
  }

  // The recipe reproduces theta for one of the two exponent choices at infinity.
  const Series<F> have = theta_jet(inst, 6);
  bool matched = false;
  for (int flip = 0; flip < 2 && !matched; ++flip) {
    RiemannScheme<F> chosen = source;
    if (flip) std::swap(chosen.points.back().first, chosen.points.back().second);
    try {
      matched = prefactor_jet(synthesize_prefactor(inst.phi, chosen), 6) == have;
    } catch (const DomainError&) {
    }
  }
  if (!matched) return "synthesized prefactor differs from the record's theta";

  if (!rec.signature.empty()) {
    const Signature sig = parse_signature(rec.signature);
    Environment<F> sym;
    for (const auto& [name, e] : rec.signature_symbols) sym[name] = evaluate_scalar(e, inst.env);
    auto eval_all = [&](const std::vector<Expr>& v) {
      std::vector<F> out;
      for (const auto& e : v) out.push_back(evaluate_scalar(e, sym));
      return out;
    };
    if (sig.degree != inst.phi.degree())
      return "signature degree " + std::to_string(sig.degree) + " but phi has degree " +
             std::to_string(inst.phi.degree());
    if (detail::abs_sorted(eval_all(sig.source)) != detail::abs_sorted(source.differences()))
      return "source exponent differences do not match the signature";
    if (detail::abs_sorted(eval_all(sig.target)) != detail::abs_sorted(target.differences()))
      return "target exponent differences do not match the signature";
  }
  return {};
}

template <Field F>
VerifyReport check_scheme_in(const TransformationRecord& rec, const VerifyOptions& opt) {
  VerifyReport rep;
  rep.id = rec.id;
  rep.field = FieldTraits<F>::name;
  if (!rec.verifiable() || rec.lhs_arg) {
    rep.error = "record has no single pull-back to check";
    return rep;
  }
  std::mt19937_64 rng(record_seed(opt.seed ^ 0x9e3779b97f4a7c15ULL, rec.id));
  for (int k = 0; k < opt.samples; ++k) {
    std::string problem;
    auto inst = draw_instance<F>(rec, rng, opt, rep.rejected, [&](const Instance<F>& in) {
      // degenerate exponent data (integer differences) would blur the scheme
      for (const auto& d : rhs_scheme(rec, in).differences())
        if (is_zero(d)) throw DegenerateError("zero exponent difference");
      problem = check_scheme_at(rec, in);
    });
    if (!inst) {
      rep.error = "no admissible parameter sample";
      return rep;
    }
    ++rep.samples;
    if (!problem.empty()) {
      rep.mismatch = Mismatch{describe_sample(rec, inst->env), 0, problem, ""};
      return rep;
    }
  }
  rep.passed = true;
  return rep;
}

VerifyReport check_scheme(const TransformationRecord& rec, const VerifyOptions& opt);

// ---------------------------------------------------------------------------
// Record algebra.

/// Companion identity for the second local solutions at x = 0 and z = 0.
TransformationRecord paired_identity(const TransformationRecord& rec, const VerifyOptions& opt = {});

/// Leading behaviour phi ~ lambda x^m at a sample; K = lambda^(1-C).
struct PairedConstant {
  Rational lambda;
  int valuation = 0;
  Rational exponent;
};
PairedConstant paired_constant(const TransformationRecord& rec, const Environment<Rational>& sample);

/// outer o inner, with symbol bindings applied to each record first.
TransformationRecord compose_records(const TransformationRecord& outer, const TransformationRecord& inner,
                                     const std::map<std::string, Expr>& outer_bindings,
                                     const std::map<std::string, Expr>& inner_bindings,
                                     const VerifyOptions& opt = {});

/// Field-by-field equality at random samples; empty string when equivalent.
std::string record_difference(const TransformationRecord& a, const TransformationRecord& b,
                              const VerifyOptions& opt = {});

/// Apply a substitution to every expression of a record.
TransformationRecord substitute_record(const TransformationRecord& rec, const std::map<std::string, Expr>& bindings);

}  // namespace heunpull
