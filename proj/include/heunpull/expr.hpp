#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "heunpull/ratfun.hpp"

namespace heunpull {

/// Immutable expression tree over integer literals and named symbols.
class Expr {
 public:
  enum class Kind { kNum, kSym, kAdd, kSub, kMul, kDiv, kNeg, kPow };

  Expr() : Expr(Rational(0)) {}
  Expr(Rational value);  // NOLINT(google-explicit-constructor); negative/fractional values become trees
  Expr(int value) : Expr(Rational(value)) {}  // NOLINT(google-explicit-constructor)
  static Expr symbol(std::string name);
  static Expr parse(std::string_view text);

  Kind kind() const { return node_->kind; }
  const Rational& value() const { return node_->value; }
  const std::string& name() const { return node_->name; }
  const Expr& lhs() const { return node_->kids[0]; }
  const Expr& rhs() const { return node_->kids[1]; }

  /// Canonical printing; parse(to_string()) reproduces the tree.
  std::string to_string() const;

  std::set<std::string> symbols() const;
  bool depends_on(const std::string& name) const { return symbols().count(name) > 0; }

  /// Simultaneous substitution of symbols.
  Expr substitute(const std::map<std::string, Expr>& bindings) const;

  friend Expr operator+(const Expr& a, const Expr& b) { return make(Kind::kAdd, {a, b}); }
  friend Expr operator-(const Expr& a, const Expr& b) { return make(Kind::kSub, {a, b}); }
  friend Expr operator*(const Expr& a, const Expr& b) { return make(Kind::kMul, {a, b}); }
  friend Expr operator/(const Expr& a, const Expr& b) { return make(Kind::kDiv, {a, b}); }
  Expr operator-() const { return make(Kind::kNeg, {*this}); }
  Expr pow(const Expr& e) const { return make(Kind::kPow, {*this, e}); }

  friend bool operator==(const Expr& a, const Expr& b) { return a.to_string() == b.to_string(); }

 private:
  struct Node {
    Kind kind;
    Rational value;
    std::string name;
    std::vector<Expr> kids;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr make(Kind k, std::vector<Expr> kids);
  std::shared_ptr<const Node> node_;

  template <class T>
  friend T evaluate(const Expr& e, const std::function<T(const std::string&)>& lookup,
                    const std::function<T(const Rational&)>& constant);
};

/// Constant integer value of an exponent expression (no symbols allowed).
Rational constant_value(const Expr& e);

template <class T>
T integer_power(const T& base, long e, const std::function<T(const Rational&)>& constant) {
  if (e < 0) return constant(Rational(1)) / integer_power(base, -e, constant);
  T result = constant(Rational(1));
  T b = base;
  while (e > 0) {
    if (e & 1) result = result * b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return result;
}

/// Fold an expression into any ring-with-division T.
template <class T>
T evaluate(const Expr& e, const std::function<T(const std::string&)>& lookup,
           const std::function<T(const Rational&)>& constant) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::kNum: return constant(e.value());
    case K::kSym: return lookup(e.name());
    case K::kAdd: return evaluate(e.lhs(), lookup, constant) + evaluate(e.rhs(), lookup, constant);
    case K::kSub: return evaluate(e.lhs(), lookup, constant) - evaluate(e.rhs(), lookup, constant);
    case K::kMul: return evaluate(e.lhs(), lookup, constant) * evaluate(e.rhs(), lookup, constant);
    case K::kDiv: return evaluate(e.lhs(), lookup, constant) / evaluate(e.rhs(), lookup, constant);
    case K::kNeg: return -evaluate(e.lhs(), lookup, constant);
    case K::kPow: {
      const Rational ex = constant_value(e.rhs());
      if (!ex.is_integer()) throw DomainError("non-integer power inside an expression: " + e.to_string());
      return integer_power(evaluate(e.lhs(), lookup, constant), ex.numerator().get_si(), constant);
    }
  }
  throw DomainError("corrupt expression");
}

/// Scalar environment: symbol values in F; `w` resolves to the field's omega.
template <Field F>
using Environment = std::map<std::string, F>;

template <Field F>
F evaluate_scalar(const Expr& e, const Environment<F>& env) {
  return evaluate<F>(
      e,
      [&](const std::string& n) -> F {
        auto it = env.find(n);
        if (it != env.end()) return it->second;
        if (n == "w") return FieldTraits<F>::omega();
        throw ParseError("unbound symbol '" + n + "' in " + e.to_string());
      },
      [](const Rational& r) { return F(r); });
}

/// Rational function of x with the other symbols taken from env.
template <Field F>
RationalFunction<F> evaluate_function(const Expr& e, const Environment<F>& env, const std::string& var = "x") {
  using R = RationalFunction<F>;
  return evaluate<R>(
      e,
      [&](const std::string& n) -> R {
        if (n == var) return R::x();
        auto it = env.find(n);
        if (it != env.end()) return R(it->second);
        if (n == "w") return R(FieldTraits<F>::omega());
        throw ParseError("unbound symbol '" + n + "' in " + e.to_string());
      },
      [](const Rational& r) { return R(F(r)); });
}

}  // namespace heunpull
