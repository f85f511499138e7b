#include "heunpull/expr.hpp"

#include <cctype>

namespace heunpull {

namespace {

using K = Expr::Kind;

int precedence(K k) {
  switch (k) {
    case K::kAdd:
    case K::kSub: return 1;
    case K::kMul:
    case K::kDiv: return 2;
    case K::kNeg: return 3;
    case K::kPow: return 4;
    default: return 5;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Expr parse_all() {
    Expr e = sum();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression '" + std::string(s_) + "': " + what + " at offset " + std::to_string(i_));
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (eat('+'))
        e = e + product();
      else if (eat('-'))
        e = e - product();
      else
        return e;
    }
  }
  Expr product() {
    Expr e = unary();
    for (;;) {
      if (eat('*'))
        e = e * unary();
      else if (eat('/'))
        e = e / unary();
      else
        return e;
    }
  }
  Expr unary() {
    if (eat('-')) return -unary();
    return power();
  }
  Expr power() {
    Expr base = atom();
    if (eat('^')) {
      // exponent binds tighter than unary minus on its left, allows a signed atom
      if (eat('-')) return base.pow(-atom());
      return base.pow(atom());
    }
    return base;
  }
  Expr atom() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end");
    const char c = s_[i_];
    if (c == '(') {
      ++i_;
      Expr e = sum();
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i_;
      while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
      Expr e(Rational::parse(s_.substr(i_, j - i_)));
      i_ = j;
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
      Expr e = Expr::symbol(std::string(s_.substr(i_, j - i_)));
      i_ = j;
      return e;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

std::string print(const Expr& e);

std::string wrap(const Expr& e, bool paren) { return paren ? "(" + print(e) + ")" : print(e); }

std::string print(const Expr& e) {
  const int p = precedence(e.kind());
  switch (e.kind()) {
    case K::kNum: return e.value().to_string();
    case K::kSym: return e.name();
    case K::kAdd: return wrap(e.lhs(), precedence(e.lhs().kind()) < p) + " + " + wrap(e.rhs(), precedence(e.rhs().kind()) <= p || e.rhs().kind() == K::kNeg);
    case K::kSub: return wrap(e.lhs(), precedence(e.lhs().kind()) < p) + " - " + wrap(e.rhs(), precedence(e.rhs().kind()) <= p || e.rhs().kind() == K::kNeg);
    case K::kMul: return wrap(e.lhs(), precedence(e.lhs().kind()) < p) + "*" + wrap(e.rhs(), precedence(e.rhs().kind()) <= p);
    case K::kDiv: return wrap(e.lhs(), precedence(e.lhs().kind()) < p) + "/" + wrap(e.rhs(), precedence(e.rhs().kind()) <= p);
    case K::kNeg: return "-" + wrap(e.lhs(), precedence(e.lhs().kind()) < p || e.lhs().kind() == K::kNeg);
    case K::kPow: {
      const bool simple = e.rhs().kind() == K::kNum || e.rhs().kind() == K::kSym;
      return wrap(e.lhs(), precedence(e.lhs().kind()) <= p) + "^" + wrap(e.rhs(), !simple);
    }
  }
  return "?";
}

}  // namespace

Expr::Expr(Rational value) {
  // Literals are non-negative integers; other constants are built as trees.
  if (value < Rational(0)) {
    *this = -Expr(-value);
    return;
  }
  if (!value.is_integer()) {
    *this = Expr(Rational(mpq_class(value.numerator()))) / Expr(Rational(mpq_class(value.denominator())));
    return;
  }
  node_ = std::make_shared<const Node>(Node{Kind::kNum, value, {}, {}});
}

Expr Expr::symbol(std::string name) {
  return Expr(std::make_shared<const Node>(Node{Kind::kSym, Rational(0), std::move(name), {}}));
}

Expr Expr::make(Kind k, std::vector<Expr> kids) {
  return Expr(std::make_shared<const Node>(Node{k, Rational(0), {}, std::move(kids)}));
}

Expr Expr::parse(std::string_view text) { return Parser(text).parse_all(); }

std::string Expr::to_string() const { return print(*this); }

std::set<std::string> Expr::symbols() const {
  std::set<std::string> out;
  std::function<void(const Expr&)> walk = [&](const Expr& e) {
    if (e.kind() == Kind::kSym) out.insert(e.name());
    for (const auto& k : e.node_->kids) walk(k);
  };
  walk(*this);
  return out;
}

Expr Expr::substitute(const std::map<std::string, Expr>& bindings) const {
  if (kind() == Kind::kSym) {
    auto it = bindings.find(name());
    return it == bindings.end() ? *this : it->second;
  }
  if (kind() == Kind::kNum) return *this;
  std::vector<Expr> kids;
  for (const auto& k : node_->kids) kids.push_back(k.substitute(bindings));
  return make(kind(), std::move(kids));
}

Rational constant_value(const Expr& e) {
  return evaluate<Rational>(
      e, [&](const std::string& n) -> Rational { throw ParseError("exponent must be a constant, found '" + n + "'"); },
      [](const Rational& r) { return r; });
}

}  // namespace heunpull
