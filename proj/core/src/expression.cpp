#include "sdw/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

#include "sdw/errors.hpp"

namespace sdw {

namespace {

constexpr std::array<const char*, 9> kFunctionNames = {"sin",  "cos",  "tan",  "exp", "ln",
                                                       "sqrt", "sinh", "cosh", "atan"};

int precedence(const Expression& e) {
  using K = Expression::Kind;
  switch (e.kind()) {
    case K::Add:
    case K::Sub: return 1;
    case K::Mul:
    case K::Div: return 2;
    case K::Negate: return 3;
    case K::Pow: return 4;
    case K::Number: return e.value() < 0 ? 0 : 5;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, std::abs(v));
  std::string s(buf, res.ptr);
  return v < 0 ? "(-" + s + ")" : s;
}

class Parser {
 public:
  Parser(std::string_view src, int dim) : src_(src), dim_(dim) {}

  Expression parse() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("empty expression", pos_);
    Expression e = expr();
    skip_ws();
    if (pos_ < src_.size()) throw ParseError("unexpected character '" + std::string(1, src_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expression expr() {
    Expression e = term();
    for (;;) {
      if (accept('+'))
        e = Expression::add(e, term());
      else if (accept('-'))
        e = Expression::sub(e, term());
      else
        return e;
    }
  }

  Expression term() {
    Expression e = unary();
    for (;;) {
      if (accept('*'))
        e = Expression::mul(e, unary());
      else if (accept('/'))
        e = Expression::div(e, unary());
      else
        return e;
    }
  }

  Expression unary() {
    if (accept('-')) return Expression::negate(unary());
    return power();
  }

  Expression power() {
    Expression base = primary();
    if (accept('^')) return Expression::pow(base, unary());
    return base;
  }

  Expression primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expression e = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  Expression number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
        pos_ = p;
      }
    }
    double v = 0.0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_) throw ParseError("malformed number", start);
    return Expression::number(v);
  }

  Expression identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    for (std::size_t f = 0; f < kFunctionNames.size(); ++f) {
      if (name == kFunctionNames[f]) {
        if (!accept('(')) throw ParseError("expected '(' after " + std::string(name), pos_);
        Expression arg = expr();
        if (!accept(')')) throw ParseError("expected ')'", pos_);
        return Expression::call(static_cast<Expression::Function>(f), arg);
      }
    }
    if (name.size() >= 2 && name[0] == 'x') {
      bool digits = true;
      for (char ch : name.substr(1)) digits = digits && std::isdigit(static_cast<unsigned char>(ch));
      if (digits) {
        int index = 0;
        std::from_chars(name.data() + 1, name.data() + name.size(), index);
        if (index >= dim_)
          throw ParseError("unknown coordinate '" + std::string(name) + "' (dimension " +
                               std::to_string(dim_) + ")",
                           start);
        return Expression::variable(index);
      }
    }
    throw ParseError("unknown symbol '" + std::string(name) + "'", start);
  }

  std::string_view src_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace

const char* Expression::function_name(Function f) { return kFunctionNames[static_cast<std::size_t>(f)]; }

Expression Expression::make(Kind k, std::vector<Expression> args) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->args = std::move(args);
  return Expression(std::move(n));
}

Expression Expression::number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->value = v;
  return Expression(std::move(n));
}

Expression Expression::variable(int index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->index = index;
  return Expression(std::move(n));
}

Expression Expression::negate(const Expression& a) { return make(Kind::Negate, {a}); }
Expression Expression::add(const Expression& a, const Expression& b) { return make(Kind::Add, {a, b}); }
Expression Expression::sub(const Expression& a, const Expression& b) { return make(Kind::Sub, {a, b}); }
Expression Expression::mul(const Expression& a, const Expression& b) { return make(Kind::Mul, {a, b}); }
Expression Expression::div(const Expression& a, const Expression& b) { return make(Kind::Div, {a, b}); }
Expression Expression::pow(const Expression& a, const Expression& b) { return make(Kind::Pow, {a, b}); }

Expression Expression::call(Function f, const Expression& a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->function = f;
  n->args = {a};
  return Expression(std::move(n));
}

int Expression::max_variable() const {
  int m = kind() == Kind::Variable ? index() : -1;
  for (const auto& a : node_->args) m = std::max(m, a.max_variable());
  return m;
}

bool operator==(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expression::Kind::Number: return a.value() == b.value();
    case Expression::Kind::Variable: return a.index() == b.index();
    case Expression::Kind::Call:
      if (a.function() != b.function()) return false;
      break;
    default: break;
  }
  if (a.node_->args.size() != b.node_->args.size()) return false;
  for (std::size_t i = 0; i < a.node_->args.size(); ++i)
    if (!(a.node_->args[i] == b.node_->args[i])) return false;
  return true;
}

namespace {

using K = Expression::Kind;

// Constructors with constant folding, used by symbolic differentiation only.
Expression s_add(const Expression& a, const Expression& b) {
  if (a.is_number(0.0)) return b;
  if (b.is_number(0.0)) return a;
  if (a.kind() == K::Number && b.kind() == K::Number) return Expression::number(a.value() + b.value());
  return Expression::add(a, b);
}

Expression s_neg(const Expression& a) {
  if (a.kind() == K::Number) return Expression::number(-a.value());
  if (a.kind() == K::Negate) return a.lhs();
  return Expression::negate(a);
}

Expression s_sub(const Expression& a, const Expression& b) {
  if (b.is_number(0.0)) return a;
  if (a.is_number(0.0)) return s_neg(b);
  if (a.kind() == K::Number && b.kind() == K::Number) return Expression::number(a.value() - b.value());
  return Expression::sub(a, b);
}

Expression s_mul(const Expression& a, const Expression& b) {
  if (a.is_number(0.0) || b.is_number(0.0)) return Expression::number(0.0);
  if (a.is_number(1.0)) return b;
  if (b.is_number(1.0)) return a;
  if (a.kind() == K::Number && b.kind() == K::Number) return Expression::number(a.value() * b.value());
  return Expression::mul(a, b);
}

Expression s_div(const Expression& a, const Expression& b) {
  if (a.is_number(0.0)) return Expression::number(0.0);
  if (b.is_number(1.0)) return a;
  return Expression::div(a, b);
}

Expression s_pow(const Expression& a, const Expression& b) {
  if (b.is_number(0.0)) return Expression::number(1.0);
  if (b.is_number(1.0)) return a;
  return Expression::pow(a, b);
}

Expression fn(Expression::Function f, const Expression& a) { return Expression::call(f, a); }

}  // namespace

Expression Expression::derivative(int var) const {
  using F = Function;
  switch (kind()) {
    case Kind::Number: return number(0.0);
    case Kind::Variable: return number(index() == var ? 1.0 : 0.0);
    case Kind::Negate: return s_neg(lhs().derivative(var));
    case Kind::Add: return s_add(lhs().derivative(var), rhs().derivative(var));
    case Kind::Sub: return s_sub(lhs().derivative(var), rhs().derivative(var));
    case Kind::Mul:
      return s_add(s_mul(lhs().derivative(var), rhs()), s_mul(lhs(), rhs().derivative(var)));
    case Kind::Div: {
      // (a' b - a b') / b^2
      Expression num = s_sub(s_mul(lhs().derivative(var), rhs()), s_mul(lhs(), rhs().derivative(var)));
      return s_div(num, s_pow(rhs(), number(2.0)));
    }
    case Kind::Pow: {
      const Expression& a = lhs();
      const Expression& b = rhs();
      Expression da = a.derivative(var);
      if (b.kind() == Kind::Number)
        return s_mul(s_mul(b, s_pow(a, number(b.value() - 1.0))), da);
      Expression db = b.derivative(var);
      // a^b (b' ln a + b a' / a)
      Expression inner = s_add(s_mul(db, fn(F::Ln, a)), s_div(s_mul(b, da), a));
      return s_mul(*this, inner);
    }
    case Kind::Call: {
      const Expression& u = lhs();
      Expression du = u.derivative(var);
      if (du.is_number(0.0)) return number(0.0);
      Expression outer;
      switch (function()) {
        case F::Sin: outer = fn(F::Cos, u); break;
        case F::Cos: outer = s_neg(fn(F::Sin, u)); break;
        case F::Tan: outer = s_div(number(1.0), s_pow(fn(F::Cos, u), number(2.0))); break;
        case F::Exp: outer = *this; break;
        case F::Ln: return s_div(du, u);
        case F::Sqrt: return s_div(du, s_mul(number(2.0), *this));
        case F::Sinh: outer = fn(F::Cosh, u); break;
        case F::Cosh: outer = fn(F::Sinh, u); break;
        case F::Atan: return s_div(du, s_add(number(1.0), s_pow(u, number(2.0))));
      }
      return s_mul(outer, du);
    }
  }
  return number(0.0);
}

std::string Expression::to_string() const {
  auto wrap = [](const Expression& e, bool paren) {
    return paren ? "(" + e.to_string() + ")" : e.to_string();
  };
  const int p = precedence(*this);
  switch (kind()) {
    case Kind::Number: return format_number(value());
    case Kind::Variable: return "x" + std::to_string(index());
    case Kind::Negate: return "-" + wrap(lhs(), precedence(lhs()) < 3);
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      const char* op = kind() == Kind::Add ? " + " : kind() == Kind::Sub ? " - " : kind() == Kind::Mul ? "*" : "/";
      return wrap(lhs(), precedence(lhs()) < p) + op + wrap(rhs(), precedence(rhs()) <= p);
    }
    case Kind::Pow: return wrap(lhs(), precedence(lhs()) <= 4) + "^" + wrap(rhs(), precedence(rhs()) < 4);
    case Kind::Call: return std::string(function_name(function())) + "(" + lhs().to_string() + ")";
  }
  return {};
}

Expression parse_expression(std::string_view src, int dim) { return Parser(src, dim).parse(); }

}  // namespace sdw
