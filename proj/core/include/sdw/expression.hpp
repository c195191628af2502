#pragma once

// Expression language for metric and gauge field components.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | x<index> | func '(' expr ')' | '(' expr ')'
//
// func is one of sin cos tan exp ln sqrt sinh cosh atan.

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdw/jets.hpp"

namespace sdw {

class Expression {
 public:
  enum class Kind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };
  enum class Function { Sin, Cos, Tan, Exp, Ln, Sqrt, Sinh, Cosh, Atan };

  Expression() : Expression(number(0.0)) {}

  static Expression number(double v);
  static Expression variable(int index);
  static Expression negate(const Expression& a);
  static Expression add(const Expression& a, const Expression& b);
  static Expression sub(const Expression& a, const Expression& b);
  static Expression mul(const Expression& a, const Expression& b);
  static Expression div(const Expression& a, const Expression& b);
  static Expression pow(const Expression& a, const Expression& b);
  static Expression call(Function f, const Expression& a);

  Kind kind() const noexcept { return node_->kind; }
  double value() const noexcept { return node_->value; }
  int index() const noexcept { return node_->index; }
  Function function() const noexcept { return node_->function; }
  const Expression& lhs() const { return node_->args[0]; }
  const Expression& rhs() const { return node_->args[1]; }

  bool is_number(double v) const noexcept { return kind() == Kind::Number && value() == v; }
  /// Largest coordinate index referenced, or -1.
  int max_variable() const;

  /// Symbolic partial derivative with light constant folding.
  Expression derivative(int var) const;

  std::string to_string() const;

  friend bool operator==(const Expression& a, const Expression& b);

  template <class T>
  T evaluate(std::span<const T> x) const;

  static const char* function_name(Function f);

 private:
  struct Node {
    Kind kind = Kind::Number;
    double value = 0.0;
    int index = 0;
    Function function = Function::Sin;
    std::vector<Expression> args;
  };
  explicit Expression(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expression make(Kind k, std::vector<Expression> args);

  std::shared_ptr<const Node> node_;
};

/// Parses `src`; coordinates must satisfy index < dim. Throws ParseError with a byte offset.
Expression parse_expression(std::string_view src, int dim);

template <class T>
T apply_function(Expression::Function f, const T& a) {
  using F = Expression::Function;
  switch (f) {
    case F::Sin: return sin(a);
    case F::Cos: return cos(a);
    case F::Tan: return tan(a);
    case F::Exp: return exp(a);
    case F::Ln: return ln(a);
    case F::Sqrt: return sqrt(a);
    case F::Sinh: return sinh(a);
    case F::Cosh: return cosh(a);
    case F::Atan: return atan(a);
  }
  return a;
}

template <class T>
T Expression::evaluate(std::span<const T> x) const {
  switch (kind()) {
    case Kind::Number: return T(value());
    case Kind::Variable: return x[static_cast<std::size_t>(index())];
    case Kind::Negate: return -lhs().evaluate(x);
    case Kind::Add: return lhs().evaluate(x) + rhs().evaluate(x);
    case Kind::Sub: return lhs().evaluate(x) - rhs().evaluate(x);
    case Kind::Mul: return lhs().evaluate(x) * rhs().evaluate(x);
    case Kind::Div: return lhs().evaluate(x) / rhs().evaluate(x);
    case Kind::Pow: {
      T base = lhs().evaluate(x);
      if (rhs().kind() == Kind::Number) {
        const double r = rhs().value();
        if (r == static_cast<int>(r) && std::abs(r) <= 64) return ipow(base, static_cast<int>(r));
        return sdw::pow(base, r);
      }
      return exp(rhs().evaluate(x) * ln(base));
    }
    case Kind::Call: return apply_function(function(), lhs().evaluate(x));
  }
  return T(0.0);
}

}  // namespace sdw
