#include "geodrev/expression.hpp"

#include <cmath>
#include <cstdio>

namespace geodrev {

std::string_view var_name(Var v) {
  switch (v) {
    case Var::x1: return "x1";
    case Var::x2: return "x2";
    case Var::s: return "s";
    case Var::t: return "t";
  }
  return "?";
}

struct Expression::Node {
  Op op = Op::constant;
  double value = 0.0;
  Var var = Var::x1;
  int exponent = 0;
  Expression a{nullptr};
  Expression b{nullptr};
};

namespace {

const Expression& empty_child() {
  static const Expression zero = Expression::constant(0.0);
  return zero;
}

double eval_unary(Op op, double x) {
  switch (op) {
    case Op::neg: return -x;
    case Op::sin: return std::sin(x);
    case Op::cos: return std::cos(x);
    case Op::exp: return std::exp(x);
    case Op::ln:
      if (!(x > 0.0)) throw DomainError("ln of non-positive value");
      return std::log(x);
    case Op::sqrt:
      if (x < 0.0) throw DomainError("sqrt of negative value");
      return std::sqrt(x);
    default: break;
  }
  throw std::logic_error("not a unary op");
}

double eval_binary(Op op, double x, double y) {
  switch (op) {
    case Op::add: return x + y;
    case Op::sub: return x - y;
    case Op::mul: return x * y;
    case Op::div:
      if (y == 0.0) throw DomainError("division by zero");
      return x / y;
    default: break;
  }
  throw std::logic_error("not a binary op");
}

double eval_pow(double base, int n) {
  if (n < 0 && base == 0.0) throw DomainError("zero raised to a negative power");
  return std::pow(base, n);
}

std::string format_constant(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string text(buf);
  if (v < 0.0) return "(" + text + ")";
  return text;
}

std::string_view op_name(Op op) {
  switch (op) {
    case Op::neg: return "-";
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::exp: return "exp";
    case Op::ln: return "ln";
    case Op::sqrt: return "sqrt";
    case Op::add: return " + ";
    case Op::sub: return " - ";
    case Op::mul: return " * ";
    case Op::div: return " / ";
    default: return "?";
  }
}

}  // namespace

Expression::Expression() : Expression(constant(0.0)) {}

Expression Expression::constant(double value) {
  auto node = std::make_shared<Node>();
  node->op = Op::constant;
  node->value = value;
  return Expression(std::move(node));
}

Expression Expression::variable(Var v) {
  auto node = std::make_shared<Node>();
  node->op = Op::variable;
  node->var = v;
  return Expression(std::move(node));
}

Op Expression::op() const { return node_->op; }
bool Expression::is_constant(double value) const {
  return node_->op == Op::constant && node_->value == value;
}
double Expression::constant_value() const { return node_->value; }
Var Expression::variable_id() const { return node_->var; }
int Expression::exponent() const { return node_->exponent; }
const Expression& Expression::lhs() const { return node_->a.node_ ? node_->a : empty_child(); }
const Expression& Expression::rhs() const { return node_->b.node_ ? node_->b : empty_child(); }

Expression Expression::make_unary(Op op, const Expression& a) {
  if (a.is_constant()) {
    // Leave e.g. ln(-1) unfolded so that evaluation reports the domain error.
    try {
      return constant(eval_unary(op, a.constant_value()));
    } catch (const DomainError&) {
    }
  }
  if (op == Op::neg && a.op() == Op::neg) return a.lhs();
  auto node = std::make_shared<Node>();
  node->op = op;
  node->a = a;
  return Expression(std::move(node));
}

Expression Expression::make_binary(Op op, const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant() && !(op == Op::div && b.constant_value() == 0.0)) {
    return constant(eval_binary(op, a.constant_value(), b.constant_value()));
  }
  switch (op) {
    case Op::add:
      if (a.is_constant(0.0)) return b;
      if (b.is_constant(0.0)) return a;
      break;
    case Op::sub:
      if (b.is_constant(0.0)) return a;
      if (a.is_constant(0.0)) return make_unary(Op::neg, b);
      break;
    case Op::mul:
      if (a.is_constant(0.0) || b.is_constant(0.0)) return constant(0.0);
      if (a.is_constant(1.0)) return b;
      if (b.is_constant(1.0)) return a;
      if (a.is_constant(-1.0)) return make_unary(Op::neg, b);
      if (b.is_constant(-1.0)) return make_unary(Op::neg, a);
      break;
    case Op::div:
      if (b.is_constant(1.0)) return a;
      if (a.is_constant(0.0) && !b.is_constant(0.0)) return constant(0.0);
      break;
    default: break;
  }
  auto node = std::make_shared<Node>();
  node->op = op;
  node->a = a;
  node->b = b;
  return Expression(std::move(node));
}

Expression operator+(const Expression& a, const Expression& b) { return Expression::make_binary(Op::add, a, b); }
Expression operator-(const Expression& a, const Expression& b) { return Expression::make_binary(Op::sub, a, b); }
Expression operator*(const Expression& a, const Expression& b) { return Expression::make_binary(Op::mul, a, b); }
Expression operator/(const Expression& a, const Expression& b) { return Expression::make_binary(Op::div, a, b); }
Expression operator-(const Expression& a) { return Expression::make_unary(Op::neg, a); }
Expression sin(const Expression& a) { return Expression::make_unary(Op::sin, a); }
Expression cos(const Expression& a) { return Expression::make_unary(Op::cos, a); }
Expression exp(const Expression& a) { return Expression::make_unary(Op::exp, a); }
Expression ln(const Expression& a) { return Expression::make_unary(Op::ln, a); }
Expression sqrt(const Expression& a) { return Expression::make_unary(Op::sqrt, a); }

Expression pow(const Expression& base, int exponent) {
  if (exponent == 0) return Expression::constant(1.0);
  if (exponent == 1) return base;
  if (base.is_constant() && !(exponent < 0 && base.constant_value() == 0.0)) {
    return Expression::constant(eval_pow(base.constant_value(), exponent));
  }
  auto node = std::make_shared<Expression::Node>();
  node->op = Op::pow;
  node->a = base;
  node->exponent = exponent;
  return Expression(std::move(node));
}

double Expression::eval(const VarPoint& point) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::variable: return point[static_cast<std::size_t>(n.var)];
    case Op::neg:
    case Op::sin:
    case Op::cos:
    case Op::exp:
    case Op::ln:
    case Op::sqrt: return eval_unary(n.op, n.a.eval(point));
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: return eval_binary(n.op, n.a.eval(point), n.b.eval(point));
    case Op::pow: return eval_pow(n.a.eval(point), n.exponent);
  }
  throw std::logic_error("corrupt expression node");
}

Expression Expression::diff(Var v) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::constant: return constant(0.0);
    case Op::variable: return constant(n.var == v ? 1.0 : 0.0);
    case Op::neg: return -n.a.diff(v);
    case Op::sin: return cos(n.a) * n.a.diff(v);
    case Op::cos: return -(sin(n.a) * n.a.diff(v));
    case Op::exp: return *this * n.a.diff(v);
    case Op::ln: return n.a.diff(v) / n.a;
    case Op::sqrt: return n.a.diff(v) / (constant(2.0) * *this);
    case Op::add: return n.a.diff(v) + n.b.diff(v);
    case Op::sub: return n.a.diff(v) - n.b.diff(v);
    case Op::mul: return n.a.diff(v) * n.b + n.a * n.b.diff(v);
    case Op::div: {
      const Expression da = n.a.diff(v);
      const Expression db = n.b.diff(v);
      if (db.is_constant(0.0)) return da / n.b;
      return (da * n.b - n.a * db) / pow(n.b, 2);
    }
    case Op::pow:
      return constant(static_cast<double>(n.exponent)) * pow(n.a, n.exponent - 1) * n.a.diff(v);
  }
  throw std::logic_error("corrupt expression node");
}

Expression Expression::substitute(Var v, const Expression& replacement) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::constant: return *this;
    case Op::variable: return n.var == v ? replacement : *this;
    case Op::neg:
    case Op::sin:
    case Op::cos:
    case Op::exp:
    case Op::ln:
    case Op::sqrt: return make_unary(n.op, n.a.substitute(v, replacement));
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: return make_binary(n.op, n.a.substitute(v, replacement), n.b.substitute(v, replacement));
    case Op::pow: return pow(n.a.substitute(v, replacement), n.exponent);
  }
  throw std::logic_error("corrupt expression node");
}

bool Expression::depends_on(Var v) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::constant: return false;
    case Op::variable: return n.var == v;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: return n.a.depends_on(v) || n.b.depends_on(v);
    default: return n.a.depends_on(v);
  }
}

std::string Expression::to_string() const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::constant: return format_constant(n.value);
    case Op::variable: return std::string(var_name(n.var));
    case Op::neg: return "(-" + n.a.to_string() + ")";
    case Op::sin:
    case Op::cos:
    case Op::exp:
    case Op::ln:
    case Op::sqrt: return std::string(op_name(n.op)) + "(" + n.a.to_string() + ")";
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: return "(" + n.a.to_string() + std::string(op_name(n.op)) + n.b.to_string() + ")";
    case Op::pow: {
      std::string e = std::to_string(n.exponent);
      if (n.exponent < 0) e = "(" + e + ")";
      return "(" + n.a.to_string() + ")^" + e;
    }
  }
  return "?";
}

}  // namespace geodrev
