#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace geodrev {

// The four coordinates an expression may mention: base point (x1, x2),
// profile argument s and fiber angle t.
enum class Var : std::uint8_t { x1 = 0, x2 = 1, s = 2, t = 3 };

inline constexpr std::size_t kVarCount = 4;

// Values bound to every variable, indexed by Var.
using VarPoint = std::array<double, kVarCount>;

std::string_view var_name(Var v);

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(const std::string& name, std::size_t offset)
      : ParseError("unknown identifier '" + name + "'", offset), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

enum class Op : std::uint8_t {
  constant,
  variable,
  neg,
  sin,
  cos,
  exp,
  ln,
  sqrt,
  add,
  sub,
  mul,
  div,
  pow,
};

// Immutable expression tree. Copies share nodes, so an Expression is cheap to
// pass by value and safe to read from many threads.
class Expression {
 public:
  Expression();  // constant 0

  static Expression constant(double value);
  static Expression variable(Var v);

  Op op() const;
  bool is_constant() const { return op() == Op::constant; }
  bool is_constant(double value) const;
  double constant_value() const;
  Var variable_id() const;
  int exponent() const;
  const Expression& lhs() const;
  const Expression& rhs() const;

  double eval(const VarPoint& point) const;

  Expression diff(Var v) const;
  Expression substitute(Var v, const Expression& replacement) const;
  bool depends_on(Var v) const;

  // Fully parenthesised infix text that parses back to an equivalent tree.
  std::string to_string() const;

  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a);
  friend Expression pow(const Expression& base, int exponent);
  friend Expression sin(const Expression& a);
  friend Expression cos(const Expression& a);
  friend Expression exp(const Expression& a);
  friend Expression ln(const Expression& a);
  friend Expression sqrt(const Expression& a);

 private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expression make_unary(Op op, const Expression& a);
  static Expression make_binary(Op op, const Expression& a, const Expression& b);

  std::shared_ptr<const Node> node_;
};

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression pow(const Expression& base, int exponent);
Expression sin(const Expression& a);
Expression cos(const Expression& a);
Expression exp(const Expression& a);
Expression ln(const Expression& a);
Expression sqrt(const Expression& a);

inline Expression operator*(double c, const Expression& e) { return Expression::constant(c) * e; }
inline Expression operator+(double c, const Expression& e) { return Expression::constant(c) + e; }
inline Expression operator-(double c, const Expression& e) { return Expression::constant(c) - e; }

// Parses infix text: + - * / with the usual precedence, unary minus binding
// looser than ^, integer exponents after ^, and the functions sin cos exp ln
// sqrt. `pi` is accepted as a constant. Identifiers outside allowed_vars raise
// UnknownIdentifierError.
Expression parse_expr(std::string_view text, const std::vector<Var>& allowed_vars);

}  // namespace geodrev
