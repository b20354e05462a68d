#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "geodrev/expression.hpp"

namespace geodrev {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::vector<Var>& vars) : text_(text), vars_(vars) {}

  Expression parse() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    Expression e = parse_sum();
    skip_ws();
    if (pos_ < text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expression parse_sum() {
    Expression e = parse_product();
    for (;;) {
      if (accept('+')) {
        e = e + parse_product();
      } else if (accept('-')) {
        e = e - parse_product();
      } else {
        return e;
      }
    }
  }

  Expression parse_product() {
    Expression e = parse_unary();
    for (;;) {
      if (accept('*')) {
        e = e * parse_unary();
      } else if (accept('/')) {
        e = e / parse_unary();
      } else {
        return e;
      }
    }
  }

  Expression parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expression parse_power() {
    Expression base = parse_primary();
    if (accept('^')) return pow(base, parse_integer_exponent());
    return base;
  }

  int parse_integer_exponent() {
    const bool paren = accept('(');
    skip_ws();
    const std::size_t start = pos_;
    bool negative = false;
    if (accept('-')) {
      negative = true;
    } else {
      accept('+');
    }
    skip_ws();
    const double value = parse_number_literal();
    if (value != std::floor(value) || value > 1e6) throw ParseError("exponent must be an integer", start);
    if (paren) expect(')');
    const int n = static_cast<int>(value);
    return negative ? -n : n;
  }

  double parse_number_literal() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    if (pos_ == start) {
      if (start >= text_.size()) throw ParseError("expected a number but input ended", start);
      throw ParseError("expected a number", start);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_) throw ParseError("malformed number", start);
    return value;
  }

  Expression parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression e = parse_sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Expression::constant(parse_number_literal());
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expression parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));

    using UnaryFn = Expression (*)(const Expression&);
    static constexpr std::pair<std::string_view, UnaryFn> functions[] = {
        {"sin", &sin}, {"cos", &cos}, {"exp", &exp}, {"ln", &ln}, {"sqrt", &sqrt}};
    for (const auto& [fname, fn] : functions) {
      if (name == fname) {
        expect('(');
        Expression arg = parse_sum();
        expect(')');
        return fn(arg);
      }
    }
    if (name == "pi") return Expression::constant(std::numbers::pi);
    for (Var v : {Var::x1, Var::x2, Var::s, Var::t}) {
      if (name == var_name(v)) {
        if (std::find(vars_.begin(), vars_.end(), v) == vars_.end()) throw UnknownIdentifierError(name, start);
        return Expression::variable(v);
      }
    }
    throw UnknownIdentifierError(name, start);
  }

  std::string_view text_;
  const std::vector<Var>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse_expr(std::string_view text, const std::vector<Var>& allowed_vars) {
  return Parser(text, allowed_vars).parse();
}

}  // namespace geodrev
