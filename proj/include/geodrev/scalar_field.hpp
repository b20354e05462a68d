#pragma once

#include <initializer_list>
#include <map>
#include <memory>
#include <string_view>
#include <vector>

#include "geodrev/expression.hpp"

namespace geodrev {

// An expression together with the variables it is declared over. Symbolic
// partial derivatives are built on first request and cached; the cache is
// shared between copies and guarded by a mutex, so a field can be read from
// several threads.
class ScalarField {
 public:
  static constexpr int kMaxOrder = 3;

  ScalarField();
  ScalarField(Expression expr, std::vector<Var> vars);

  static ScalarField parse(std::string_view text, std::vector<Var> vars);

  const Expression& expr() const { return expr_; }
  const std::vector<Var>& vars() const { return vars_; }
  bool declares(Var v) const;

  double eval(const VarPoint& point) const { return expr_.eval(point); }
  // Every declared variable must be bound in `point`.
  double eval(const std::map<Var, double>& point) const;

  ScalarField diff(Var v) const;

  // Cached symbolic partial; `vars` lists the differentiation variables in
  // order, e.g. {Var::x1, Var::x1} for the second x1-derivative.
  const Expression& partial(std::initializer_list<Var> vars) const;

 private:
  struct Cache;
  Expression expr_;
  std::vector<Var> vars_;
  std::shared_ptr<Cache> cache_;
};

// Central difference (f(p + h e_v) - f(p - h e_v)) / (2h).
double fd_check(const ScalarField& field, Var v, const VarPoint& point, double h);

}  // namespace geodrev
