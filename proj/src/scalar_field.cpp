#include "geodrev/scalar_field.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <stdexcept>

namespace geodrev {

// Keyed by the per-variable derivative counts, so mixed partials are shared
// regardless of the order in which they are requested.
struct ScalarField::Cache {
  std::mutex mutex;
  std::map<std::array<int, kVarCount>, Expression> partials;
};

ScalarField::ScalarField() : ScalarField(Expression::constant(0.0), {}) {}

ScalarField::ScalarField(Expression expr, std::vector<Var> vars)
    : expr_(std::move(expr)), vars_(std::move(vars)), cache_(std::make_shared<Cache>()) {
  for (Var v : {Var::x1, Var::x2, Var::s, Var::t}) {
    if (expr_.depends_on(v) && !declares(v)) {
      throw std::invalid_argument("expression uses undeclared variable " + std::string(var_name(v)));
    }
  }
}

ScalarField ScalarField::parse(std::string_view text, std::vector<Var> vars) {
  Expression e = parse_expr(text, vars);
  return ScalarField(std::move(e), std::move(vars));
}

bool ScalarField::declares(Var v) const { return std::find(vars_.begin(), vars_.end(), v) != vars_.end(); }

double ScalarField::eval(const std::map<Var, double>& point) const {
  VarPoint p{};
  for (Var v : vars_) {
    auto it = point.find(v);
    if (it == point.end()) throw std::invalid_argument("point does not bind " + std::string(var_name(v)));
    p[static_cast<std::size_t>(v)] = it->second;
  }
  return expr_.eval(p);
}

ScalarField ScalarField::diff(Var v) const {
  if (!declares(v)) throw std::invalid_argument("variable " + std::string(var_name(v)) + " is not declared");
  return ScalarField(partial({v}), vars_);
}

const Expression& ScalarField::partial(std::initializer_list<Var> vars) const {
  std::array<int, kVarCount> key{};
  for (Var v : vars) {
    if (!declares(v)) throw std::invalid_argument("variable " + std::string(var_name(v)) + " is not declared");
    ++key[static_cast<std::size_t>(v)];
  }
  if (static_cast<int>(vars.size()) > kMaxOrder) throw std::invalid_argument("partial derivative order above 3");

  std::lock_guard lock(cache_->mutex);
  auto& partials = cache_->partials;
  if (auto it = partials.find(key); it != partials.end()) return it->second;

  // Build from the cached lower-order partial so repeated requests share work.
  Expression e = expr_;
  std::array<int, kVarCount> built{};
  for (std::size_t i = 0; i < kVarCount; ++i) {
    for (int k = 0; k < key[i]; ++k) {
      ++built[i];
      if (auto it = partials.find(built); it != partials.end()) {
        e = it->second;
      } else {
        e = e.diff(static_cast<Var>(i));
        partials.emplace(built, e);
      }
    }
  }
  // std::map never relocates nodes, so the reference stays valid.
  return partials.emplace(key, e).first->second;
}

double fd_check(const ScalarField& field, Var v, const VarPoint& point, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd_check step must be positive");
  VarPoint plus = point;
  VarPoint minus = point;
  plus[static_cast<std::size_t>(v)] += h;
  minus[static_cast<std::size_t>(v)] -= h;
  return (field.eval(plus) - field.eval(minus)) / (2.0 * h);
}

}  // namespace geodrev
