#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geodrev/parallel.hpp"
#include "geodrev/scalar_field.hpp"

namespace geodrev {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

struct Rect {
  double x1_min = -1.0;
  double x1_max = 1.0;
  double x2_min = -1.0;
  double x2_max = 1.0;

  bool contains(Point2 p) const { return p.x1 >= x1_min && p.x1 <= x1_max && p.x2 >= x2_min && p.x2 <= x2_max; }
  // Largest side, never below 1; used to scale finite-difference steps.
  double extent() const;
  Point2 lerp(double u1, double u2) const {
    return {x1_min + u1 * (x1_max - x1_min), x2_min + u2 * (x2_max - x2_min)};
  }
};

// φ and its first three derivatives at one argument.
struct PhiJet {
  double f = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

// Profile φ(s) of an (α,β)-metric, defined on (-b0, b0).
class PhiFunction {
 public:
  PhiFunction(Expression phi, double b0);

  static PhiFunction randers(double b0 = 0.9);     // 1 + s
  static PhiFunction matsumoto(double b0 = 0.45);  // 1 / (1 - s)
  // a0 + a1 s^2 + a2 s^4 + ...
  static PhiFunction even_polynomial(const std::vector<double>& coeffs, double b0);
  // even(s) + eps * s, with `even` checked to be even on a sample grid.
  static PhiFunction even_plus_linear(const Expression& even, double eps, double b0);
  static PhiFunction parse(std::string_view text, double b0);

  const ScalarField& field() const { return phi_; }
  const Expression& d1() const { return d1_; }
  const Expression& d2() const { return d2_; }
  const Expression& d3() const { return d3_; }
  double b0() const { return b0_; }

  double value(double s) const { return phi_.expr().eval(at(s)); }
  PhiJet jet(double s) const;

  // Open grid of n points strictly inside (-b0, b0), symmetric about 0:
  // s_k = -b0 + (k + 1) * 2 b0 / (n + 1).
  std::vector<double> s_grid(int n) const;

 private:
  static VarPoint at(double s) { return VarPoint{0.0, 0.0, s, 0.0}; }

  ScalarField phi_;
  Expression d1_;
  Expression d2_;
  Expression d3_;
  double b0_;
};

// Conformal factor of the isothermal Riemannian metric a_ij = e^{2ν} δ_ij.
struct NuJet {
  double nu = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;
  double n11 = 0.0;
  double n12 = 0.0;
  double n22 = 0.0;
};

class IsothermalMetric {
 public:
  IsothermalMetric(ScalarField nu, Rect domain);

  const ScalarField& nu() const { return nu_; }
  const Rect& domain() const { return domain_; }
  double value(Point2 x) const { return nu_.eval(VarPoint{x.x1, x.x2, 0.0, 0.0}); }
  NuJet jet(Point2 x) const;

 private:
  ScalarField nu_;
  Rect domain_;
  Expression n1_, n2_, n11_, n12_, n22_;
};

// Components (b1, b2) of β = b_i y^i and their first partials.
struct FormJet {
  double b1 = 0.0;
  double b2 = 0.0;
  double b1_1 = 0.0;  // ∂b1/∂x1
  double b1_2 = 0.0;  // ∂b1/∂x2
  double b2_1 = 0.0;
  double b2_2 = 0.0;
};

class LinearForm {
 public:
  LinearForm(ScalarField b1, ScalarField b2);

  const ScalarField& b1() const { return b1_; }
  const ScalarField& b2() const { return b2_; }
  FormJet jet(Point2 x) const;

 private:
  ScalarField b1_;
  ScalarField b2_;
  Expression b1_1_, b1_2_, b2_1_, b2_2_;
};

struct Sampling {
  int n_x1 = 21;
  int n_x2 = 21;
  int n_t = 64;
  int n_s = 201;
  double eps_zero = 1e-9;

  Sampling doubled() const { return {2 * n_x1, 2 * n_x2, 2 * n_t, 2 * n_s, eps_zero}; }
  // Scale-aware zero threshold eps_zero * (1 + scale).
  double threshold(double scale) const { return eps_zero * (1.0 + scale); }
};

struct ValidationReport {
  double min_margin_ec1 = 0.0;  // φ - sφ' + (b² - s²)φ'' over |s| <= b < b0
  double min_margin_ec2 = 0.0;  // φ - sφ' over (-b0, b0)
  double min_phi = 0.0;
  bool pass = false;
  // Worst grid point: the condition it violates (or is closest to violating).
  std::string witness_condition;
  double witness_s = 0.0;
  double witness_b = 0.0;
  std::string error;  // evaluation failure, e.g. a pole inside (-b0, b0)
};

ValidationReport validate_finsler(const PhiFunction& phi, int grid_n, Exec exec = Exec::parallel);

// sup of b(x) = e^{-ν}|(b1, b2)| over a 3x oversampled domain grid.
struct FormBound {
  double sup_b = 0.0;
  Point2 argmax;
  double margin = 0.0;  // b0 - sup_b
  bool pass = false;
};

class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, ValidationReport report, FormBound bound)
      : std::runtime_error(what), report_(std::move(report)), bound_(bound) {}
  const ValidationReport& report() const { return report_; }
  const FormBound& bound() const { return bound_; }

 private:
  ValidationReport report_;
  FormBound bound_;
};

// F = α φ(β/α) with α = e^ν|y| and β = b1 y1 + b2 y2. Construction runs the
// Finsler validation and the sup-b check and throws ValidationError on failure.
class MetricBundle {
 public:
  MetricBundle(IsothermalMetric metric, LinearForm form, PhiFunction phi, Sampling sampling = {});

  const IsothermalMetric& metric() const { return metric_; }
  const LinearForm& form() const { return form_; }
  const PhiFunction& phi() const { return phi_; }
  const Sampling& sampling() const { return sampling_; }
  const Rect& domain() const { return metric_.domain(); }
  const ValidationReport& validation() const { return report_; }
  const FormBound& form_bound() const { return bound_; }

  double norm(Point2 x, double y1, double y2) const;
  double reverse_norm(Point2 x, double y1, double y2) const { return norm(x, -y1, -y2); }

  // Base-point grid of n_x1 x n_x2 points including the corners, row-major in x1.
  Point2 grid_point(std::size_t i) const;
  std::size_t grid_size() const { return static_cast<std::size_t>(sampling_.n_x1) * sampling_.n_x2; }
  double grid_angle(std::size_t k) const;

 private:
  IsothermalMetric metric_;
  LinearForm form_;
  PhiFunction phi_;
  Sampling sampling_;
  ValidationReport report_;
  FormBound bound_;
};

FormBound check_form_bound(const IsothermalMetric& metric, const LinearForm& form, double b0, const Sampling& sampling,
                           Exec exec = Exec::parallel);

// φ̄(s) = φ(-s); the result is re-validated and ValidationError is thrown if
// it does not pass.
PhiFunction reverse_phi(const PhiFunction& phi);

struct EvenOddSplit {
  ScalarField even;  // (φ(s) + φ(-s)) / 2
  ScalarField odd;   // (φ(s) - φ(-s)) / 2
  bool is_class_a_shape = false;  // odd(s)/s constant on the grid
  std::optional<double> k2;       // 2 odd(s)/s when the shape holds
  double ratio_spread = 0.0;      // max - min of odd(s)/s on the grid
};

EvenOddSplit even_odd_decompose(const PhiFunction& phi, int n_s, double eps_zero);

struct BetaOnIndicatrix {
  double beta = 0.0;
  double beta_t = 0.0;
  double bsq = 0.0;
};

BetaOnIndicatrix beta_on_indicatrix(const IsothermalMetric& metric, const LinearForm& form, Point2 x, double t);
BetaOnIndicatrix beta_on_indicatrix(const MetricBundle& bundle, Point2 x, double t);

struct IndicatrixValue {
  double p = 0.0;  // F on the Riemannian unit circle at angle t
  double r = 0.0;  // the reverse metric at the same point
};

IndicatrixValue indicatrix_p(const MetricBundle& bundle, Point2 x, double t);

}  // namespace geodrev
