#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "geodrev/metric.hpp"

namespace geodrev {

// 𝓔(s) = s(φ'(s)φ''(-s) + φ'(-s)φ''(s)) + (φ(-s)φ''(s) - φ(s)φ''(-s)).
double calE(const PhiFunction& phi, double s);
// 𝓕(s, b) = (b² - s²)(φ'(s)φ''(-s) + φ'(-s)φ''(s)) + (φ(-s)φ'(s) + φ(s)φ'(-s)).
double calF(const PhiFunction& phi, double s, double b);

// ∂b2/∂x1 - ∂b1/∂x2.
double curl21(const LinearForm& form, Point2 x);

// 𝓜 = e^{-ν}(K1 + K2 cos 2t + K3 sin 2t).
struct MCoefficients {
  double K1 = 0.0;
  double K2 = 0.0;
  double K3 = 0.0;

  double harmonic(double t) const;  // K1 + K2 cos 2t + K3 sin 2t
};

MCoefficients m_coeffs(const LinearForm& form, const IsothermalMetric& metric, Point2 x);

// 𝓜 evaluated term by term from b-partials, β, β'_t and ∇ν.
double m_direct(const IsothermalMetric& metric, const LinearForm& form, Point2 x, double t);

// β'_t 𝓔(β) 𝓜 + 𝓕(β, b) e^{-ν} curl21; vanishes on every (x, t) exactly when
// F and its reverse share unparametrized geodesics.
double residual(const MetricBundle& bundle, Point2 x, double t);

// Left-hand sides of the first-order system that 𝓜 ≡ 0 together with a closed
// β imposes: curl, divergence and the two ν-coupled equations.
std::array<double, 4> pde_residuals(const LinearForm& form, const IsothermalMetric& metric, Point2 x);

// k = -e^{-2ν} Δν.
double gauss_curvature(const IsothermalMetric& metric, Point2 x);
// Δν; nontrivial solutions of the system need it to vanish identically.
double integrability_obstruction(const IsothermalMetric& metric, Point2 x);

enum class Verdict {
  ClassA,
  ClassB,
  AbsolutelyHomogeneous,
  TriviallyProjectivelyFlat,
  Irreversible,
  Undetermined,
};

std::string_view verdict_name(Verdict v);

struct ZeroTest {
  std::string name;
  double max_abs = 0.0;
  double threshold = 0.0;
  bool zero = false;  // max_abs <= threshold
};

struct Classification {
  Verdict verdict = Verdict::Undetermined;
  std::vector<ZeroTest> evidence;
  bool class_a_shape = false;
  std::optional<double> k2;
  std::string note;

  const ZeroTest& test(std::string_view name) const;
};

Classification classify(const MetricBundle& bundle, Exec exec = Exec::parallel);

// Verdict from the zero-test booleans alone.
Verdict decide(bool even, bool calE_zero, bool class_a_shape, bool curl_zero, bool m_zero, bool b_const,
               bool nu_const, bool m2_zero, bool residual_zero);

}  // namespace geodrev
