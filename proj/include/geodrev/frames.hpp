#pragma once

#include <array>
#include <stdexcept>

#include "geodrev/metric.hpp"
#include "geodrev/reversibility.hpp"

namespace geodrev {

using Row3 = std::array<double, 3>;

// Three 1-forms on the unit tangent bundle, each a row of coefficients in the
// coordinate basis (dx1, dx2, dt).
struct CoframeAtPoint {
  std::array<Row3, 3> rows{};
};

// α¹ = e^ν(-sin t dx1 + cos t dx2), α² = e^ν(cos t dx1 + sin t dx2),
// α³ = -ν₂ dx1 + ν₁ dx2 + dt.
CoframeAtPoint alpha_coframe(const IsothermalMetric& metric, Point2 x, double t);

// Vector fields e1, e2, e3 in coordinates (∂x1, ∂x2, ∂t) with αⁱ(e_j) = δⁱ_j.
std::array<Row3, 3> alpha_dual_frame(const IsothermalMetric& metric, Point2 x, double t);

enum class DerivMode { closed_form, frame_fd };

// Derivatives of a function on Σ₁ along the dual frame: p1 = e1(p), p31 = e1(e3(p)), ...
struct DirectionalDerivs {
  double p = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
  double p31 = 0.0;
  double p32 = 0.0;
  double p33 = 0.0;
  double p332 = 0.0;
  double p333 = 0.0;
};

// Derivatives of p(x, t) = φ(β(x, t)).
DirectionalDerivs directional_derivs(const MetricBundle& bundle, Point2 x, double t, DerivMode mode);
// Same for r(x, t) = p(x, t + π), the reverse metric on Σ₁.
DirectionalDerivs reverse_directional_derivs(const MetricBundle& bundle, Point2 x, double t, DerivMode mode);

class ConvexityError : public std::runtime_error {
 public:
  ConvexityError(Point2 x, double t, double value);
  Point2 x() const { return x_; }
  double t() const { return t_; }
  double value() const { return value_; }  // p + p33

 private:
  Point2 x_;
  double t_;
  double value_;
};

// ω-coframe of the Finsler structure; needs p + p33 > 0.
CoframeAtPoint omega_coframe(const MetricBundle& bundle, Point2 x, double t);

// (p32 - p1)(r + r33) - (r32 - r1)(p + p33).
double ecprinc_direct(const MetricBundle& bundle, Point2 x, double t);

struct FrameIntermediates {
  double T1 = 0.0;
  double T2 = 0.0;
  double T3 = 0.0;
  double T4 = 0.0;
  double G = 0.0;
  double H = 0.0;
  double nu_plus = 0.0;
  double nu_minus = 0.0;
  double coeff_plus = 0.0;   // T4 - β'ₜβ𝓔 - β'ₜ𝓕
  double coeff_minus = 0.0;  // T3 + 𝓕β
};

FrameIntermediates frame_intermediates(const MetricBundle& bundle, Point2 x, double t);

struct Crosscheck {
  double direct = 0.0;
  double closed_form = 0.0;
  double gap = 0.0;    // ||direct| - |closed_form|| / max(|direct|, |closed_form|, eps_zero)
  double ratio = 0.0;  // direct / closed_form, NaN when closed_form is 0
};

Crosscheck crosscheck(const MetricBundle& bundle, Point2 x, double t);

// Max-abs residuals of dα¹ = α²∧α³, dα² = α³∧α¹ and dα³ = k α¹∧α², with the
// exterior derivatives taken symbolically from the coordinate expressions.
std::array<double, 3> structure_residuals(const IsothermalMetric& metric, Point2 x, double t);

}  // namespace geodrev
