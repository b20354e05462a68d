#include "geodrev/frames.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

namespace geodrev {

namespace {

// β on Σ₁ and its coordinate partials; A..D are the e^{-ν}-weighted b-partials
// and a..d the full x-partials of β and β'ₜ.
struct BetaPartials {
  NuJet nu;
  double w = 1.0;  // e^{-ν}
  double beta = 0.0;
  double bt = 0.0;
  double bsq = 0.0;
  double A = 0.0, B = 0.0, C = 0.0, D = 0.0;
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
};

BetaPartials beta_partials(const MetricBundle& bundle, Point2 x, double t) {
  BetaPartials out;
  out.nu = bundle.metric().jet(x);
  const FormJet f = bundle.form().jet(x);
  const double w = std::exp(-out.nu.nu);
  const double c = std::cos(t);
  const double s = std::sin(t);
  out.w = w;
  out.beta = w * (f.b1 * c + f.b2 * s);
  out.bt = w * (-f.b1 * s + f.b2 * c);
  out.bsq = w * w * (f.b1 * f.b1 + f.b2 * f.b2);
  out.A = w * (f.b1_1 * c + f.b2_1 * s);
  out.B = w * (f.b1_2 * c + f.b2_2 * s);
  out.C = w * (-f.b1_1 * s + f.b2_1 * c);
  out.D = w * (-f.b1_2 * s + f.b2_2 * c);
  out.a = out.A - out.nu.n1 * out.beta;
  out.b = out.B - out.nu.n2 * out.beta;
  out.c = out.C - out.nu.n1 * out.bt;
  out.d = out.D - out.nu.n2 * out.bt;
  return out;
}

// Coordinate partials of p(x, t) = φ(β(x, t)).
struct CoordPartials {
  double f = 0.0;
  double x1 = 0.0, x2 = 0.0, t = 0.0;
  double x1t = 0.0, x2t = 0.0, tt = 0.0;
  double x1tt = 0.0, x2tt = 0.0, ttt = 0.0;
};

CoordPartials coord_partials(const MetricBundle& bundle, Point2 x, double t) {
  const BetaPartials bp = beta_partials(bundle, x, t);
  if (!(std::abs(bp.beta) < bundle.phi().b0())) throw DomainError("|beta| reaches b0");
  const PhiJet j = bundle.phi().jet(bp.beta);
  const double bt = bp.bt;
  const double beta = bp.beta;
  CoordPartials p;
  p.f = j.f;
  p.t = j.d1 * bt;
  p.tt = j.d2 * bt * bt - j.d1 * beta;
  p.ttt = j.d3 * bt * bt * bt - 3.0 * j.d2 * bt * beta - j.d1 * bt;
  p.x1 = j.d1 * bp.a;
  p.x2 = j.d1 * bp.b;
  p.x1t = j.d2 * bt * bp.a + j.d1 * bp.c;
  p.x2t = j.d2 * bt * bp.b + j.d1 * bp.d;
  p.x1tt = j.d3 * bp.a * bt * bt + 2.0 * j.d2 * bt * bp.c - j.d2 * bp.a * beta - j.d1 * bp.a;
  p.x2tt = j.d3 * bp.b * bt * bt + 2.0 * j.d2 * bt * bp.d - j.d2 * bp.b * beta - j.d1 * bp.b;
  return p;
}

// Dual frame at angle t applied to coordinate partials.
DirectionalDerivs along_frame(const NuJet& nu, double t, const CoordPartials& q) {
  const double w = std::exp(-nu.nu);
  const double c = std::cos(t);
  const double s = std::sin(t);
  const double nplus = nu.n1 * c + nu.n2 * s;
  const double nminus = nu.n2 * c - nu.n1 * s;
  DirectionalDerivs d;
  d.p = q.f;
  d.p1 = w * (-s * q.x1 + c * q.x2 - nplus * q.t);
  d.p2 = w * (c * q.x1 + s * q.x2 + nminus * q.t);
  d.p3 = q.t;
  d.p31 = w * (-s * q.x1t + c * q.x2t - nplus * q.tt);
  d.p32 = w * (c * q.x1t + s * q.x2t + nminus * q.tt);
  d.p33 = q.tt;
  d.p332 = w * (c * q.x1tt + s * q.x2tt + nminus * q.ttt);
  d.p333 = q.ttt;
  return d;
}

using Point3 = std::array<double, 3>;
using Fn3 = std::function<double(const Point3&)>;

Point3 shift(const Point3& q, const Row3& v, double h) { return {q[0] + h * v[0], q[1] + h * v[1], q[2] + h * v[2]}; }

double central(const Fn3& f, const Point3& q, const Row3& v, double h) {
  return (f(shift(q, v, h)) - f(shift(q, v, -h))) / (2.0 * h);
}

double second(const Fn3& f, const Point3& q, const Row3& v, double h) {
  return (f(shift(q, v, h)) - 2.0 * f(q) + f(shift(q, v, -h))) / (h * h);
}

// Fourth-order stencils for the third-order derivatives, where the plain
// central formulas lose too many digits.
double central4(const Fn3& f, const Point3& q, const Row3& v, double h) {
  return (-f(shift(q, v, 2.0 * h)) + 8.0 * f(shift(q, v, h)) - 8.0 * f(shift(q, v, -h)) + f(shift(q, v, -2.0 * h))) /
         (12.0 * h);
}

double second4(const Fn3& f, const Point3& q, const Row3& v, double h) {
  return (-f(shift(q, v, 2.0 * h)) + 16.0 * f(shift(q, v, h)) - 30.0 * f(q) + 16.0 * f(shift(q, v, -h)) -
          f(shift(q, v, -2.0 * h))) /
         (12.0 * h * h);
}

double third4(const Fn3& f, const Point3& q, const Row3& v, double h) {
  return (-f(shift(q, v, 3.0 * h)) + 8.0 * f(shift(q, v, 2.0 * h)) - 13.0 * f(shift(q, v, h)) +
          13.0 * f(shift(q, v, -h)) - 8.0 * f(shift(q, v, -2.0 * h)) + f(shift(q, v, -3.0 * h))) /
         (8.0 * h * h * h);
}

DirectionalDerivs frame_fd(const MetricBundle& bundle, Point2 x, double t, double t_shift) {
  const Fn3 f = [&](const Point3& q) {
    const double beta = beta_on_indicatrix(bundle, {q[0], q[1]}, q[2] + t_shift).beta;
    if (!(std::abs(beta) < bundle.phi().b0())) throw DomainError("|beta| reaches b0");
    return bundle.phi().value(beta);
  };
  const auto e = alpha_dual_frame(bundle.metric(), x, t);
  const double ext = bundle.domain().extent();
  const double h1 = 1e-5 * ext;
  const double h2 = 1e-4 * ext;
  const double h3 = 5e-3 * ext;
  const Point3 q{x.x1, x.x2, t};

  const Fn3 ft = [&](const Point3& r) { return central(f, r, e[2], h2); };
  const Fn3 ftt = [&](const Point3& r) { return second4(f, r, e[2], h3); };

  DirectionalDerivs d;
  d.p = f(q);
  d.p1 = central(f, q, e[0], h1);
  d.p2 = central(f, q, e[1], h1);
  d.p3 = central(f, q, e[2], h1);
  d.p31 = central(ft, q, e[0], h2);
  d.p32 = central(ft, q, e[1], h2);
  d.p33 = second(f, q, e[2], h2);
  d.p332 = central4(ftt, q, e[1], h3);
  d.p333 = third4(f, q, e[2], h3);
  return d;
}

Row3 scaled(const Row3& r, double k) { return {k * r[0], k * r[1], k * r[2]}; }
Row3 plus(const Row3& a, const Row3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

// Coefficients on (dx1∧dx2, dx1∧dt, dx2∧dt).
Row3 wedge(const Row3& a, const Row3& b) {
  return {a[0] * b[1] - a[1] * b[0], a[0] * b[2] - a[2] * b[0], a[1] * b[2] - a[2] * b[1]};
}

}  // namespace

CoframeAtPoint alpha_coframe(const IsothermalMetric& metric, Point2 x, double t) {
  const NuJet nu = metric.jet(x);
  const double e = std::exp(nu.nu);
  const double c = std::cos(t);
  const double s = std::sin(t);
  return {{Row3{-e * s, e * c, 0.0}, Row3{e * c, e * s, 0.0}, Row3{-nu.n2, nu.n1, 1.0}}};
}

std::array<Row3, 3> alpha_dual_frame(const IsothermalMetric& metric, Point2 x, double t) {
  const NuJet nu = metric.jet(x);
  const double w = std::exp(-nu.nu);
  const double c = std::cos(t);
  const double s = std::sin(t);
  return {Row3{-w * s, w * c, -w * (nu.n1 * c + nu.n2 * s)}, Row3{w * c, w * s, w * (nu.n2 * c - nu.n1 * s)},
          Row3{0.0, 0.0, 1.0}};
}

DirectionalDerivs directional_derivs(const MetricBundle& bundle, Point2 x, double t, DerivMode mode) {
  if (mode == DerivMode::frame_fd) return frame_fd(bundle, x, t, 0.0);
  return along_frame(bundle.metric().jet(x), t, coord_partials(bundle, x, t));
}

DirectionalDerivs reverse_directional_derivs(const MetricBundle& bundle, Point2 x, double t, DerivMode mode) {
  if (mode == DerivMode::frame_fd) return frame_fd(bundle, x, t, std::numbers::pi);
  return along_frame(bundle.metric().jet(x), t, coord_partials(bundle, x, t + std::numbers::pi));
}

namespace {

std::string convexity_message(Point2 x, double t, double value) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "convexity fails: p + p33 = %.6g at x = (%.6g, %.6g), t = %.6g", value, x.x1, x.x2, t);
  return buf;
}

}  // namespace

ConvexityError::ConvexityError(Point2 x, double t, double value)
    : std::runtime_error(convexity_message(x, t, value)), x_(x), t_(t), value_(value) {}

CoframeAtPoint omega_coframe(const MetricBundle& bundle, Point2 x, double t) {
  const DirectionalDerivs d = directional_derivs(bundle, x, t, DerivMode::closed_form);
  const double p = d.p;
  const double conv = p + d.p33;
  if (!(conv > 0.0) || !(p > 0.0)) throw ConvexityError(x, t, conv);

  const double pp = 0.5 * (d.p3 * d.p32 * d.p33 - d.p3 * d.p33 * d.p1 + p * d.p333 * d.p32 - p * d.p1 * d.p333 +
                           2.0 * p * d.p32 * d.p3 - 2.0 * p * d.p1 * d.p3 - 3.0 * p * d.p2 * d.p33 - p * p * d.p332 -
                           2.0 * p * p * d.p2 - d.p2 * d.p33 * d.p33 - p * d.p332 * d.p33);

  const CoframeAtPoint a = alpha_coframe(bundle.metric(), x, t);
  const double root = std::sqrt(p * conv);
  CoframeAtPoint w;
  w.rows[0] = scaled(a.rows[0], root);
  w.rows[1] = plus(scaled(a.rows[1], p), scaled(a.rows[0], d.p3));
  w.rows[2] = plus(plus(scaled(a.rows[2], conv / root), scaled(a.rows[1], (d.p32 - d.p1) / root)),
                   scaled(a.rows[0], pp / (root * root * root)));
  return w;
}

double ecprinc_direct(const MetricBundle& bundle, Point2 x, double t) {
  const DirectionalDerivs p = directional_derivs(bundle, x, t, DerivMode::closed_form);
  const DirectionalDerivs r = reverse_directional_derivs(bundle, x, t, DerivMode::closed_form);
  return (p.p32 - p.p1) * (r.p + r.p33) - (r.p32 - r.p1) * (p.p + p.p33);
}

FrameIntermediates frame_intermediates(const MetricBundle& bundle, Point2 x, double t) {
  const BetaPartials bp = beta_partials(bundle, x, t);
  const CoordPartials p = coord_partials(bundle, x, t);
  const CoordPartials r = coord_partials(bundle, x, t + std::numbers::pi);
  const double c = std::cos(t);
  const double s = std::sin(t);

  FrameIntermediates out;
  out.T1 = c * (p.x1t - p.x2) + s * (p.x2t + p.x1);
  out.T2 = c * (r.x1t - r.x2) + s * (r.x2t + r.x1);
  out.T3 = p.tt * r.f - r.tt * p.f;
  out.T4 = p.t * (r.tt + r.f) - r.t * (p.tt + p.f);
  out.G = bp.a * c + bp.b * s;
  out.H = (bp.c - bp.b) * c + (bp.a + bp.d) * s;
  out.nu_plus = bp.nu.n1 * c + bp.nu.n2 * s;
  out.nu_minus = bp.nu.n2 * c - bp.nu.n1 * s;

  const double e = calE(bundle.phi(), bp.beta);
  const double f = calF(bundle.phi(), bp.beta, std::sqrt(bp.bsq));
  out.coeff_plus = out.T4 - bp.bt * bp.beta * e - bp.bt * f;
  out.coeff_minus = out.T3 + f * bp.beta;
  return out;
}

Crosscheck crosscheck(const MetricBundle& bundle, Point2 x, double t) {
  Crosscheck out;
  out.direct = ecprinc_direct(bundle, x, t);
  out.closed_form = residual(bundle, x, t);
  const double ad = std::abs(out.direct);
  const double ac = std::abs(out.closed_form);
  out.gap = std::abs(ad - ac) / std::max({ad, ac, bundle.sampling().eps_zero});
  out.ratio = out.closed_form != 0.0 ? out.direct / out.closed_form : std::numeric_limits<double>::quiet_NaN();
  return out;
}

std::array<double, 3> structure_residuals(const IsothermalMetric& metric, Point2 x, double t) {
  const Expression nu = metric.nu().expr();
  const Expression tv = Expression::variable(Var::t);
  const Expression en = exp(nu);
  const Expression zero = Expression::constant(0.0);
  using Form = std::array<Expression, 3>;
  const std::array<Form, 3> alpha{
      Form{-(en * sin(tv)), en * cos(tv), zero},
      Form{en * cos(tv), en * sin(tv), zero},
      Form{-nu.diff(Var::x2), nu.diff(Var::x1), Expression::constant(1.0)},
  };

  const VarPoint at{x.x1, x.x2, 0.0, t};
  auto eval = [&](const Form& f) { return Row3{f[0].eval(at), f[1].eval(at), f[2].eval(at)}; };
  auto d = [&](const Form& f) {
    return Row3{f[1].diff(Var::x1).eval(at) - f[0].diff(Var::x2).eval(at),
                f[2].diff(Var::x1).eval(at) - f[0].diff(Var::t).eval(at),
                f[2].diff(Var::x2).eval(at) - f[1].diff(Var::t).eval(at)};
  };

  const Row3 a1 = eval(alpha[0]);
  const Row3 a2 = eval(alpha[1]);
  const Row3 a3 = eval(alpha[2]);
  const double k = gauss_curvature(metric, x);
  const std::array<Row3, 3> lhs{d(alpha[0]), d(alpha[1]), d(alpha[2])};
  const std::array<Row3, 3> rhs{wedge(a2, a3), wedge(a3, a1), scaled(wedge(a1, a2), k)};

  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) out[i] = std::max(out[i], std::abs(lhs[i][j] - rhs[i][j]));
  }
  return out;
}

}  // namespace geodrev
