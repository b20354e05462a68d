#include "geodrev/reversibility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "geodrev/frames.hpp"

namespace geodrev {

namespace {

struct SignedPair {
  PhiJet plus;   // φ and derivatives at s
  PhiJet minus;  // at -s
};

SignedPair jets(const PhiFunction& phi, double s) {
  if (!(std::abs(s) < phi.b0())) throw DomainError("|s| must stay below b0");
  return {phi.jet(s), phi.jet(-s)};
}

// Sum of the magnitudes of the terms of 𝓔; sets the scale of its zero test.
double calE_scale(const PhiFunction& phi, double s) {
  const auto [p, m] = jets(phi, s);
  return std::abs(s) * (std::abs(p.d1 * m.d2) + std::abs(m.d1 * p.d2)) + std::abs(m.f * p.d2) + std::abs(p.f * m.d2);
}

double m_scale(const NuJet& nu, const FormJet& b, const BetaOnIndicatrix& beta, double t) {
  const double c = std::cos(t);
  const double s = std::sin(t);
  return std::exp(-nu.nu) * (std::abs(b.b1_1 * c * c) + std::abs(s * c * (b.b1_2 + b.b2_1)) + std::abs(b.b2_2 * s * s)) +
         std::abs(beta.beta_t * (nu.n2 * c - nu.n1 * s)) + std::abs(beta.beta * (nu.n1 * c + nu.n2 * s));
}

double m_from_jets(const NuJet& nu, const FormJet& b, const BetaOnIndicatrix& beta, double t) {
  const double c = std::cos(t);
  const double s = std::sin(t);
  return std::exp(-nu.nu) * (b.b1_1 * c * c + s * c * (b.b1_2 + b.b2_1) + b.b2_2 * s * s) +
         beta.beta_t * (nu.n2 * c - nu.n1 * s) - beta.beta * (nu.n1 * c + nu.n2 * s);
}

ZeroTest make_test(std::string name, double max_abs, double scale, const Sampling& sampling) {
  ZeroTest z;
  z.name = std::move(name);
  z.max_abs = max_abs;
  z.threshold = sampling.threshold(scale);
  z.zero = max_abs <= z.threshold;
  return z;
}

}  // namespace

double calE(const PhiFunction& phi, double s) {
  const auto [p, m] = jets(phi, s);
  return s * (p.d1 * m.d2 + m.d1 * p.d2) + (m.f * p.d2 - p.f * m.d2);
}

double calF(const PhiFunction& phi, double s, double b) {
  if (!(b < phi.b0())) throw DomainError("b must stay below b0");
  const auto [p, m] = jets(phi, s);
  return (b * b - s * s) * (p.d1 * m.d2 + m.d1 * p.d2) + (m.f * p.d1 + p.f * m.d1);
}

double curl21(const LinearForm& form, Point2 x) {
  const FormJet b = form.jet(x);
  return b.b2_1 - b.b1_2;
}

double MCoefficients::harmonic(double t) const { return K1 + K2 * std::cos(2.0 * t) + K3 * std::sin(2.0 * t); }

MCoefficients m_coeffs(const LinearForm& form, const IsothermalMetric& metric, Point2 x) {
  const FormJet b = form.jet(x);
  const NuJet nu = metric.jet(x);
  return {0.5 * (b.b1_1 + b.b2_2), 0.5 * (b.b1_1 - b.b2_2) - (nu.n1 * b.b1 - nu.n2 * b.b2),
          0.5 * (b.b2_1 + b.b1_2) - (nu.n2 * b.b1 + nu.n1 * b.b2)};
}

double m_direct(const IsothermalMetric& metric, const LinearForm& form, Point2 x, double t) {
  return m_from_jets(metric.jet(x), form.jet(x), beta_on_indicatrix(metric, form, x, t), t);
}

double residual(const MetricBundle& bundle, Point2 x, double t) {
  const NuJet nu = bundle.metric().jet(x);
  const FormJet b = bundle.form().jet(x);
  const BetaOnIndicatrix beta = beta_on_indicatrix(bundle, x, t);
  const double m = m_from_jets(nu, b, beta, t);
  const double e = calE(bundle.phi(), beta.beta);
  const double f = calF(bundle.phi(), beta.beta, std::sqrt(beta.bsq));
  return beta.beta_t * e * m + f * std::exp(-nu.nu) * (b.b2_1 - b.b1_2);
}

std::array<double, 4> pde_residuals(const LinearForm& form, const IsothermalMetric& metric, Point2 x) {
  const FormJet b = form.jet(x);
  const NuJet nu = metric.jet(x);
  return {b.b2_1 - b.b1_2, b.b1_1 + b.b2_2, 0.5 * (b.b1_1 - b.b2_2) - (nu.n1 * b.b1 - nu.n2 * b.b2),
          0.5 * (b.b2_1 + b.b1_2) - (nu.n2 * b.b1 + nu.n1 * b.b2)};
}

double gauss_curvature(const IsothermalMetric& metric, Point2 x) {
  const NuJet nu = metric.jet(x);
  return -std::exp(-2.0 * nu.nu) * (nu.n11 + nu.n22);
}

double integrability_obstruction(const IsothermalMetric& metric, Point2 x) {
  const NuJet nu = metric.jet(x);
  return nu.n11 + nu.n22;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::ClassA: return "ClassA";
    case Verdict::ClassB: return "ClassB";
    case Verdict::AbsolutelyHomogeneous: return "AbsolutelyHomogeneous";
    case Verdict::TriviallyProjectivelyFlat: return "TriviallyProjectivelyFlat";
    case Verdict::Irreversible: return "Irreversible";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "?";
}

const ZeroTest& Classification::test(std::string_view name) const {
  for (const ZeroTest& z : evidence) {
    if (z.name == name) return z;
  }
  throw std::out_of_range("no zero test named " + std::string(name));
}

Verdict decide(bool even, bool calE_zero, bool class_a_shape, bool curl_zero, bool m_zero, bool b_const, bool nu_const,
               bool m2_zero, bool residual_zero) {
  if (even) return Verdict::AbsolutelyHomogeneous;
  if (calE_zero && class_a_shape && curl_zero) return Verdict::ClassA;
  if (m_zero && curl_zero && b_const && nu_const) return Verdict::ClassB;
  if (m2_zero) return Verdict::TriviallyProjectivelyFlat;
  if (!residual_zero) return Verdict::Irreversible;
  return Verdict::Undetermined;
}

Classification classify(const MetricBundle& bundle, Exec exec) {
  const Sampling& sm = bundle.sampling();
  const PhiFunction& phi = bundle.phi();
  const std::vector<double> s_grid = phi.s_grid(sm.n_s);
  const std::size_t nx = bundle.grid_size();
  const std::size_t nt = static_cast<std::size_t>(sm.n_t);

  Classification out;

  // φ-only tests over the open s-grid.
  const auto e_max = max_over<2>(
      s_grid.size(), [&](std::size_t i) { return std::array{std::abs(calE(phi, s_grid[i])), calE_scale(phi, s_grid[i])}; },
      exec);
  const auto even_max = max_over<2>(
      s_grid.size(),
      [&](std::size_t i) {
        const double a = phi.value(s_grid[i]);
        const double b = phi.value(-s_grid[i]);
        return std::array{std::abs(a - b), std::abs(a) + std::abs(b)};
      },
      exec);

  // Base-point tests: curl, variation of b1, b2 and ν.
  const auto curl_max = max_over<2>(
      nx,
      [&](std::size_t i) {
        const FormJet b = bundle.form().jet(bundle.grid_point(i));
        return std::array{std::abs(b.b2_1 - b.b1_2), std::abs(b.b2_1) + std::abs(b.b1_2)};
      },
      exec);
  auto values = [&](std::size_t i) {
    const Point2 x = bundle.grid_point(i);
    const VarPoint p{x.x1, x.x2, 0.0, 0.0};
    return std::array{bundle.form().b1().eval(p), bundle.form().b2().eval(p), bundle.metric().nu().eval(p)};
  };
  const auto hi = max_over<3>(nx, values, exec);
  const auto lo = max_over<3>(
      nx,
      [&](std::size_t i) {
        auto v = values(i);
        for (double& c : v) c = -c;
        return v;
      },
      exec);
  auto variation = [&](std::size_t k) { return hi[k].value + lo[k].value; };
  auto magnitude = [&](std::size_t k) { return std::max(std::abs(hi[k].value), std::abs(lo[k].value)); };

  // Fiber tests over base points x angles.
  const auto fiber = max_over<6>(
      nx * nt,
      [&](std::size_t i) {
        const Point2 x = bundle.grid_point(i / nt);
        const double t = bundle.grid_angle(i % nt);
        const NuJet nu = bundle.metric().jet(x);
        const FormJet b = bundle.form().jet(x);
        const BetaOnIndicatrix beta = beta_on_indicatrix(bundle, x, t);
        const double m = m_from_jets(nu, b, beta, t);
        const double e = calE(phi, beta.beta);
        const double f = calF(phi, beta.beta, std::sqrt(beta.bsq));
        const double w = std::exp(-nu.nu);
        const double curl = b.b2_1 - b.b1_2;
        const double res = beta.beta_t * e * m + f * w * curl;
        const double res_scale = std::abs(beta.beta_t) * calE_scale(phi, beta.beta) * m_scale(nu, b, beta, t) +
                                 std::abs(f) * w * (std::abs(b.b2_1) + std::abs(b.b1_2));
        const DirectionalDerivs d = directional_derivs(bundle, x, t, DerivMode::closed_form);
        return std::array{std::abs(m), m_scale(nu, b, beta, t), std::abs(res), res_scale, std::abs(d.p32 - d.p1),
                          std::abs(d.p32) + std::abs(d.p1)};
      },
      exec);

  out.evidence.push_back(make_test("E", e_max[0].value, e_max[1].value, sm));
  out.evidence.push_back(make_test("curl21", curl_max[0].value, curl_max[1].value, sm));
  out.evidence.push_back(make_test("M", fiber[0].value, fiber[1].value, sm));
  out.evidence.push_back(make_test("even", even_max[0].value, even_max[1].value, sm));
  out.evidence.push_back(make_test("b_const", std::max(variation(0), variation(1)), std::max(magnitude(0), magnitude(1)), sm));
  out.evidence.push_back(make_test("nu_const", variation(2), magnitude(2), sm));
  out.evidence.push_back(make_test("M2", fiber[4].value, fiber[5].value, sm));
  out.evidence.push_back(make_test("residual", fiber[2].value, fiber[3].value, sm));

  const EvenOddSplit split = even_odd_decompose(phi, sm.n_s, sm.eps_zero);
  out.class_a_shape = split.is_class_a_shape;
  out.k2 = split.k2;

  const bool even = out.test("even").zero;
  const bool e_zero = out.test("E").zero;
  const bool curl_zero = out.test("curl21").zero;
  if (e_zero != split.is_class_a_shape && !even) {
    out.note = "E-test and odd-part shape test disagree";
  }
  out.verdict = decide(even, e_zero, split.is_class_a_shape, curl_zero, out.test("M").zero, out.test("b_const").zero,
                       out.test("nu_const").zero, out.test("M2").zero, out.test("residual").zero);
  return out;
}

}  // namespace geodrev
