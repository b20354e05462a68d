#include "geodrev/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace geodrev {

double Rect::extent() const { return std::max({1.0, x1_max - x1_min, x2_max - x2_min}); }

// ---------------------------------------------------------------------------
// PhiFunction

PhiFunction::PhiFunction(Expression phi, double b0) : phi_(std::move(phi), {Var::s}), b0_(b0) {
  if (!(b0 > 0.0)) throw std::invalid_argument("b0 must be positive");
  d1_ = phi_.partial({Var::s});
  d2_ = phi_.partial({Var::s, Var::s});
  d3_ = phi_.partial({Var::s, Var::s, Var::s});
}

PhiFunction PhiFunction::randers(double b0) {
  const Expression s = Expression::variable(Var::s);
  return PhiFunction(1.0 + s, b0);
}

PhiFunction PhiFunction::matsumoto(double b0) {
  const Expression s = Expression::variable(Var::s);
  return PhiFunction(Expression::constant(1.0) / (1.0 - s), b0);
}

PhiFunction PhiFunction::even_polynomial(const std::vector<double>& coeffs, double b0) {
  const Expression s = Expression::variable(Var::s);
  Expression phi = Expression::constant(0.0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    phi = phi + coeffs[k] * pow(s, static_cast<int>(2 * k));
  }
  return PhiFunction(phi, b0);
}

PhiFunction PhiFunction::even_plus_linear(const Expression& even, double eps, double b0) {
  const Expression s = Expression::variable(Var::s);
  const Expression mirrored = even.substitute(Var::s, -s);
  for (int k = 0; k <= 32; ++k) {
    const double sk = b0 * k / 33.0;
    const VarPoint plus{0, 0, sk, 0};
    const VarPoint minus{0, 0, -sk, 0};
    const double a = even.eval(plus);
    const double b = mirrored.eval(plus);
    if (std::abs(a - b) > 1e-12 * (1.0 + std::abs(a)) || std::abs(a - even.eval(minus)) > 1e-12 * (1.0 + std::abs(a))) {
      throw std::invalid_argument("even part is not an even function of s");
    }
  }
  return PhiFunction(even + eps * s, b0);
}

PhiFunction PhiFunction::parse(std::string_view text, double b0) { return PhiFunction(parse_expr(text, {Var::s}), b0); }

PhiJet PhiFunction::jet(double s) const {
  const VarPoint p = at(s);
  return {phi_.expr().eval(p), d1_.eval(p), d2_.eval(p), d3_.eval(p)};
}

std::vector<double> PhiFunction::s_grid(int n) const {
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    grid[static_cast<std::size_t>(k)] = -b0_ + (k + 1) * (2.0 * b0_) / (n + 1);
  }
  // Exact symmetry: s_{n-1-k} = -s_k.
  for (int k = 0; k < n / 2; ++k) grid[static_cast<std::size_t>(n - 1 - k)] = -grid[static_cast<std::size_t>(k)];
  if (n % 2 == 1) grid[static_cast<std::size_t>(n / 2)] = 0.0;
  return grid;
}

// ---------------------------------------------------------------------------
// IsothermalMetric / LinearForm

IsothermalMetric::IsothermalMetric(ScalarField nu, Rect domain) : nu_(std::move(nu)), domain_(domain) {
  if (!(domain.x1_max > domain.x1_min && domain.x2_max > domain.x2_min)) {
    throw std::invalid_argument("domain rectangle is empty");
  }
  if (nu_.expr().depends_on(Var::s) || nu_.expr().depends_on(Var::t)) {
    throw std::invalid_argument("nu may depend on x1 and x2 only");
  }
  nu_ = ScalarField(nu_.expr(), {Var::x1, Var::x2});
  n1_ = nu_.partial({Var::x1});
  n2_ = nu_.partial({Var::x2});
  n11_ = nu_.partial({Var::x1, Var::x1});
  n12_ = nu_.partial({Var::x1, Var::x2});
  n22_ = nu_.partial({Var::x2, Var::x2});
}

NuJet IsothermalMetric::jet(Point2 x) const {
  const VarPoint p{x.x1, x.x2, 0.0, 0.0};
  return {nu_.eval(p), n1_.eval(p), n2_.eval(p), n11_.eval(p), n12_.eval(p), n22_.eval(p)};
}

LinearForm::LinearForm(ScalarField b1, ScalarField b2) {
  for (const ScalarField* f : {&b1, &b2}) {
    if (f->expr().depends_on(Var::s) || f->expr().depends_on(Var::t)) {
      throw std::invalid_argument("b1 and b2 may depend on x1 and x2 only");
    }
  }
  b1_ = ScalarField(b1.expr(), {Var::x1, Var::x2});
  b2_ = ScalarField(b2.expr(), {Var::x1, Var::x2});
  b1_1_ = b1_.partial({Var::x1});
  b1_2_ = b1_.partial({Var::x2});
  b2_1_ = b2_.partial({Var::x1});
  b2_2_ = b2_.partial({Var::x2});
}

FormJet LinearForm::jet(Point2 x) const {
  const VarPoint p{x.x1, x.x2, 0.0, 0.0};
  return {b1_.eval(p), b2_.eval(p), b1_1_.eval(p), b1_2_.eval(p), b2_1_.eval(p), b2_2_.eval(p)};
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate_finsler(const PhiFunction& phi, int grid_n, Exec exec) {
  if (grid_n < 64) throw std::invalid_argument("validate_finsler needs grid_n >= 64");
  const double b0 = phi.b0();
  const std::size_t n = static_cast<std::size_t>(grid_n);
  const std::vector<double> open_grid = phi.s_grid(grid_n);

  ValidationReport report;
  const double minus_inf = -std::numeric_limits<double>::infinity();

  // Triangular grid |s| <= b < b0: b_j = b0 j / n, s_k = -b_j + 2 b_j k / (n - 1).
  auto tri_point = [&](std::size_t i) {
    const double b = b0 * static_cast<double>(i / n) / static_cast<double>(n);
    const double s = -b + 2.0 * b * static_cast<double>(i % n) / static_cast<double>(n - 1);
    return std::pair{s, b};
  };
  std::string first_error;
  auto guarded = [&](auto&& fn) {
    return [&, fn](std::size_t i) -> double {
      try {
        return fn(i);
      } catch (const DomainError& e) {
#pragma omp critical(geodrev_validate_error)
        if (first_error.empty()) first_error = e.what();
        return minus_inf;
      }
    };
  };

  const Extremum ec1 = min_over(
      n * n, guarded([&](std::size_t i) {
        const auto [s, b] = tri_point(i);
        const PhiJet j = phi.jet(s);
        return j.f - s * j.d1 + (b * b - s * s) * j.d2;
      }),
      exec);
  const Extremum ec2 = min_over(
      n, guarded([&](std::size_t i) {
        const double s = open_grid[i];
        const PhiJet j = phi.jet(s);
        return j.f - s * j.d1;
      }),
      exec);
  const Extremum pos = min_over(n, guarded([&](std::size_t i) { return phi.value(open_grid[i]); }), exec);

  report.min_margin_ec1 = ec1.value;
  report.min_margin_ec2 = ec2.value;
  report.min_phi = pos.value;
  report.error = first_error;
  report.pass = ec1.value > 0.0 && ec2.value > 0.0 && pos.value > 0.0;

  // Witness: the condition with the smallest margin (the violated one on failure).
  const auto [s1, b1] = tri_point(ec1.index);
  report.witness_condition = "ec1";
  report.witness_s = s1;
  report.witness_b = b1;
  double worst = ec1.value;
  if (!(ec2.value >= worst)) {
    worst = ec2.value;
    report.witness_condition = "ec2";
    report.witness_s = open_grid[ec2.index];
    report.witness_b = std::abs(open_grid[ec2.index]);
  }
  if (!(pos.value >= worst)) {
    report.witness_condition = "phi_positive";
    report.witness_s = open_grid[pos.index];
    report.witness_b = std::abs(open_grid[pos.index]);
  }
  return report;
}

FormBound check_form_bound(const IsothermalMetric& metric, const LinearForm& form, double b0, const Sampling& sampling,
                           Exec exec) {
  const std::size_t n1 = static_cast<std::size_t>(3 * sampling.n_x1);
  const std::size_t n2 = static_cast<std::size_t>(3 * sampling.n_x2);
  const Rect& d = metric.domain();
  auto point = [&](std::size_t i) {
    return d.lerp(static_cast<double>(i % n1) / static_cast<double>(n1 - 1),
                  static_cast<double>(i / n1) / static_cast<double>(n2 - 1));
  };
  const Extremum sup = max_over(
      n1 * n2,
      [&](std::size_t i) {
        const Point2 x = point(i);
        const VarPoint p{x.x1, x.x2, 0.0, 0.0};
        const double b1 = form.b1().eval(p);
        const double b2 = form.b2().eval(p);
        return std::exp(-metric.nu().eval(p)) * std::hypot(b1, b2);
      },
      exec);
  FormBound bound;
  bound.sup_b = sup.value;
  bound.argmax = point(sup.index);
  bound.margin = b0 - sup.value;
  bound.pass = bound.margin > 0.0;
  return bound;
}

// ---------------------------------------------------------------------------
// MetricBundle

MetricBundle::MetricBundle(IsothermalMetric metric, LinearForm form, PhiFunction phi, Sampling sampling)
    : metric_(std::move(metric)), form_(std::move(form)), phi_(std::move(phi)), sampling_(sampling) {
  if (sampling_.n_x1 < 2 || sampling_.n_x2 < 2 || sampling_.n_t < 1 || sampling_.n_s < 1) {
    throw std::invalid_argument("sampling counts too small");
  }
  report_ = validate_finsler(phi_, std::max(64, sampling_.n_s));
  bound_ = check_form_bound(metric_, form_, phi_.b0(), sampling_);
  if (!report_.pass) throw ValidationError("phi violates the Finsler conditions", report_, bound_);
  if (!bound_.pass) throw ValidationError("sup of b(x) reaches b0", report_, bound_);
}

double MetricBundle::norm(Point2 x, double y1, double y2) const {
  const VarPoint p{x.x1, x.x2, 0.0, 0.0};
  const double alpha = std::exp(metric_.nu().eval(p)) * std::hypot(y1, y2);
  if (alpha == 0.0) return 0.0;
  const double beta = form_.b1().eval(p) * y1 + form_.b2().eval(p) * y2;
  return alpha * phi_.value(beta / alpha);
}

Point2 MetricBundle::grid_point(std::size_t i) const {
  const std::size_t n1 = static_cast<std::size_t>(sampling_.n_x1);
  const std::size_t n2 = static_cast<std::size_t>(sampling_.n_x2);
  return domain().lerp(static_cast<double>(i % n1) / static_cast<double>(n1 - 1),
                       static_cast<double>(i / n1) / static_cast<double>(n2 - 1));
}

double MetricBundle::grid_angle(std::size_t k) const {
  return 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(sampling_.n_t);
}

// ---------------------------------------------------------------------------
// Operations on φ and on the indicatrix

PhiFunction reverse_phi(const PhiFunction& phi) {
  const Expression s = Expression::variable(Var::s);
  PhiFunction reversed(phi.field().expr().substitute(Var::s, -s), phi.b0());
  const ValidationReport report = validate_finsler(reversed, 64);
  if (!report.pass) throw ValidationError("reverse profile fails the Finsler conditions", report, FormBound{});
  return reversed;
}

EvenOddSplit even_odd_decompose(const PhiFunction& phi, int n_s, double eps_zero) {
  const Expression s = Expression::variable(Var::s);
  const Expression& f = phi.field().expr();
  const Expression mirrored = f.substitute(Var::s, -s);

  EvenOddSplit split;
  split.even = ScalarField(0.5 * (f + mirrored), {Var::s});
  split.odd = ScalarField(0.5 * (f - mirrored), {Var::s});

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double scale = 0.0;
  double at_max = 0.0;
  double s_max = 0.0;
  for (double sk : phi.s_grid(n_s)) {
    if (std::abs(sk) < 1e-3 * phi.b0()) continue;
    const double ratio = split.odd.eval(VarPoint{0, 0, sk, 0}) / sk;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    scale = std::max(scale, std::abs(phi.value(sk)) / std::abs(sk));
    if (std::abs(sk) > s_max) {
      s_max = std::abs(sk);
      at_max = ratio;
    }
  }
  split.ratio_spread = hi - lo;
  split.is_class_a_shape = split.ratio_spread <= eps_zero * (1.0 + scale);
  if (split.is_class_a_shape) split.k2 = 2.0 * at_max;
  return split;
}

BetaOnIndicatrix beta_on_indicatrix(const IsothermalMetric& metric, const LinearForm& form, Point2 x, double t) {
  const VarPoint p{x.x1, x.x2, 0.0, 0.0};
  const double w = std::exp(-metric.nu().eval(p));
  const double b1 = form.b1().eval(p);
  const double b2 = form.b2().eval(p);
  const double c = std::cos(t);
  const double s = std::sin(t);
  return {w * (b1 * c + b2 * s), w * (-b1 * s + b2 * c), w * w * (b1 * b1 + b2 * b2)};
}

BetaOnIndicatrix beta_on_indicatrix(const MetricBundle& bundle, Point2 x, double t) {
  return beta_on_indicatrix(bundle.metric(), bundle.form(), x, t);
}

IndicatrixValue indicatrix_p(const MetricBundle& bundle, Point2 x, double t) {
  const double beta = beta_on_indicatrix(bundle, x, t).beta;
  if (!(std::abs(beta) < bundle.phi().b0())) throw DomainError("|beta| reaches b0");
  return {bundle.phi().value(beta), bundle.phi().value(-beta)};
}

}  // namespace geodrev
