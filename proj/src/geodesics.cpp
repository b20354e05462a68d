#include "geodrev/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace geodrev {

namespace {

double energy(const MetricBundle& bundle, Point2 x, Vec2 y) {
  const double f = bundle.norm(x, y[0], y[1]);
  return f * f;
}

using Accel = std::function<Vec2(Point2, Vec2)>;

struct State {
  Point2 x;
  Vec2 y;
};

State axpy(const State& s, double h, const State& k) {
  return {{s.x.x1 + h * k.x.x1, s.x.x2 + h * k.x.x2}, {s.y[0] + h * k.y[0], s.y[1] + h * k.y[1]}};
}

GeodesicPath run_rk4(const Accel& accel, const Rect& domain, Point2 x0, Vec2 y0, double T, double h) {
  if (!(h > 0.0) || !(T > 0.0)) throw std::invalid_argument("T and h must be positive");
  if (y0[0] == 0.0 && y0[1] == 0.0) throw std::invalid_argument("initial direction must be nonzero");
  const long n = std::max(1L, std::lround(T / h));

  GeodesicPath path;
  path.x0 = x0;
  path.y0 = y0;
  path.h = h;
  path.T = T;
  path.samples.reserve(static_cast<std::size_t>(n) + 1);
  path.velocities.reserve(static_cast<std::size_t>(n) + 1);
  path.samples.push_back(x0);
  path.velocities.push_back(y0);

  auto rhs = [&](const State& s) {
    const Vec2 a = accel(s.x, s.y);
    return State{{s.y[0], s.y[1]}, a};
  };

  State s{x0, y0};
  for (long i = 0; i < n; ++i) {
    const State k1 = rhs(s);
    const State k2 = rhs(axpy(s, 0.5 * h, k1));
    const State k3 = rhs(axpy(s, 0.5 * h, k2));
    const State k4 = rhs(axpy(s, h, k3));
    State next = s;
    next.x.x1 += h / 6.0 * (k1.x.x1 + 2.0 * k2.x.x1 + 2.0 * k3.x.x1 + k4.x.x1);
    next.x.x2 += h / 6.0 * (k1.x.x2 + 2.0 * k2.x.x2 + 2.0 * k3.x.x2 + k4.x.x2);
    for (int j = 0; j < 2; ++j) next.y[j] += h / 6.0 * (k1.y[j] + 2.0 * k2.y[j] + 2.0 * k3.y[j] + k4.y[j]);
    if (!domain.contains(next.x)) {
      path.truncated = true;
      break;
    }
    s = next;
    path.samples.push_back(s.x);
    path.velocities.push_back(s.y);
  }
  return path;
}

double point_segment(Point2 p, Point2 a, Point2 b) {
  const double dx = b.x1 - a.x1;
  const double dy = b.x2 - a.x2;
  const double len2 = dx * dx + dy * dy;
  double u = 0.0;
  if (len2 > 0.0) u = std::clamp(((p.x1 - a.x1) * dx + (p.x2 - a.x2) * dy) / len2, 0.0, 1.0);
  return std::hypot(p.x1 - (a.x1 + u * dx), p.x2 - (a.x2 + u * dy));
}

double mean_nearest(const std::vector<Point2>& from, const std::vector<Point2>& to) {
  double sum = 0.0;
  for (const Point2& p : from) {
    double best = std::numeric_limits<double>::infinity();
    if (to.size() == 1) best = std::hypot(p.x1 - to[0].x1, p.x2 - to[0].x2);
    for (std::size_t i = 0; i + 1 < to.size(); ++i) best = std::min(best, point_segment(p, to[i], to[i + 1]));
    sum += best;
  }
  return sum / static_cast<double>(from.size());
}

}  // namespace

Vec2 spray(const MetricBundle& bundle, Point2 x, Vec2 y) {
  const double hy = 1e-4 * std::hypot(y[0], y[1]);
  const double hx = 1e-5 * bundle.domain().extent();
  if (!(hy > 0.0)) throw SprayError("spray needs a nonzero direction");

  auto E = [&](Point2 p, Vec2 v) { return energy(bundle, p, v); };
  auto shifted = [](Vec2 v, int i, double d) {
    v[i] += d;
    return v;
  };
  auto xshift = [](Point2 p, int k, double d) {
    if (k == 0) p.x1 += d;
    else p.x2 += d;
    return p;
  };
  // ∂E/∂yⁱ at (p, y).
  auto dEy = [&](Point2 p, int i) { return (E(p, shifted(y, i, hy)) - E(p, shifted(y, i, -hy))) / (2.0 * hy); };

  double g[2][2];
  const double e0 = E(x, y);
  for (int i = 0; i < 2; ++i) g[i][i] = 0.5 * (E(x, shifted(y, i, hy)) - 2.0 * e0 + E(x, shifted(y, i, -hy))) / (hy * hy);
  {
    Vec2 pp = y, pm = y, mp = y, mm = y;
    pp[0] += hy, pp[1] += hy;
    pm[0] += hy, pm[1] -= hy;
    mp[0] -= hy, mp[1] += hy;
    mm[0] -= hy, mm[1] -= hy;
    g[0][1] = g[1][0] = 0.5 * (E(x, pp) - E(x, pm) - E(x, mp) + E(x, mm)) / (4.0 * hy * hy);
  }

  double rhs[2];
  for (int i = 0; i < 2; ++i) {
    double mixed = 0.0;
    for (int k = 0; k < 2; ++k) {
      mixed += (dEy(xshift(x, k, hx), i) - dEy(xshift(x, k, -hx), i)) / (2.0 * hx) * y[k];
    }
    const double dEx = (E(xshift(x, i, hx), y) - E(xshift(x, i, -hx), y)) / (2.0 * hx);
    rhs[i] = 0.25 * (mixed - dEx);
  }

  const double det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  if (!(g[0][0] > 0.0) || !(det > 0.0)) throw SprayError("fundamental tensor is not positive definite");
  return {(g[1][1] * rhs[0] - g[0][1] * rhs[1]) / det, (g[0][0] * rhs[1] - g[1][0] * rhs[0]) / det};
}

Vec2 riemann_spray(const IsothermalMetric& metric, Point2 x, Vec2 y) {
  const NuJet nu = metric.jet(x);
  const double dot = nu.n1 * y[0] + nu.n2 * y[1];
  const double yy = y[0] * y[0] + y[1] * y[1];
  return {y[0] * dot - 0.5 * yy * nu.n1, y[1] * dot - 0.5 * yy * nu.n2};
}

GeodesicPath integrate(const MetricBundle& bundle, Point2 x0, Vec2 y0, double T, double h) {
  const Accel accel = [&](Point2 x, Vec2 y) {
    const Vec2 G = spray(bundle, x, y);
    return Vec2{-2.0 * G[0], -2.0 * G[1]};
  };
  return run_rk4(accel, bundle.domain(), x0, y0, T, h);
}

GeodesicPath riemann_geodesic(const IsothermalMetric& metric, Point2 x0, Vec2 y0, double T, double h) {
  const Accel accel = [&](Point2 x, Vec2 y) {
    const Vec2 G = riemann_spray(metric, x, y);
    return Vec2{-2.0 * G[0], -2.0 * G[1]};
  };
  return run_rk4(accel, metric.domain(), x0, y0, T, h);
}

double path_distance(const GeodesicPath& a, const GeodesicPath& b) {
  if (a.samples.empty() || b.samples.empty()) throw std::invalid_argument("path_distance needs non-empty paths");
  return 0.5 * (mean_nearest(a.samples, b.samples) + mean_nearest(b.samples, a.samples));
}

double reverse_length(const MetricBundle& bundle, const GeodesicPath& path) {
  const std::size_t n = path.samples.size() - 1;
  if (n == 0) return 0.0;
  std::vector<double> f(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    f[i] = bundle.norm(path.samples[i], -path.velocities[i][0], -path.velocities[i][1]);
  }
  const double h = path.h;
  if (n == 1) return 0.5 * h * (f[0] + f[1]);
  // Simpson on an even number of intervals, 3/8 rule on a trailing odd triple.
  const std::size_t even = (n % 2 == 0) ? n : n - 3;
  double sum = 0.0;
  for (std::size_t i = 0; i + 2 <= even; i += 2) sum += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
  if (even != n) sum += 3.0 * h / 8.0 * (f[even] + 3.0 * f[even + 1] + 3.0 * f[even + 2] + f[even + 3]);
  return sum;
}

ReversibilityRun reversibility_run(const MetricBundle& bundle, Point2 x0, Vec2 y0, double T, double h) {
  const double speed = bundle.norm(x0, y0[0], y0[1]);
  if (!(speed > 0.0)) throw std::invalid_argument("initial direction must have positive F-speed");
  const Vec2 unit{y0[0] / speed, y0[1] / speed};

  ReversibilityRun run;
  run.forward = integrate(bundle, x0, unit, T, h);
  const Point2 xT = run.forward.samples.back();
  const Vec2 yT = run.forward.velocities.back();
  const Vec2 back{-yT[0], -yT[1]};

  const double length = reverse_length(bundle, run.forward);
  if (length > 0.0) {
    const double T_back = length / bundle.norm(xT, back[0], back[1]);
    const long n = std::max(1L, std::lround(T_back / h));
    run.backward = integrate(bundle, xT, back, T_back, T_back / static_cast<double>(n));
  } else {
    run.backward.samples = {xT};
    run.backward.velocities = {back};
  }
  run.truncated = run.forward.truncated || run.backward.truncated;
  run.error = path_distance(run.forward, run.backward);
  return run;
}

double reversibility_error(const MetricBundle& bundle, Point2 x0, Vec2 y0, double T, double h) {
  return reversibility_run(bundle, x0, y0, T, h).error;
}

std::vector<BatchEntry> reversibility_batch(const MetricBundle& bundle, Point2 x0, int seeds, double T, double h,
                                            Exec exec) {
  if (seeds < 1) throw std::invalid_argument("seeds must be positive");
  return map_over<BatchEntry>(
      static_cast<std::size_t>(seeds),
      [&](std::size_t k) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(seeds);
        BatchEntry e;
        e.y0 = {std::cos(a), std::sin(a)};
        const ReversibilityRun run = reversibility_run(bundle, x0, e.y0, T, h);
        e.error = run.error;
        e.truncated = run.truncated;
        return e;
      },
      exec);
}

}  // namespace geodrev
