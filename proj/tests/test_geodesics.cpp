#include <doctest.h>

#include <cmath>
#include <numbers>

#include "geodrev/geodesics.hpp"
#include "support.hpp"

using namespace geodrev;

namespace {

const std::vector<Var> kXY{Var::x1, Var::x2};

MetricBundle make(const char* nu, const char* phi, double b0, const char* b1, const char* b2, Rect domain) {
  return MetricBundle(IsothermalMetric(ScalarField::parse(nu, kXY), domain),
                      LinearForm(ScalarField::parse(b1, kXY), ScalarField::parse(b2, kXY)), PhiFunction::parse(phi, b0));
}

// Largest distance of the samples from the line through the first sample along `dir`.
double off_line(const GeodesicPath& p, Vec2 dir) {
  const double n = std::hypot(dir[0], dir[1]);
  double worst = 0.0;
  for (const Point2& q : p.samples) {
    const double dx = q.x1 - p.samples.front().x1;
    const double dy = q.x2 - p.samples.front().x2;
    worst = std::max(worst, std::abs(dx * dir[1] - dy * dir[0]) / n);
  }
  return worst;
}

double gap(Point2 a, Point2 b) { return std::hypot(a.x1 - b.x1, a.x2 - b.x2); }

GeodesicPath segment(Point2 a, Point2 b, int n) {
  GeodesicPath p;
  for (int i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / n;
    p.samples.push_back({a.x1 + u * (b.x1 - a.x1), a.x2 + u * (b.x2 - a.x2)});
  }
  return p;
}

}  // namespace

TEST_CASE("spray vanishes for Minkowski norms") {
  const MetricBundle b = testing::bundle("matsumoto_class_b.cfg");
  for (const auto& [x, t] : testing::random_samples(b, 20, 61)) {
    const Vec2 G = spray(b, x, {std::cos(t), std::sin(t)});
    CHECK(std::abs(G[0]) <= 1e-10);
    CHECK(std::abs(G[1]) <= 1e-10);
  }
}

TEST_CASE("spray of a conformal Riemannian metric") {
  const MetricBundle b = make("x1", "1", 0.9, "0", "0", Rect{-1, 1, -1, 1});
  for (const auto& [x, t] : testing::random_samples(b, 20, 67)) {
    const Vec2 y{std::cos(t), 2.0 * std::sin(t)};
    const Vec2 G = spray(b, x, y);
    const Vec2 want = riemann_spray(b.metric(), x, y);
    CHECK(std::abs(G[0] - want[0]) <= 1e-6);
    CHECK(std::abs(G[1] - want[1]) <= 1e-6);
  }
}

TEST_CASE("spray is homogeneous of degree two") {
  const MetricBundle b = testing::bundle("irreversible.cfg");
  for (const auto& [x, t] : testing::random_samples(b, 20, 71)) {
    const Vec2 y{std::cos(t), std::sin(t)};
    const Vec2 g1 = spray(b, x, y);
    const Vec2 g2 = spray(b, x, {2.0 * y[0], 2.0 * y[1]});
    const double scale = std::max(std::hypot(g1[0], g1[1]), 1e-12);
    CHECK(std::hypot(g2[0] - 4.0 * g1[0], g2[1] - 4.0 * g1[1]) / (4.0 * scale) <= 1e-5);
  }
  CHECK_THROWS_AS(spray(b, {0, 0}, {0.0, 0.0}), SprayError);
}

TEST_CASE("straight lines in the flat case") {
  const MetricBundle b = testing::bundle("matsumoto_class_b.cfg");
  for (Vec2 y : {Vec2{1.0, 0.5}, Vec2{-0.3, 1.0}, Vec2{-1.0, -1.0}}) {
    const GeodesicPath p = integrate(b, {0.0, 0.0}, y, 1.0, 1e-3);
    CHECK_FALSE(p.truncated);
    CHECK(off_line(p, y) <= 1e-8);
    const GeodesicPath r = riemann_geodesic(b.metric(), {0.0, 0.0}, y, 1.0, 1e-3);
    CHECK(path_distance(p, r) <= 1e-6);
  }
}

TEST_CASE("arc length with constant conformal factor") {
  const MetricBundle b = make("0.4", "1", 0.9, "0", "0", Rect{-3, 3, -3, 3});
  const Vec2 y{0.6, -0.8};
  const GeodesicPath p = integrate(b, {0.0, 0.0}, y, 1.0, 1e-3);
  double length = 0.0;
  for (std::size_t i = 1; i < p.samples.size(); ++i) length += gap(p.samples[i - 1], p.samples[i]);
  CHECK(std::abs(std::exp(0.4) * length - std::exp(0.4) * std::hypot(y[0], y[1]) * 1.0) <= 1e-6);
}

TEST_CASE("fourth-order convergence") {
  const IsothermalMetric sphere(ScalarField::parse("-ln(1 + (x1^2 + x2^2)/4)", kXY), Rect{-3, 3, -3, 3});
  auto end = [&](double h) { return riemann_geodesic(sphere, {0.5, -0.3}, {0.8, 1.1}, 1.0, h).samples.back(); };
  const double ratio = gap(end(0.1), end(0.05)) / gap(end(0.05), end(0.025));
  CHECK(ratio >= 8.0);
  CHECK(ratio <= 32.0);

  const MetricBundle b = make("0.5*x1 + 0.2*x2^2", "1", 0.9, "0", "0", Rect{-3, 3, -3, 3});
  auto fend = [&](double h) { return integrate(b, {0.1, 0.2}, {1.0, 0.4}, 1.0, h).samples.back(); };
  const double fratio = gap(fend(0.2), fend(0.1)) / gap(fend(0.1), fend(0.05));
  CHECK(fratio >= 8.0);
  CHECK(fratio <= 32.0);
}

TEST_CASE("riemannian geodesics") {
  const IsothermalMetric sphere(ScalarField::parse("-ln(1 + (x1^2 + x2^2)/4)", kXY), Rect{-3, 3, -3, 3});
  const GeodesicPath radial = riemann_geodesic(sphere, {0.0, 0.0}, {0.6, 0.3}, 1.0, 1e-3);
  CHECK(off_line(radial, {0.6, 0.3}) <= 1e-12);

  const MetricBundle b = make("-ln(1 + (x1^2 + x2^2)/4)", "1", 0.9, "0", "0", Rect{-3, 3, -3, 3});
  const GeodesicPath a = integrate(b, {0.5, -0.4}, {0.3, 0.9}, 1.0, 1e-3);
  const GeodesicPath c = riemann_geodesic(b.metric(), {0.5, -0.4}, {0.3, 0.9}, 1.0, 1e-3);
  CHECK(gap(a.samples.back(), c.samples.back()) <= 1e-6);
  CHECK(path_distance(a, c) <= 1e-6);
}

TEST_CASE("path distance") {
  const GeodesicPath a = segment({0, 0}, {1, 0}, 100);
  CHECK(path_distance(a, a) == 0.0);
  CHECK(path_distance(a, segment({0, 0.25}, {1, 0.25}, 37)) == doctest::Approx(0.25).epsilon(1e-12));
  GeodesicPath reversed = a;
  std::reverse(reversed.samples.begin(), reversed.samples.end());
  CHECK(path_distance(a, reversed) == 0.0);
  CHECK(path_distance(a, segment({0, 0}, {1, 0}, 7)) <= 1e-15);
  CHECK_THROWS(path_distance(a, GeodesicPath{}));
}

TEST_CASE("truncation at the domain boundary") {
  const MetricBundle b = make("0", "1", 0.9, "0", "0", Rect{-1, 1, -1, 1});
  const GeodesicPath p = integrate(b, {0.0, 0.0}, {1.0, 0.0}, 2.0, 1e-2);
  CHECK(p.truncated);
  CHECK(p.samples.back().x1 <= 1.0);
  CHECK(p.samples.size() < 201);
  CHECK_THROWS(integrate(b, {0, 0}, {1, 0}, 1.0, 0.0));
}

TEST_CASE("reversibility of geodesic paths") {
  const MetricBundle riem = make("0.3*x1 - 0.2*x2^2", "1", 0.9, "0.01", "0.02", Rect{-2, 2, -2, 2});
  CHECK(reversibility_error(riem, {0.1, 0.2}, {1.0, -0.5}, 1.0, 1e-3) <= 1e-6);

  const MetricBundle a = testing::bundle("randers_class_a.cfg");
  for (const BatchEntry& e : reversibility_batch(a, {0.0, 0.0}, 8, 1.0, 1e-3)) {
    CHECK_FALSE(e.truncated);
    CHECK(e.error <= 1e-6);
  }

  const MetricBundle irr = testing::bundle("irreversible.cfg");
  double worst = 0.0;
  for (const BatchEntry& e : reversibility_batch(irr, {0.0, 0.0}, 8, 1.0, 1e-3)) worst = std::max(worst, e.error);
  CHECK(worst >= 1e-3);

  const double e1 = reversibility_error(irr, {0.2, 0.1}, {0.3, 0.7}, 1.0, 1e-3);
  const double e5 = reversibility_error(irr, {0.2, 0.1}, {1.5, 3.5}, 1.0, 1e-3);
  CHECK(std::abs(e1 - e5) <= 1e-6);
}

TEST_CASE("batch runs are independent of scheduling") {
  const MetricBundle irr = testing::bundle("irreversible.cfg");
  const auto s = reversibility_batch(irr, {0.1, -0.1}, 4, 0.5, 1e-2, Exec::serial);
  const auto p = reversibility_batch(irr, {0.1, -0.1}, 4, 0.5, 1e-2, Exec::parallel);
  REQUIRE(s.size() == p.size());
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i].error == p[i].error);
}
