#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "geodrev/metric.hpp"

namespace geodrev {

using Vec2 = std::array<double, 2>;

struct GeodesicPath {
  std::vector<Point2> samples;
  std::vector<Vec2> velocities;  // x' at each sample
  Point2 x0;
  Vec2 y0{};
  double h = 0.0;
  double T = 0.0;
  bool truncated = false;  // stopped at the domain boundary before T
};

class SprayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Geodesic coefficients Gⁱ of F from nested central differences of F².
Vec2 spray(const MetricBundle& bundle, Point2 x, Vec2 y);

// ½γⁱⱼₖyʲyᵏ for a_ij = e^{2ν}δ_ij.
Vec2 riemann_spray(const IsothermalMetric& metric, Point2 x, Vec2 y);

// Classical RK4 for x'' = -2G(x, x') with round(T / h) fixed steps.
GeodesicPath integrate(const MetricBundle& bundle, Point2 x0, Vec2 y0, double T, double h);
GeodesicPath riemann_geodesic(const IsothermalMetric& metric, Point2 x0, Vec2 y0, double T, double h);

// Symmetric mean of nearest-point distances from each sample to the other polyline.
double path_distance(const GeodesicPath& a, const GeodesicPath& b);

// ∫ F(x, -x') dt along the samples (composite Simpson).
double reverse_length(const MetricBundle& bundle, const GeodesicPath& path);

struct ReversibilityRun {
  GeodesicPath forward;
  GeodesicPath backward;
  double error = 0.0;
  bool truncated = false;
};

// Forward run with y0 rescaled to unit F-speed, then a run from (x_T, -y_T)
// long enough to cover the forward path's F̄-length.
ReversibilityRun reversibility_run(const MetricBundle& bundle, Point2 x0, Vec2 y0, double T, double h);
double reversibility_error(const MetricBundle& bundle, Point2 x0, Vec2 y0, double T, double h);

struct BatchEntry {
  Vec2 y0{};
  double error = 0.0;
  bool truncated = false;
};

// One run per direction (cos 2πk/n, sin 2πk/n), k < seeds.
std::vector<BatchEntry> reversibility_batch(const MetricBundle& bundle, Point2 x0, int seeds, double T, double h,
                                            Exec exec = Exec::parallel);

}  // namespace geodrev
