#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "geodrev/config.hpp"

namespace testing {

inline std::string config_path(const std::string& name) { return std::string(GEODREV_CONFIG_DIR) + "/" + name; }

inline geodrev::ExperimentConfig load(const std::string& name) { return geodrev::load_config(config_path(name)); }
inline geodrev::MetricBundle bundle(const std::string& name) { return load(name).bundle(); }

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

struct Sample {
  geodrev::Point2 x;
  double t;
};

// Uniform random points of the bundle's domain and fiber angles, fixed seed.
inline std::vector<Sample> random_samples(const geodrev::MetricBundle& b, int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  std::vector<Sample> out;
  for (int i = 0; i < n; ++i) {
    const double u1 = u(rng);
    const double u2 = u(rng);
    out.push_back({b.domain().lerp(u1, u2), angle(rng)});
  }
  return out;
}

// Profiles used across tests: name, φ, b0.
struct CorpusPhi {
  std::string name;
  std::string expr;
  double b0;
  bool even_plus_linear;  // φ = even + c·s
};

inline const std::vector<CorpusPhi>& corpus() {
  static const std::vector<CorpusPhi> c{
      {"randers", "1 + s", 0.9, true},
      {"matsumoto", "1/(1 - s)", 0.45, false},
      {"quadratic", "1 + s^2", 0.5, true},
      {"quadratic_linear", "1 + s^2 + 0.3*s", 0.5, true},
      {"exp_linear", "exp(s^2) - 0.5*s", 0.3, true},
  };
  return c;
}

inline const std::vector<std::string>& corpus_configs() {
  static const std::vector<std::string> c{"randers_class_a.cfg", "matsumoto_class_b.cfg", "irreversible.cfg",
                                          "even_quadratic.cfg",  "class_a_expr.cfg",      "riemannian.cfg"};
  return c;
}

}  // namespace testing
