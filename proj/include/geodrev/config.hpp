#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "geodrev/metric.hpp"

namespace geodrev {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line);
  int line() const { return line_; }  // 0 when the error is not tied to a line

 private:
  int line_;
};

struct ExperimentConfig {
  ScalarField nu;
  Rect domain;
  ScalarField b1;
  ScalarField b2;
  std::string phi_kind;  // randers | matsumoto | expr
  Expression phi_expr;
  double b0 = 0.0;
  Sampling sampling;
  double T = 1.0;
  double h = 1e-3;
  int seeds = 8;

  PhiFunction phi() const { return PhiFunction(phi_expr, b0); }
  IsothermalMetric metric() const { return IsothermalMetric(nu, domain); }
  LinearForm form() const { return LinearForm(b1, b2); }
  // Validating constructor; throws ValidationError.
  MetricBundle bundle() const { return MetricBundle(metric(), form(), phi(), sampling); }
};

// [section] headers, key = value lines, # comments, double-quoted strings.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace geodrev
