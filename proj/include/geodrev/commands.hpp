#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "geodrev/geodesics.hpp"

namespace geodrev {

enum ExitCode : int { kOk = 0, kConfigError = 1, kValidationFailure = 2, kTruncated = 3 };

// Number for human-readable reports: %.10g, with ".0" appended to integers.
std::string format_report_number(double v);

// `csv_out`, when set, receives the ec1 margin grid (columns s, b, ec1_margin).
int cmd_validate(const std::filesystem::path& config, std::ostream& out, std::ostream& err,
                 const std::optional<std::filesystem::path>& csv_out = std::nullopt);

int cmd_classify(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

// what: E | F | residual | crosscheck
int cmd_scan(const std::filesystem::path& config, const std::string& what, const std::filesystem::path& csv_out,
             std::ostream& out, std::ostream& err);

struct GeodesicOptions {
  Point2 x0;
  std::optional<Vec2> y0;  // unset: batch over the configured seed directions
  std::optional<double> T;
  std::optional<double> h;
  std::filesystem::path out;
};

// Single run: writes the forward path to opts.out and the reversed run next to
// it as <stem>_reversed.csv. Batch: writes one summary row per direction.
int cmd_geodesic(const std::filesystem::path& config, const GeodesicOptions& opts, std::ostream& out,
                 std::ostream& err);

}  // namespace geodrev
