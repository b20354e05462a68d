#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "geodrev/commands.hpp"
#include "geodrev/parallel.hpp"

namespace {

// "a,b" -> {a, b}
std::array<double, 2> parse_pair(const std::string& text, const std::string& flag) {
  std::istringstream in(text);
  std::array<double, 2> v{};
  char comma = 0;
  if (!(in >> v[0] >> comma >> v[1]) || comma != ',' || !(in >> std::ws).eof()) {
    throw CLI::ValidationError(flag, "expected two comma-separated numbers, got '" + text + "'");
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  geodrev::configure_threads_from_env();

  CLI::App app{"Reversible-geodesics checks for 2D (alpha, beta)-Finsler metrics"};
  app.require_subcommand(1);

  std::string config;
  std::string what;
  std::string out_path;
  std::string validate_csv;
  std::string x0_text;
  std::string y0_text;
  double T = 0.0;
  double h = 0.0;

  auto* validate = app.add_subcommand("validate", "Check the Finsler conditions and the bound on b");
  validate->add_option("config", config, "Experiment config")->required()->check(CLI::ExistingFile);
  validate->add_option("--out", validate_csv, "Write the ec1 margin grid as CSV");

  auto* classify = app.add_subcommand("classify", "Print the reversibility class and its evidence");
  classify->add_option("config", config, "Experiment config")->required()->check(CLI::ExistingFile);

  auto* scan = app.add_subcommand("scan", "Write a CSV scan of E, F, the residual or the crosscheck");
  scan->add_option("config", config, "Experiment config")->required()->check(CLI::ExistingFile);
  scan->add_option("--what", what, "Quantity to scan")
      ->required()
      ->check(CLI::IsMember({"E", "F", "residual", "crosscheck"}));
  scan->add_option("--out", out_path, "CSV output path")->required();

  auto* geodesic = app.add_subcommand("geodesic", "Integrate geodesics and measure reversibility");
  geodesic->set_help_flag("--help", "Print this help message and exit");  // frees -h for the step size
  geodesic->add_option("config", config, "Experiment config")->required()->check(CLI::ExistingFile);
  geodesic->add_option("--x0", x0_text, "Start point a,b")->required();
  geodesic->add_option("--y0", y0_text, "Initial direction c,d (omit for a batch over seed directions)");
  auto* T_opt = geodesic->add_option("--T", T, "Duration")->check(CLI::PositiveNumber);
  auto* h_opt = geodesic->add_option("--h", h, "Step")->check(CLI::PositiveNumber);
  geodesic->add_option("--out", out_path, "CSV output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : geodrev::kConfigError;
  }

  if (*validate) {
    std::optional<std::filesystem::path> csv;
    if (!validate_csv.empty()) csv = validate_csv;
    return geodrev::cmd_validate(config, std::cout, std::cerr, csv);
  }
  if (*classify) return geodrev::cmd_classify(config, std::cout, std::cerr);
  if (*scan) return geodrev::cmd_scan(config, what, out_path, std::cout, std::cerr);

  geodrev::GeodesicOptions opts;
  try {
    const auto x0 = parse_pair(x0_text, "--x0");
    opts.x0 = {x0[0], x0[1]};
    if (!y0_text.empty()) opts.y0 = parse_pair(y0_text, "--y0");
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return geodrev::kConfigError;
  }
  if (*T_opt) opts.T = T;
  if (*h_opt) opts.h = h;
  opts.out = out_path;
  return geodrev::cmd_geodesic(config, opts, std::cout, std::cerr);
}
