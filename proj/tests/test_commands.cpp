#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "geodrev/commands.hpp"
#include "support.hpp"

using namespace geodrev;

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(GEODREV_TEST_TMPDIR) / "command_out";
  fs::create_directories(dir);
  return dir / name;
}

std::vector<std::vector<double>> read_csv(const fs::path& p, std::string* header = nullptr) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Captured {
  int code;
  std::string out;
  std::string err;
};

template <class Fn>
Captured capture(Fn&& fn) {
  std::ostringstream out, err;
  const int code = fn(out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("report numbers") {
  CHECK(format_report_number(1.0) == "1.0");
  CHECK(format_report_number(0.25) == "0.25");
  CHECK(format_report_number(-3.0) == "-3.0");
  CHECK(format_report_number(1e-12) == "1e-12");
}

TEST_CASE("validate") {
  auto ok = capture([](auto& o, auto& e) { return cmd_validate(testing::config_path("randers_class_a.cfg"), o, e); });
  CHECK(ok.code == kOk);
  CHECK(ok.out.find("min_margin_ec1 = 1.0\n") != std::string::npos);
  CHECK(ok.out.find("status: pass") != std::string::npos);

  auto bad = capture([](auto& o, auto& e) { return cmd_validate(testing::config_path("degenerate_phi.cfg"), o, e); });
  CHECK(bad.code == kValidationFailure);
  CHECK(bad.out.find("witness:") != std::string::npos);

  auto missing = capture([](auto& o, auto& e) { return cmd_validate(testing::config_path("missing_b2.cfg"), o, e); });
  CHECK(missing.code == kConfigError);
  CHECK(missing.err.find("b2") != std::string::npos);

  const fs::path csv = scratch("ec1.csv");
  auto grid = capture([&](auto& o, auto& e) { return cmd_validate(testing::config_path("irreversible.cfg"), o, e, csv); });
  CHECK(grid.code == kOk);
  std::string header;
  const auto rows = read_csv(csv, &header);
  CHECK(header == "s,b,ec1_margin");
  CHECK(rows.size() == 159u * 159u);
}

TEST_CASE("classify") {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"randers_class_a.cfg", "verdict: ClassA\n"},
      {"matsumoto_class_b.cfg", "verdict: ClassB\n"},
      {"irreversible.cfg", "verdict: Irreversible\n"},
  };
  for (const auto& [cfg, verdict] : cases) {
    CAPTURE(cfg);
    auto r = capture([&](auto& o, auto& e) { return cmd_classify(testing::config_path(cfg), o, e); });
    CHECK(r.code == kOk);
    CHECK(r.out.rfind(verdict, 0) == 0);
    CHECK(r.out.find("residual") != std::string::npos);
  }
  auto bad = capture([](auto& o, auto& e) { return cmd_classify(testing::config_path("degenerate_phi.cfg"), o, e); });
  CHECK(bad.code == kValidationFailure);
}

TEST_CASE("scan E hits the oracle row") {
  const fs::path out = scratch("E.csv");
  auto r = capture([&](auto& o, auto& e) { return cmd_scan(testing::config_path("irreversible.cfg"), "E", out, o, e); });
  REQUIRE(r.code == kOk);
  std::string header;
  const auto rows = read_csv(out, &header);
  CHECK(header == "s,E");
  CHECK(rows.size() == 159u);
  bool found = false;
  for (const auto& row : rows) {
    if (std::abs(row[0] - 0.1) < 1e-12) {
      found = true;
      CHECK(std::abs(row[1] - 1.23673) <= 1e-5);
    }
  }
  CHECK(found);
}

TEST_CASE("scan F, residual and crosscheck") {
  const fs::path f = scratch("F.csv");
  REQUIRE(capture([&](auto& o, auto& e) { return cmd_scan(testing::config_path("randers_class_a.cfg"), "F", f, o, e); }).code == kOk);
  for (const auto& row : read_csv(f)) CHECK(std::abs(row[2] - 2.0) <= 1e-12);

  const fs::path res = scratch("residual.csv");
  REQUIRE(capture([&](auto& o, auto& e) {
            return cmd_scan(testing::config_path("matsumoto_class_b.cfg"), "residual", res, o, e);
          }).code == kOk);
  const auto rows = read_csv(res);
  CHECK(rows.size() == 21u * 21u * 64u);
  for (const auto& row : rows) CHECK(std::abs(row[3]) <= 1e-9);

  const fs::path cc = scratch("crosscheck.csv");
  REQUIRE(capture([&](auto& o, auto& e) {
            return cmd_scan(testing::config_path("irreversible.cfg"), "crosscheck", cc, o, e);
          }).code == kOk);
  std::string header;
  double worst = 0.0;
  for (const auto& row : read_csv(cc, &header)) worst = std::max(worst, row[5]);
  CHECK(header == "x1,x2,t,direct,closed_form,gap,ratio");
  CHECK(worst <= 1e-6);

  auto bad = capture([&](auto& o, auto& e) { return cmd_scan(testing::config_path("irreversible.cfg"), "G", cc, o, e); });
  CHECK(bad.code == kConfigError);
  auto unwritable = capture([&](auto& o, auto& e) {
    return cmd_scan(testing::config_path("irreversible.cfg"), "E", "/nonexistent/dir/x.csv", o, e);
  });
  CHECK(unwritable.code == kConfigError);
}

TEST_CASE("scans are byte-identical across runs") {
  const fs::path a = scratch("det_a.csv");
  const fs::path b = scratch("det_b.csv");
  for (const fs::path& p : {a, b}) {
    REQUIRE(capture([&](auto& o, auto& e) {
              return cmd_scan(testing::config_path("irreversible.cfg"), "residual", p, o, e);
            }).code == kOk);
  }
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("geodesic") {
  const fs::path out = scratch("path.csv");
  GeodesicOptions opts;
  opts.x0 = {0.0, 0.0};
  opts.y0 = Vec2{1.0, 0.5};
  opts.out = out;
  auto r = capture([&](auto& o, auto& e) { return cmd_geodesic(testing::config_path("matsumoto_class_b.cfg"), opts, o, e); });
  REQUIRE(r.code == kOk);
  const double err = std::stod(r.out.substr(r.out.find('=') + 1));
  CHECK(err <= 1e-6);
  std::string header;
  const auto fwd = read_csv(out, &header);
  CHECK(header == "step,x1,x2");
  CHECK(fwd.size() == 1001u);
  for (const auto& row : fwd) CHECK(std::abs(row[2] - 0.5 * row[1]) <= 1e-8);
  CHECK(fs::exists(scratch("path_reversed.csv")));

  const fs::path batch = scratch("batch.csv");
  GeodesicOptions many;
  many.x0 = {0.0, 0.0};
  many.out = batch;
  auto b = capture([&](auto& o, auto& e) { return cmd_geodesic(testing::config_path("irreversible.cfg"), many, o, e); });
  REQUIRE(b.code == kOk);
  double worst = 0.0;
  const auto rows = read_csv(batch);
  CHECK(rows.size() == 8u);
  for (const auto& row : rows) worst = std::max(worst, row[4]);
  CHECK(worst >= 1e-3);

  GeodesicOptions far = opts;
  far.T = 5.0;
  far.h = 1e-2;
  auto t = capture([&](auto& o, auto& e) { return cmd_geodesic(testing::config_path("irreversible.cfg"), far, o, e); });
  CHECK(t.code == kTruncated);

  GeodesicOptions outside = opts;
  outside.x0 = {5.0, 0.0};
  auto x = capture([&](auto& o, auto& e) { return cmd_geodesic(testing::config_path("irreversible.cfg"), outside, o, e); });
  CHECK(x.code == kConfigError);
}
