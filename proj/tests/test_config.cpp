#include <doctest.h>

#include "geodrev/config.hpp"
#include "support.hpp"

using namespace geodrev;

namespace {

const char* kMinimal = R"(
[form]
b1 = "0.1*x2"   # trailing comment
b2 = "0.1*x1"
[phi]
kind = "randers"
)";

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("defaults") {
  const ExperimentConfig c = parse_config(kMinimal);
  CHECK(c.phi_kind == "randers");
  CHECK(c.b0 == 0.9);
  CHECK(c.domain.x1_min == -1.0);
  CHECK(c.domain.x2_max == 1.0);
  CHECK(c.sampling.n_x1 == 21);
  CHECK(c.sampling.n_t == 64);
  CHECK(c.sampling.n_s == 201);
  CHECK(c.sampling.eps_zero == 1e-9);
  CHECK(c.T == 1.0);
  CHECK(c.h == 1e-3);
  CHECK(c.seeds == 8);
  CHECK(c.nu.eval(VarPoint{0.3, 0.2, 0, 0}) == 0.0);
  CHECK(c.b1.eval(VarPoint{0.0, 2.0, 0, 0}) == doctest::Approx(0.2));
  CHECK_NOTHROW(c.bundle());
}

TEST_CASE("full file") {
  const ExperimentConfig c = testing::load("irreversible.cfg");
  CHECK(c.phi_kind == "matsumoto");
  CHECK(c.b0 == 0.4);
  CHECK(c.domain.x1_min == -1.5);
  CHECK(c.sampling.n_s == 159);
  CHECK(c.phi().value(0.5) == 2.0);

  const ExperimentConfig e = testing::load("class_a_expr.cfg");
  CHECK(e.phi_kind == "expr");
  CHECK(e.b0 == 0.3);
  CHECK(e.phi().value(0.0) == 1.0);
}

TEST_CASE("errors carry line numbers") {
  CHECK(error_line("[form]\nb1 = \"0\"\nb2 = \"0\"\n[phi]\nkind = \"nope\"\n") == 5);
  CHECK(error_line("[form]\nb1 = \"x3\"\n") == 2);
  CHECK(error_line("[bogus]\n") == 1);
  CHECK(error_line("[form]\ncolour = \"red\"\n") == 2);
  CHECK(error_line("b1 = \"0\"\n") == 1);
  CHECK(error_line("[form\n") == 1);
  CHECK(error_line("[form]\nb1 \"0\"\n") == 2);
  CHECK(error_line("[form]\nb1 = \"0\nb2 = \"0\"\n") == 2);
  CHECK(error_line("[form]\nb1 = \"0\"\nb1 = \"1\"\n") == 3);
  CHECK(error_line(std::string(kMinimal) + "[sampling]\nn_t = 4\n") == 8);
  CHECK(error_line(std::string(kMinimal) + "[sampling]\nn_t = 4.5\n") == 8);
  CHECK(error_line(std::string(kMinimal) + "b0 = 1.5\n") == 7);
  CHECK(error_line(std::string(kMinimal) + "b0 = \"0.5\"\n") == 7);
  CHECK(error_line(std::string(kMinimal) + "expr = \"1 + s\"\n") == 7);
  CHECK(error_line("[form]\nb1 = \"0\"\nb2 = \"0\"\n[phi]\nkind = \"expr\"\nexpr = \"1 + x1\"\nb0 = 0.5\n") == 6);
}

TEST_CASE("missing keys") {
  CHECK_THROWS_AS(testing::load("missing_b2.cfg"), ConfigError);
  CHECK_THROWS_AS(parse_config("[form]\nb1 = \"0\"\nb2 = \"0\"\n[phi]\nkind = \"expr\"\nexpr = \"1\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[form]\nb1 = \"0\"\nb2 = \"0\"\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[geodesics]\nh = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "[metric]\nx1_min = 2\n"), ConfigError);
}

TEST_CASE("degenerate profile parses but does not validate") {
  const ExperimentConfig c = testing::load("degenerate_phi.cfg");
  CHECK_THROWS_AS(c.bundle(), ValidationError);
}
