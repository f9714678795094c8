#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "icflow/config.hpp"
#include "icflow/errors.hpp"

using namespace icflow;

static const char* kFlowText = R"(# perturbed sphere, mean curvature version
[shape]
variant = perturbed_sphere
n = 3
radius = 1
modes = 2:0.1

[grid]
N = 96
order = 4

[flow]
k = 1
t_end = 4
record_every = 0.5

[output]
dir = out_test
svg = false
)";

TEST_CASE("parsing a full config") {
  const auto cfg = parse_config_text(kFlowText);
  REQUIRE(cfg.shape.has_value());
  CHECK(cfg.shape->kind == ShapeSpec::Kind::PerturbedSphere);
  CHECK(cfg.shape->n == 3);
  CHECK(cfg.grid.N == 96);
  CHECK(cfg.grid.p == 4);
  REQUIRE(cfg.flow.has_value());
  CHECK(cfg.flow->k == 1);
  CHECK(cfg.flow->t_end == 4.0);
  CHECK(cfg.record_every == 0.5);
  CHECK(cfg.out_dir == "out_test");
  CHECK_FALSE(cfg.svg);
  // suite defaults to the single configured shape
  REQUIRE(cfg.suite.shapes.size() == 1);
  CHECK(cfg.suite.shapes[0].describe() == cfg.shape->describe());
}

TEST_CASE("defaults apply when keys are omitted") {
  const auto cfg = parse_config_text("[shape]\nvariant = sphere\nn = 4\n");
  CHECK(cfg.shape->radius == 1.0);
  CHECK(cfg.grid.N == 128);
  CHECK(cfg.grid.p == 4);
  CHECK_FALSE(cfg.flow.has_value());
  CHECK(cfg.out_dir == "out");
  CHECK(cfg.svg);
}

TEST_CASE("empty config falls back to the bundled suite") {
  const auto cfg = parse_config_text("");
  CHECK_FALSE(cfg.shape.has_value());
  CHECK(cfg.suite.shapes.size() >= 5);
}

TEST_CASE("unknown keys and sections are errors with line numbers") {
  try {
    parse_config_text("[grid]\nN = 64\nbogus = 1\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line == 3);
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("[nope]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("key = 1\n"), ConfigError);       // outside sections
  CHECK_THROWS_AS(parse_config_text("[grid]\nN: 64\n"), ConfigError); // wrong separator
  CHECK_THROWS_AS(parse_config_text("[grid]\nN = sixty\n"), ConfigError);
}

TEST_CASE("k out of range is a config error citing the valid range") {
  const std::string text =
      "[shape]\nvariant = sphere\nn = 3\n[flow]\nk = 3\n";
  try {
    parse_config_text(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("1..2") != std::string::npos);
  }
}

TEST_CASE("validation failures surface as config errors") {
  CHECK_THROWS_AS(
      parse_config_text("[shape]\nvariant = sphere\nn = 3\n[flow]\nk = 1\ndt_initial = 0\n"),
      ConfigError);
  CHECK_THROWS_AS(parse_config_text("[grid]\nN = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[shape]\nvariant = dodecahedron\nn = 3\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text("[shape]\nn = 3\n"), ConfigError);  // missing variant
  CHECK_THROWS_AS(parse_config_text("[flow]\nk = 1\n"), ConfigError);   // flow without shape
}

TEST_CASE("serialize-parse round trip is idempotent") {
  const auto once = serialize_config(parse_config_text(kFlowText));
  const auto twice = serialize_config(parse_config_text(once));
  CHECK(once == twice);

  // and for a suite-style config
  const std::string suite_text =
      "[suite]\nshapes = sphere:1/n3; ellipsoid:1,1.5/n4\nk_list = 1,2\nrungs = 24,48\n";
  const auto s1 = serialize_config(parse_config_text(suite_text));
  const auto s2 = serialize_config(parse_config_text(s1));
  CHECK(s1 == s2);
}

TEST_CASE("override_key replaces, inserts and appends") {
  const std::string text = "[grid]\nN = 64\n";
  const auto a = parse_config_text(override_key(text, "grid.N", "256"));
  CHECK(a.grid.N == 256);
  const auto b = parse_config_text(override_key(text, "grid.order", "2"));
  CHECK(b.grid.p == 2);
  CHECK(b.grid.N == 64);
  const auto c = parse_config_text(override_key(text, "output.dir", "elsewhere"));
  CHECK(c.out_dir == "elsewhere");
  CHECK_THROWS_AS(override_key(text, "grid.bogus", "1"), ConfigError);
  CHECK_THROWS_AS(override_key(text, "nodots", "1"), ConfigError);
}

TEST_CASE("comments and blank lines are ignored") {
  const auto cfg = parse_config_text(
      "# leading comment\n\n[grid]\n  N = 48   # trailing\n\n");
  CHECK(cfg.grid.N == 48);
}
