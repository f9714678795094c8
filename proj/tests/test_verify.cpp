#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "icflow/errors.hpp"
#include "icflow/verify.hpp"

using namespace icflow;

namespace {

SuiteConfig small_suite() {
  SuiteConfig cfg;
  cfg.shapes = {
      ShapeSpec::sphere(1.0, 3),
      ShapeSpec::ellipsoid(1.0, 1.4, 3),
      ShapeSpec::perturbed_sphere(1.0, {{2, 0.05}}, 4),
  };
  cfg.rungs = {24, 48, 96};
  return cfg;
}

}  // namespace

TEST_CASE("measured order: clean power-law data") {
  const std::vector<double> Ns = {32, 64, 128};
  std::vector<double> res;
  for (double N : Ns) res.push_back(7.3 / (N * N * N * N));
  CHECK(measured_order(Ns, res, 1e-14) == doctest::Approx(4.0).epsilon(1e-6));
  // at the floor: treated as exact
  CHECK(measured_order(Ns, {1e-16, 1e-16, 1e-16}, 1e-12) > 50.0);
}

TEST_CASE("identity suite passes on the small fixture set") {
  const auto vs = run_identity_suite(small_suite());
  REQUIRE(vs.size() > 0);
  for (const auto& v : vs) {
    CAPTURE(v.id);
    CAPTURE(v.detail);
    CHECK(v.status != Verdict::Status::Fail);
  }
}

TEST_CASE("inequality suite passes and spheres report equality") {
  const auto vs = run_inequality_suite(small_suite());
  REQUIRE(vs.size() > 0);
  int sphere_checks = 0;
  for (const auto& v : vs) {
    CAPTURE(v.id);
    CAPTURE(v.detail);
    CHECK(v.status != Verdict::Status::Fail);
    // sphere rows are judged as equality cases: |margin| <= tol, not just >=
    if (v.id.find("sphere") != std::string::npos &&
        v.status == Verdict::Status::Pass)
      ++sphere_checks;
  }
  CHECK(sphere_checks > 0);
}

TEST_CASE("flow suite passes on a single perturbed sphere") {
  SuiteConfig cfg;
  cfg.shapes = {ShapeSpec::perturbed_sphere(1.0, {{2, 0.1}}, 3)};
  cfg.ks = {1};
  cfg.rungs = {24, 48, 96};
  const auto vs = run_flow_suite(cfg);
  REQUIRE(vs.size() > 0);
  for (const auto& v : vs) {
    CAPTURE(v.id);
    CAPTURE(v.detail);
    CHECK(v.status != Verdict::Status::Fail);
  }
}

TEST_CASE("digest is stable across repeated runs") {
  SuiteConfig cfg;
  cfg.shapes = {ShapeSpec::ellipsoid(1.0, 1.3, 3)};
  cfg.rungs = {24, 48};
  const auto a = verdicts_digest(run_identity_suite(cfg));
  const auto b = verdicts_digest(run_identity_suite(cfg));
  CHECK(a == b);
  CHECK(a.size() > 0);
}

TEST_CASE("fixture files round-trip and detect tampering") {
  std::vector<FixtureRecord> recs(2);
  recs[0].shape = "sphere:1/n3";
  recs[0].n = 3;
  recs[0].k = 1;
  recs[0].I_H = {12.566370614359172, 12.566370614359172, 12.566370614359172};
  recs[0].I_r2Hk = 12.566370614359172;
  recs[0].vol = 4.188790204786391;
  recs[1].shape = "ellipsoid:1,1.5/n4";
  recs[1].n = 4;
  recs[1].k = 2;
  recs[1].I_H = {1, 2, 3, 4};
  recs[1].I_r2Hk = 0.5;
  recs[1].vol = 0.25;

  const std::string path = "fixture_roundtrip_tmp.txt";
  save_fixtures(path, recs);
  const auto back = load_fixtures(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].shape == recs[0].shape);
  CHECK(back[1].n == 4);
  CHECK(back[1].k == 2);
  for (size_t j = 0; j < 4; ++j) CHECK(back[1].I_H[j] == recs[1].I_H[j]);
  CHECK(back[0].vol == recs[0].vol);

  // flip one digit: checksum must catch it
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  const auto pos = text.find('4');
  text[pos] = '5';
  std::ofstream out(path);
  out << text;
  out.close();
  CHECK_THROWS_AS(load_fixtures(path), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("shape strings parse back to equivalent shapes") {
  const std::vector<ShapeSpec> shapes = {
      ShapeSpec::sphere(0.5, 5),
      ShapeSpec::ellipsoid(1.0, 2.5, 3),
      ShapeSpec::perturbed_sphere(1.0, {{2, 0.1}, {3, 0.05}}, 4),
  };
  for (const auto& sp : shapes) {
    const auto back = shape_from_string(sp.describe());
    CHECK(back.describe() == sp.describe());
    CHECK(back.n == sp.n);
    for (double phi = 0.2; phi < 3.0; phi += 0.43)
      CHECK(back.rho(phi) == doctest::Approx(sp.rho(phi)).epsilon(1e-12));
  }
}

TEST_CASE("suite config validation") {
  SuiteConfig cfg;
  cfg.shapes = {ShapeSpec::sphere(1.0, 3)};
  cfg.rungs = {48, 24};  // not increasing
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.rungs = {24, 48};
  CHECK_NOTHROW(cfg.validate());
  cfg.shapes.clear();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("default suite covers the advertised dimensions") {
  const auto cfg = SuiteConfig::default_suite();
  bool n3 = false, n4 = false, n5 = false;
  for (const auto& sp : cfg.shapes) {
    if (sp.n == 3) n3 = true;
    if (sp.n == 4) n4 = true;
    if (sp.n == 5) n5 = true;
  }
  CHECK(n3);
  CHECK(n4);
  CHECK(n5);
  CHECK_NOTHROW(cfg.validate());
}
