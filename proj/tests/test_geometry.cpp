#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "icflow/constants.hpp"
#include "icflow/errors.hpp"
#include "icflow/sample.hpp"
#include "icflow/shapes.hpp"

using namespace icflow;

TEST_CASE("shape validation") {
  CHECK_THROWS_AS(ShapeSpec::sphere(-1.0, 3), NonPositiveRadius);
  CHECK_THROWS_AS(ShapeSpec::sphere(0.0, 3), NonPositiveRadius);
  CHECK_THROWS_AS(ShapeSpec::sphere(1.0, 2), DimensionMismatch);
  CHECK_THROWS_AS(ShapeSpec::sphere(1.0, 9), DimensionMismatch);
  CHECK_THROWS_AS(ShapeSpec::ellipsoid(0.0, 1.0, 3), NonPositiveRadius);
  // perturbation large enough to make rho <= 0 somewhere
  CHECK_THROWS(ShapeSpec::perturbed_sphere(1.0, {{2, 1.1}}, 3));
  CHECK_THROWS(ShapeSpec::perturbed_sphere(1.0, {{2, 0.6}, {3, 0.5}}, 3));
  CHECK_NOTHROW(ShapeSpec::perturbed_sphere(1.0, {{2, 0.15}}, 3));
}

TEST_CASE("ellipsoid radial profile satisfies the implicit equation") {
  const double a = 1.3, b = 0.8;
  const auto sp = ShapeSpec::ellipsoid(a, b, 4);
  for (double phi = 0.05; phi < kPi; phi += 0.173) {
    const double rho = sp.rho(phi);
    const double z = rho * std::cos(phi);  // symmetry axis, semi-axis a
    const double x = rho * std::sin(phi);
    CHECK(z * z / (a * a) + x * x / (b * b) == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("analytic derivatives match finite differences") {
  const std::vector<ShapeSpec> shapes = {
      ShapeSpec::ellipsoid(1.0, 2.2, 3),
      ShapeSpec::perturbed_sphere(1.0, {{2, 0.1}, {5, 0.01}}, 5),
  };
  const double h = 1e-5;
  for (const auto& sp : shapes) {
    for (double phi = 0.3; phi < 3.0; phi += 0.37) {
      double r0, d1, d2, rp, rm, t1, t2;
      sp.eval(phi, r0, d1, d2);
      sp.eval(phi + h, rp, t1, t2);
      sp.eval(phi - h, rm, t1, t2);
      CHECK(d1 == doctest::Approx((rp - rm) / (2 * h)).epsilon(1e-8));
      CHECK(d2 == doctest::Approx((rp - 2 * r0 + rm) / (h * h)).epsilon(1e-5));
    }
  }
}

TEST_CASE("tabulated profile reproduces its source shape") {
  const auto src = ShapeSpec::ellipsoid(1.0, 1.5, 3);
  std::vector<std::pair<double, double>> samples;
  const int m = 400;
  for (int i = 0; i <= m; ++i) {
    const double phi = kPi * i / m;
    samples.emplace_back(phi, src.rho(phi));
  }
  const auto tab = ShapeSpec::tabulated(samples, 3);
  for (double phi = 0.1; phi < 3.1; phi += 0.21)
    CHECK(tab.rho(phi) == doctest::Approx(src.rho(phi)).epsilon(1e-7));
}

TEST_CASE("axisymmetric grid: midpoints, no poles") {
  GridSpec g;
  g.N = 32;
  const auto s = sample_shape(ShapeSpec::sphere(1.0, 3), g);
  REQUIRE(s.phi.size() == 32);
  const double h = kPi / 32;
  CHECK(s.h_phi() == doctest::Approx(h));
  for (int q = 0; q < 32; ++q) {
    CHECK(s.phi[q] == doctest::Approx((q + 0.5) * h));
    CHECK(s.phi[q] > 0.0);
    CHECK(s.phi[q] < kPi);
  }
}

TEST_CASE("grid validation") {
  GridSpec g;
  g.N = 8;  // too coarse
  CHECK_THROWS_AS(g.validate(3), ConfigError);
  g.N = 64;
  g.p = 3;
  CHECK_THROWS_AS(g.validate(3), ConfigError);
  g.p = 4;
  CHECK_NOTHROW(g.validate(3));
  g.mode = GridSpec::Mode::Full2D;
  CHECK_THROWS_AS(g.validate(4), DimensionMismatch);  // full grid is n = 3 only
  g.n_theta = 7;
  CHECK_THROWS_AS(g.validate(3), ConfigError);
}

TEST_CASE("finite differences converge at the requested order") {
  // f(phi) = rho of a perturbed sphere: even at both poles
  const auto sp = ShapeSpec::perturbed_sphere(1.0, {{2, 0.1}, {3, 0.05}}, 3);
  for (int p : {2, 4}) {
    std::vector<double> errs, hs;
    for (int N : {64, 128, 256}) {
      GridSpec g;
      g.N = N;
      g.p = p;
      auto s = sample_shape(sp, g);
      const auto exact_d1 = s.rho_d1, exact_d2 = s.rho_d2;
      refresh_derivatives(s);
      double e = 0;
      for (int q = 0; q < N; ++q) {
        e = std::max(e, std::fabs(s.rho_d1[q] - exact_d1[q]));
        e = std::max(e, std::fabs(s.rho_d2[q] - exact_d2[q]));
      }
      errs.push_back(e);
      hs.push_back(kPi / N);
    }
    for (size_t i = 1; i < errs.size(); ++i) {
      const double order = std::log(errs[i - 1] / errs[i]) / std::log(hs[i - 1] / hs[i]);
      CHECK(order >= p - 0.4);
    }
  }
}

TEST_CASE("fd parity ghosting: odd fields keep odd symmetry") {
  // d rho / d phi of an even profile is odd at both poles; its fd derivative
  // (even) should match rho_d2
  const auto sp = ShapeSpec::perturbed_sphere(1.0, {{2, 0.1}}, 3);
  GridSpec g;
  g.N = 256;
  const auto s = sample_shape(sp, g);
  const auto d = fd_d1(s.rho_d1, s.h_phi(), 4, Parity::Odd, Parity::Odd);
  for (int q = 0; q < g.N; ++q)
    CHECK(d[q] == doctest::Approx(s.rho_d2[q]).epsilon(1e-6));
}

TEST_CASE("Gauss-Legendre nodes integrate polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(8, x, w);
  REQUIRE(x.size() == 8);
  for (int deg = 0; deg <= 15; ++deg) {
    double s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], deg);
    const double exact = (deg % 2) ? 0.0 : 2.0 / (deg + 1);
    CHECK(s == doctest::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("full grid sampling covers n = 3") {
  GridSpec g;
  g.mode = GridSpec::Mode::Full2D;
  g.n_phi = 24;
  g.n_theta = 16;
  const auto s = sample_shape(ShapeSpec::ellipsoid(1.0, 1.4, 3), g);
  CHECK(s.node_count() == 24 * 16);
  CHECK(s.glw.size() == 24);
  for (int q = 0; q < 24; ++q) CHECK(s.phi[q] < s.phi[std::min(q + 1, 23)] + 1e-15);
}

TEST_CASE("describe round-trips the parameters") {
  const auto sp = ShapeSpec::perturbed_sphere(1.5, {{2, 0.1}, {4, 0.02}}, 4);
  const auto d = sp.describe();
  CHECK(d.find("/n4") != std::string::npos);
  CHECK(d.find("perturbed") == 0);
}
