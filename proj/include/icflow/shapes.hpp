#pragma once

#include <string>
#include <utility>
#include <vector>

namespace icflow {

// Clamped cubic spline on [x_front, x_back]; used for tabulated radial
// profiles, with zero end slopes for even pole symmetry.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y,
              double slope_left, double slope_right);
  void eval(double x, double& f, double& d1, double& d2) const;
  bool empty() const { return x_.empty(); }

 private:
  std::vector<double> x_, y_, b_, c_, d_;  // y + bt + ct^2 + dt^3 per interval
};

// Analytic description of an initial star-shaped hypersurface. All variants
// are axisymmetric radial graphs rho(phi) over the colatitude phi in [0, pi].
struct ShapeSpec {
  enum class Kind { Sphere, Ellipsoid, PerturbedSphere, Tabulated };

  Kind kind = Kind::Sphere;
  int n = 3;              // ambient dimension, >= 3
  double radius = 1.0;    // Sphere / PerturbedSphere base radius
  double axis_a = 1.0;    // Ellipsoid: semi-axis along the symmetry axis
  double axis_b = 1.0;    // Ellipsoid: transverse semi-axis
  std::vector<std::pair<int, double>> modes;  // PerturbedSphere (m, eps_m)
  CubicSpline profile;    // Tabulated

  static ShapeSpec sphere(double R, int n);
  static ShapeSpec ellipsoid(double a, double b, int n);
  static ShapeSpec perturbed_sphere(double R, std::vector<std::pair<int, double>> modes, int n);
  static ShapeSpec tabulated(const std::vector<std::pair<double, double>>& samples, int n);

  // rho(phi) with first and second derivatives, analytic except Tabulated.
  void eval(double phi, double& rho, double& rho_d1, double& rho_d2) const;
  double rho(double phi) const;

  // Throws NonPositiveRadius / DimensionMismatch / ConfigError on invalid
  // parameters; the factories call this.
  void validate() const;

  std::string describe() const;
};

}  // namespace icflow
