#include "icflow/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "icflow/errors.hpp"

namespace icflow {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y,
                         double slope_left, double slope_right)
    : x_(std::move(x)), y_(std::move(y)) {
  const size_t m = x_.size();
  if (m < 4) throw ConfigError("tabulated profile needs at least 4 samples");
  for (size_t i = 1; i < m; ++i)
    if (x_[i] <= x_[i - 1]) throw ConfigError("tabulated profile abscissae must increase");

  // Clamped spline: solve the tridiagonal system for second derivatives.
  std::vector<double> hh(m - 1), alpha(m), l(m), mu(m), z(m), c(m), b(m - 1), d(m - 1);
  for (size_t i = 0; i + 1 < m; ++i) hh[i] = x_[i + 1] - x_[i];
  alpha[0] = 3.0 * ((y_[1] - y_[0]) / hh[0] - slope_left);
  alpha[m - 1] = 3.0 * (slope_right - (y_[m - 1] - y_[m - 2]) / hh[m - 2]);
  for (size_t i = 1; i + 1 < m; ++i)
    alpha[i] = 3.0 * ((y_[i + 1] - y_[i]) / hh[i] - (y_[i] - y_[i - 1]) / hh[i - 1]);
  l[0] = 2.0 * hh[0];
  mu[0] = 0.5;
  z[0] = alpha[0] / l[0];
  for (size_t i = 1; i + 1 < m; ++i) {
    l[i] = 2.0 * (x_[i + 1] - x_[i - 1]) - hh[i - 1] * mu[i - 1];
    mu[i] = hh[i] / l[i];
    z[i] = (alpha[i] - hh[i - 1] * z[i - 1]) / l[i];
  }
  l[m - 1] = hh[m - 2] * (2.0 - mu[m - 2]);
  z[m - 1] = (alpha[m - 1] - hh[m - 2] * z[m - 2]) / l[m - 1];
  c[m - 1] = z[m - 1];
  for (size_t j = m - 1; j-- > 0;) {
    c[j] = z[j] - mu[j] * c[j + 1];
    b[j] = (y_[j + 1] - y_[j]) / hh[j] - hh[j] * (c[j + 1] + 2.0 * c[j]) / 3.0;
    d[j] = (c[j + 1] - c[j]) / (3.0 * hh[j]);
  }
  b_ = std::move(b);
  c_.assign(c.begin(), c.end() - 1);
  d_ = std::move(d);
}

void CubicSpline::eval(double x, double& f, double& d1, double& d2) const {
  // clamp to the table range; pole symmetry handled by the caller's ghosting
  const size_t m = x_.size();
  size_t j =
      static_cast<size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
  j = j == 0 ? 0 : std::min(j - 1, m - 2);
  const double t = x - x_[j];
  f = y_[j] + t * (b_[j] + t * (c_[j] + t * d_[j]));
  d1 = b_[j] + t * (2.0 * c_[j] + 3.0 * t * d_[j]);
  d2 = 2.0 * c_[j] + 6.0 * t * d_[j];
}

ShapeSpec ShapeSpec::sphere(double R, int n) {
  ShapeSpec s;
  s.kind = Kind::Sphere;
  s.radius = R;
  s.n = n;
  s.validate();
  return s;
}

ShapeSpec ShapeSpec::ellipsoid(double a, double b, int n) {
  ShapeSpec s;
  s.kind = Kind::Ellipsoid;
  s.axis_a = a;
  s.axis_b = b;
  s.n = n;
  s.validate();
  return s;
}

ShapeSpec ShapeSpec::perturbed_sphere(double R, std::vector<std::pair<int, double>> modes,
                                      int n) {
  ShapeSpec s;
  s.kind = Kind::PerturbedSphere;
  s.radius = R;
  s.modes = std::move(modes);
  s.n = n;
  s.validate();
  return s;
}

ShapeSpec ShapeSpec::tabulated(const std::vector<std::pair<double, double>>& samples, int n) {
  ShapeSpec s;
  s.kind = Kind::Tabulated;
  s.n = n;
  std::vector<double> x, y;
  for (auto& [phi, rho] : samples) {
    x.push_back(phi);
    y.push_back(rho);
  }
  // zero end slopes: even symmetry of rho about both poles
  s.profile = CubicSpline(std::move(x), std::move(y), 0.0, 0.0);
  s.validate();
  return s;
}

void ShapeSpec::validate() const {
  if (n < 3 || n > 8) throw DimensionMismatch("ambient dimension must be in 3..8");
  switch (kind) {
    case Kind::Sphere:
      if (radius <= 0) throw NonPositiveRadius("sphere radius must be positive");
      break;
    case Kind::Ellipsoid:
      if (axis_a <= 0 || axis_b <= 0)
        throw NonPositiveRadius("ellipsoid semi-axes must be positive");
      break;
    case Kind::PerturbedSphere: {
      if (radius <= 0) throw NonPositiveRadius("base radius must be positive");
      double budget = 0;
      for (auto& [m, eps] : modes) {
        if (m < 1) throw ConfigError("perturbation mode must be >= 1");
        budget += std::fabs(eps);
      }
      // rho stays positive; convexity is a runtime question, not a shape one
      if (budget >= radius)
        throw NonPositiveRadius("perturbation amplitudes too large: sum |eps_m| >= R");
      break;
    }
    case Kind::Tabulated:
      if (profile.empty()) throw ConfigError("tabulated shape without a profile");
      for (int q = 0; q <= 64; ++q) {
        double f, d1, d2;
        profile.eval(q * 3.14159265358979323846 / 64.0, f, d1, d2);
        if (f <= 0) throw NonPositiveRadius("tabulated profile is not positive");
      }
      break;
  }
}

void ShapeSpec::eval(double phi, double& r, double& r1, double& r2) const {
  switch (kind) {
    case Kind::Sphere:
      r = radius;
      r1 = 0;
      r2 = 0;
      return;
    case Kind::Ellipsoid: {
      // rho = a b / sqrt(b^2 cos^2 + a^2 sin^2) = w^{-1/2}, w in 1/length^2
      const double ia2 = 1.0 / (axis_a * axis_a), ib2 = 1.0 / (axis_b * axis_b);
      const double c = std::cos(phi), s = std::sin(phi);
      const double w = c * c * ia2 + s * s * ib2;
      const double w1 = std::sin(2.0 * phi) * (ib2 - ia2);
      const double w2 = 2.0 * std::cos(2.0 * phi) * (ib2 - ia2);
      const double wm = std::pow(w, -0.5);
      r = wm;
      r1 = -0.5 * wm / w * w1;
      r2 = 0.75 * wm / (w * w) * w1 * w1 - 0.5 * wm / w * w2;
      return;
    }
    case Kind::PerturbedSphere: {
      r = radius;
      r1 = 0;
      r2 = 0;
      for (auto& [m, eps] : modes) {
        const double md = static_cast<double>(m);
        r += eps * std::cos(md * phi);
        r1 -= eps * md * std::sin(md * phi);
        r2 -= eps * md * md * std::cos(md * phi);
      }
      return;
    }
    case Kind::Tabulated:
      profile.eval(phi, r, r1, r2);
      return;
  }
}

double ShapeSpec::rho(double phi) const {
  double r = 0, r1, r2;
  eval(phi, r, r1, r2);
  return r;
}

std::string ShapeSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::Sphere:
      os << "sphere:" << radius;
      break;
    case Kind::Ellipsoid:
      os << "ellipsoid:" << axis_a << "," << axis_b;
      break;
    case Kind::PerturbedSphere:
      os << "perturbed:" << radius;
      for (auto& [m, eps] : modes) os << "," << m << ":" << eps;
      break;
    case Kind::Tabulated:
      os << "tabulated";
      break;
  }
  os << "/n" << n;
  return os.str();
}

}  // namespace icflow
