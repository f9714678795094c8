#include "icflow/sample.hpp"

#include <cmath>

#include "icflow/constants.hpp"
#include "icflow/errors.hpp"

namespace icflow {

void GridSpec::validate(int ambient_n) const {
  if (p != 2 && p != 4) throw ConfigError("differentiation order must be 2 or 4");
  if (mode == Mode::Axisym1D) {
    if (N < 16) throw ConfigError("axisym grid needs N >= 16");
  } else {
    if (ambient_n != 3) throw DimensionMismatch("full 2-D grid is defined for n = 3 only");
    if (n_phi < 8) throw ConfigError("full 2-D grid needs n_phi >= 8");
    if (n_theta < 8 || n_theta % 2 != 0)
      throw ConfigError("full 2-D grid needs even n_theta >= 8");
  }
}

double SurfaceSample::h_phi() const {
  if (grid.mode != GridSpec::Mode::Axisym1D)
    throw UnsupportedMode("h_phi is defined for the axisym grid only");
  return kPi / grid.N;
}

void SurfaceSample::validate() const {
  const int m = node_count();
  if (static_cast<int>(rho.size()) != m || static_cast<int>(rho_d1.size()) != m ||
      static_cast<int>(rho_d2.size()) != m)
    throw DimensionMismatch("sample arrays inconsistent with grid");
  for (int q = 0; q < m; ++q)
    if (!(rho[q] > 0.0)) throw NonPositiveRadius("rho <= 0 at a grid node");
}

void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
  x.assign(m, 0.0);
  w.assign(m, 0.0);
  const int half = (m + 1) / 2;
  for (int i = 1; i <= half; ++i) {
    double z = std::cos(kPi * (i - 0.25) / (m + 0.5));
    double pp = 0, z1;
    do {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= m; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = m * (z * p1 - p2) / (z * z - 1.0);
      z1 = z;
      z = z1 - p1 / pp;
    } while (std::fabs(z - z1) > 1e-15);
    x[i - 1] = -z;
    x[m - i] = z;
    w[i - 1] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[m - i] = w[i - 1];
  }
}

namespace {

// ghosted fetch with stated parities at phi=0 and phi=pi (midpoint grid)
inline double ghosted(const std::vector<double>& f, int i, int N, Parity a, Parity b) {
  if (i < 0) {
    const double v = f[static_cast<size_t>(-1 - i)];
    return a == Parity::Even ? v : -v;
  }
  if (i >= N) {
    const double v = f[static_cast<size_t>(2 * N - 1 - i)];
    return b == Parity::Even ? v : -v;
  }
  return f[static_cast<size_t>(i)];
}

}  // namespace

std::vector<double> fd_d1(const std::vector<double>& f, double h, int p,
                          Parity at0, Parity atPi) {
  const int N = static_cast<int>(f.size());
  std::vector<double> out(f.size());
  auto g = [&](int i) { return ghosted(f, i, N, at0, atPi); };
  if (p == 2) {
    for (int i = 0; i < N; ++i) out[i] = (g(i + 1) - g(i - 1)) / (2.0 * h);
  } else {
    for (int i = 0; i < N; ++i)
      out[i] = (-g(i + 2) + 8.0 * g(i + 1) - 8.0 * g(i - 1) + g(i - 2)) / (12.0 * h);
  }
  return out;
}

std::vector<double> fd_d2(const std::vector<double>& f, double h, int p,
                          Parity at0, Parity atPi) {
  const int N = static_cast<int>(f.size());
  std::vector<double> out(f.size());
  auto g = [&](int i) { return ghosted(f, i, N, at0, atPi); };
  if (p == 2) {
    for (int i = 0; i < N; ++i) out[i] = (g(i + 1) - 2.0 * g(i) + g(i - 1)) / (h * h);
  } else {
    for (int i = 0; i < N; ++i)
      out[i] = (-g(i + 2) + 16.0 * g(i + 1) - 30.0 * g(i) + 16.0 * g(i - 1) - g(i - 2)) /
               (12.0 * h * h);
  }
  return out;
}

void refresh_derivatives(SurfaceSample& s) {
  if (s.grid.mode != GridSpec::Mode::Axisym1D)
    throw UnsupportedMode("derivative refresh is available on the axisym grid only");
  const double h = s.h_phi();
  s.rho_d1 = fd_d1(s.rho, h, s.grid.p, Parity::Even, Parity::Even);
  s.rho_d2 = fd_d2(s.rho, h, s.grid.p, Parity::Even, Parity::Even);
}

SurfaceSample sample_shape(const ShapeSpec& spec, const GridSpec& grid) {
  spec.validate();
  grid.validate(spec.n);

  SurfaceSample s;
  s.grid = grid;
  s.n = spec.n;

  if (grid.mode == GridSpec::Mode::Axisym1D) {
    const int N = grid.N;
    const double h = kPi / N;
    s.phi.resize(N);
    s.rho.resize(N);
    s.rho_d1.resize(N);
    s.rho_d2.resize(N);
    for (int q = 0; q < N; ++q) {
      s.phi[q] = (q + 0.5) * h;
      spec.eval(s.phi[q], s.rho[q], s.rho_d1[q], s.rho_d2[q]);
    }
  } else {
    const int np = grid.n_phi, nt = grid.n_theta;
    std::vector<double> x, w;
    gauss_legendre(np, x, w);
    s.phi.resize(np);
    s.glw = w;
    const int m = np * nt;
    s.rho.resize(m);
    s.rho_d1.resize(m);
    s.rho_d2.resize(m);
    s.rho_dt.assign(m, 0.0);
    s.rho_d1t.assign(m, 0.0);
    s.rho_dtt.assign(m, 0.0);
    for (int i = 0; i < np; ++i) {
      // ascending phi: phi = acos(x) with x descending
      s.phi[i] = std::acos(x[np - 1 - i]);
      double r, r1, r2;
      spec.eval(s.phi[i], r, r1, r2);
      for (int j = 0; j < nt; ++j) {
        const int q = i * nt + j;
        s.rho[q] = r;
        s.rho_d1[q] = r1;
        s.rho_d2[q] = r2;
      }
    }
    // reorder GL weights to match ascending phi
    for (int i = 0; i < np; ++i) s.glw[i] = w[np - 1 - i];
  }

  s.validate();
  return s;
}

}  // namespace icflow
