#include "icflow/frame.hpp"

#include <algorithm>
#include <cmath>

#include "icflow/constants.hpp"
#include "icflow/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace icflow {

std::vector<double> sigma_all(const double* kappa, int m) {
  // coefficients of prod_i (1 + kappa_i x), built up one factor at a time
  std::vector<double> e(static_cast<size_t>(m) + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < m; ++i)
    for (int j = std::min(i + 1, m); j >= 1; --j) e[j] += kappa[i] * e[j - 1];
  return e;
}

std::vector<SmallMat> newton_tensors(const SmallMat& S, const std::vector<double>& sigma) {
  const int d = S.dim();
  std::vector<SmallMat> T;
  T.reserve(static_cast<size_t>(d));
  T.push_back(SmallMat::identity(d));
  for (int k = 1; k <= d - 1; ++k) {
    SmallMat t = sigma[static_cast<size_t>(k)] * SmallMat::identity(d);
    t -= T.back() * S;
    T.push_back(t);
  }
  return T;
}

PointFrame point_frame(const SurfaceSample& s, int node) {
  PointFrame f;
  f.n = s.n;
  const int d = s.n - 1;
  f.g = SmallMat(d);
  f.h = SmallMat(d);
  f.S = SmallMat(d);

  const double rho = s.rho[node];
  f.rho = rho;
  f.r2 = rho * rho;

  if (s.grid.mode == GridSpec::Mode::Axisym1D) {
    const double phi = s.phi[node];
    const double r1 = s.rho_d1[node], r2d = s.rho_d2[node];
    const double v2 = rho * rho + r1 * r1;
    const double v = std::sqrt(v2);
    f.v = v;
    f.u = rho * rho / v;

    // sigma-orthonormal basis: e_0 = d/dphi, e_a = parallel directions
    const double g_mer = v2, g_par = rho * rho;
    const double h_mer = (rho * rho + 2.0 * r1 * r1 - rho * r2d) / v;
    const double h_par = (rho * rho - rho * r1 * (std::cos(phi) / std::sin(phi))) / v;
    for (int i = 0; i < d; ++i) {
      f.g(i, i) = i == 0 ? g_mer : g_par;
      f.h(i, i) = i == 0 ? h_mer : h_par;
      f.S(i, i) = f.h(i, i) / f.g(i, i);
    }
    if (!(g_mer > 0.0) || !(g_par > 0.0))
      throw SingularMetric("induced metric not positive definite");

    for (int i = 0; i < d; ++i) f.kappa[static_cast<size_t>(i)] = f.S(i, i);
    f.grad_r2[0] = 2.0 * rho * r1;
    f.area_weight = std::pow(rho, d - 1) * v;
  } else {
    // n = 3 lat-long grid
    const int nt = s.grid.n_theta;
    const double phi = s.phi[node / nt];
    const double sp = std::sin(phi), cp = std::cos(phi);
    const double rp = s.rho_d1[node], rt = s.rho_dt[node] / sp;
    const double rpp = s.rho_d2[node];
    const double rpt = (s.rho_d1t[node] - (cp / sp) * s.rho_dt[node]) / sp;
    const double rtt = s.rho_dtt[node] / (sp * sp) + (cp / sp) * rp;

    const double grad2 = rp * rp + rt * rt;
    const double v2 = rho * rho + grad2;
    const double v = std::sqrt(v2);
    f.v = v;
    f.u = rho * rho / v;

    const double ri[2] = {rp, rt};
    const double hess[2][2] = {{rpp, rpt}, {rpt, rtt}};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        f.g(i, j) = rho * rho * (i == j ? 1.0 : 0.0) + ri[i] * ri[j];
        f.h(i, j) = (rho * rho * (i == j ? 1.0 : 0.0) + 2.0 * ri[i] * ri[j] -
                     rho * hess[i][j]) / v;
      }
    const double detg = f.g(0, 0) * f.g(1, 1) - f.g(0, 1) * f.g(1, 0);
    if (!(detg > 0.0) || !(f.g(0, 0) > 0.0))
      throw SingularMetric("induced metric not positive definite");
    const double ig[2][2] = {{f.g(1, 1) / detg, -f.g(0, 1) / detg},
                             {-f.g(1, 0) / detg, f.g(0, 0) / detg}};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        f.S(i, j) = ig[i][0] * f.h(0, j) + ig[i][1] * f.h(1, j);

    // closed-form eigenvalues of the 2x2 shape operator
    const double tr = f.S(0, 0) + f.S(1, 1);
    const double dt = f.S(0, 0) * f.S(1, 1) - f.S(0, 1) * f.S(1, 0);
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * dt));
    f.kappa[0] = 0.5 * (tr - disc);
    f.kappa[1] = 0.5 * (tr + disc);

    f.grad_r2[0] = 2.0 * rho * rp;
    f.grad_r2[1] = 2.0 * rho * rt;
    f.area_weight = rho * v;  // rho^{n-2} v with n = 3
  }

  std::sort(f.kappa.begin(), f.kappa.begin() + d);
  return f;
}

CurvatureData curvature_data(const PointFrame& f) {
  CurvatureData c;
  c.n = f.n;
  const int d = f.dim();
  c.sigma = sigma_all(f.kappa.data(), d);
  c.H.resize(c.sigma.size());
  for (int j = 0; j <= d; ++j)
    c.H[static_cast<size_t>(j)] = c.sigma[static_cast<size_t>(j)] / binom(d, j);
  c.T = newton_tensors(f.S, c.sigma);
  return c;
}

static FrameField frame_field_impl(const SurfaceSample& s, bool parallel) {
  const int m = s.node_count();
  FrameField ff;
  ff.nodes.resize(static_cast<size_t>(m));
  bool singular = false;  // exceptions may not cross the parallel region
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (int q = 0; q < m; ++q) {
    try {
      ff.nodes[static_cast<size_t>(q)].frame = point_frame(s, q);
      ff.nodes[static_cast<size_t>(q)].curv =
          curvature_data(ff.nodes[static_cast<size_t>(q)].frame);
    } catch (const SingularMetric&) {
#ifdef _OPENMP
#pragma omp atomic write
#endif
      singular = true;
    }
  }
  if (singular) throw SingularMetric("induced metric not positive definite");
  return ff;
}

FrameField compute_frame_field(const SurfaceSample& s) { return frame_field_impl(s, true); }

FrameField compute_frame_field_serial(const SurfaceSample& s) {
  return frame_field_impl(s, false);
}

}  // namespace icflow
