#include "icflow/integrals.hpp"

#include <cmath>
#include <limits>

#include "icflow/constants.hpp"
#include "icflow/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace icflow {

namespace {

// b = g^{-1} a for the tiny frame metric
void ginv_apply(const SmallMat& g, const double* a, double* b) {
  const int d = g.dim();
  SmallMat m = g;
  std::array<double, kMaxDim> x{};
  for (int i = 0; i < d; ++i) x[static_cast<size_t>(i)] = a[i];
  for (int c = 0; c < d; ++c) {
    int piv = c;
    for (int r = c + 1; r < d; ++r)
      if (std::fabs(m(r, c)) > std::fabs(m(piv, c))) piv = r;
    if (m(piv, c) == 0.0) throw SingularMetric("singular metric in gradient raise");
    if (piv != c) {
      for (int j = 0; j < d; ++j) std::swap(m(piv, j), m(c, j));
      std::swap(x[static_cast<size_t>(piv)], x[static_cast<size_t>(c)]);
    }
    for (int r = c + 1; r < d; ++r) {
      const double f = m(r, c) / m(c, c);
      for (int j = c; j < d; ++j) m(r, j) -= f * m(c, j);
      x[static_cast<size_t>(r)] -= f * x[static_cast<size_t>(c)];
    }
  }
  for (int i = d - 1; i >= 0; --i) {
    double s = x[static_cast<size_t>(i)];
    for (int j = i + 1; j < d; ++j) s -= m(i, j) * b[j];
    b[i] = s / m(i, i);
  }
}

struct GradForms {
  double qf_T = 0;     // T_{k-1}(grad r^2, grad r^2)
  double qf_TS = 0;    // T_{k-1}(S grad r^2, grad r^2)
  double grad2 = 0;    // |grad r^2|^2 (surface gradient)
};

GradForms grad_forms(const NodeData& nd, int k) {
  const int d = nd.frame.dim();
  const SmallMat& T = nd.curv.T[static_cast<size_t>(k - 1)];
  const double* a = nd.frame.grad_r2.data();
  std::array<double, kMaxDim> b{};
  ginv_apply(nd.frame.g, a, b.data());
  const auto Tb = T.apply({b.data(), static_cast<size_t>(d)});
  GradForms out;
  for (int i = 0; i < d; ++i) {
    out.qf_T += a[i] * Tb[static_cast<size_t>(i)];
    out.grad2 += a[i] * b[static_cast<size_t>(i)];
    double Sa = 0;  // (S^T a)_i = h_i^l a_l
    for (int l = 0; l < d; ++l) Sa += nd.frame.S(l, i) * a[l];
    out.qf_TS += Tb[static_cast<size_t>(i)] * Sa;
  }
  return out;
}

}  // namespace

double surface_grad_r2_sq(const NodeData& nd) {
  const int d = nd.frame.dim();
  const double* a = nd.frame.grad_r2.data();
  std::array<double, kMaxDim> b{};
  ginv_apply(nd.frame.g, a, b.data());
  double s = 0;
  for (int i = 0; i < d; ++i) s += a[i] * b[static_cast<size_t>(i)];
  return s;
}

namespace {

// Product-quadrature weights for int_0^pi F(phi) sin^m(phi) dphi on the
// uniform midpoint grid, odd m. Plain midpoint is only O(h^2) there: the
// periodic extension of sin^m has an |sin|-type kink at the poles. Replacing
// sin^m by its truncated cosine series W_J restores spectral accuracy for
// smooth even-symmetric F, because midpoint integrates F * W_J exactly up to
// aliasing. Coefficients from the classical recurrence
//   int sin^m cos(j phi) = m(m-1)/(m^2 - j^2) * int sin^{m-2} cos(j phi),
// seeded at m = 1; only even j survive for odd m, so no vanishing
// denominators.
std::vector<double> sin_power_weights(int N, int m, double h) {
  const int J = N - 1;
  std::vector<double> I(static_cast<size_t>(J) + 1, 0.0);  // I_m(j), even j
  for (int j = 0; j <= J; j += 2) {
    double v = (j == 0) ? 2.0 : 2.0 / (1.0 - static_cast<double>(j) * j);  // I_1(j)
    for (int mm = 3; mm <= m; mm += 2)
      v *= static_cast<double>(mm) * (mm - 1) /
           (static_cast<double>(mm) * mm - static_cast<double>(j) * j);
    I[static_cast<size_t>(j)] = v;
  }
  std::vector<double> w(static_cast<size_t>(N));
  for (int q = 0; q < N; ++q) {
    const double phi = (q + 0.5) * h;
    double W = I[0] / kPi;  // a_0 / 2
    for (int j = 2; j <= J; j += 2) W += 2.0 / kPi * I[static_cast<size_t>(j)] * std::cos(j * phi);
    w[static_cast<size_t>(q)] = h * W;
  }
  return w;
}

}  // namespace

std::vector<double> base_weights(const SurfaceSample& s) {
  std::vector<double> w(static_cast<size_t>(s.node_count()));
  if (s.grid.mode == GridSpec::Mode::Axisym1D) {
    const double h = s.h_phi();
    const double om = sphere_area(s.n - 2);  // measure of the symmetry orbit sphere
    const int m = s.n - 2;
    if (m % 2 == 1) {
      const auto pw = sin_power_weights(s.grid.N, m, h);
      for (int q = 0; q < s.grid.N; ++q) w[static_cast<size_t>(q)] = om * pw[static_cast<size_t>(q)];
    } else {
      // even power: sin^m is itself a trig polynomial, midpoint is exact
      for (int q = 0; q < s.grid.N; ++q)
        w[static_cast<size_t>(q)] = om * h * std::pow(std::sin(s.phi[q]), m);
    }
  } else {
    const int nt = s.grid.n_theta;
    const double dtheta = 2.0 * kPi / nt;
    for (int i = 0; i < s.grid.n_phi; ++i)
      for (int j = 0; j < nt; ++j)
        w[static_cast<size_t>(i * nt + j)] = s.glw[static_cast<size_t>(i)] * dtheta;
  }
  return w;
}

double integrate(const SurfaceSample& s, const std::vector<double>& f) {
  const auto w = base_weights(s);
  const int m = s.node_count();
  std::vector<double> terms(static_cast<size_t>(m));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int q = 0; q < m; ++q) {
    const auto fr = point_frame(s, q);
    terms[static_cast<size_t>(q)] = w[static_cast<size_t>(q)] * fr.area_weight *
                                    f[static_cast<size_t>(q)];
  }
  for (double t : terms)
    if (!std::isfinite(t)) throw NonFiniteIntegrand("non-finite integrand");
  return pairwise_sum(terms);
}

double integrate(const SurfaceSample& s, const FrameField& ff,
                 const std::function<double(const NodeData&)>& f) {
  const auto w = base_weights(s);
  const int m = s.node_count();
  std::vector<double> terms(static_cast<size_t>(m));
  for (int q = 0; q < m; ++q) {
    const auto& nd = ff.nodes[static_cast<size_t>(q)];
    terms[static_cast<size_t>(q)] = w[static_cast<size_t>(q)] * nd.frame.area_weight * f(nd);
  }
  for (double t : terms)
    if (!std::isfinite(t)) throw NonFiniteIntegrand("non-finite integrand");
  return pairwise_sum(terms);
}

double qk_value(const FunctionalSet& f) {
  const int n = f.n, k = f.k;
  const double base = f.IH(k - 1) / f.omega;
  if (!(base > 0.0)) return 0.0;
  const double expo = -static_cast<double>(n - k + 1) / static_cast<double>(n - k);
  const double weighted = f.I_r2H[static_cast<size_t>(k)] +
                          2.0 * (k - 1) / static_cast<double>(n + 1 - k) * f.IH(k - 2);
  return std::pow(base, expo) * weighted;
}

FunctionalSet functionals(const SurfaceSample& s, const FrameField& ff, int k) {
  const int n = s.n;
  if (k < 1 || k > n - 1) throw InvalidK("k must lie in 1..n-1");

  FunctionalSet out;
  out.n = n;
  out.k = k;
  out.omega = omega(n);
  out.I_H.assign(static_cast<size_t>(n), 0.0);
  out.I_uH.assign(static_cast<size_t>(n), 0.0);
  out.I_r2H.assign(static_cast<size_t>(n), 0.0);

  const auto w = base_weights(s);
  const int m = s.node_count();
  std::vector<double> terms(static_cast<size_t>(m));
  auto reduce = [&](auto&& f) {
    for (int q = 0; q < m; ++q) {
      const auto& nd = ff.nodes[static_cast<size_t>(q)];
      terms[static_cast<size_t>(q)] = w[static_cast<size_t>(q)] * nd.frame.area_weight * f(nd);
    }
    return pairwise_sum(terms);
  };

  for (int j = 0; j < n; ++j) {
    out.I_H[static_cast<size_t>(j)] = reduce([&](const NodeData& nd) { return nd.curv.Hj(j); });
    out.I_uH[static_cast<size_t>(j)] =
        reduce([&](const NodeData& nd) { return nd.frame.u * nd.curv.Hj(j); });
    out.I_r2H[static_cast<size_t>(j)] =
        reduce([&](const NodeData& nd) { return nd.frame.r2 * nd.curv.Hj(j); });
  }
  out.vol = reduce([&](const NodeData& nd) { return nd.frame.u; }) / n;
  out.Qk = qk_value(out);
  return out;
}

FunctionalSet functionals(const SurfaceSample& s, int k) {
  return functionals(s, compute_frame_field(s), k);
}

double minkowski_residual(const SurfaceSample& s, int k) {
  if (k < 1 || k > s.n - 1) throw InvalidK("k must lie in 1..n-1");
  const auto f = functionals(s, k);
  return f.I_uH[static_cast<size_t>(k)] - f.IH(k - 1);
}

WeightedIdentityResiduals prop22_residuals(const SurfaceSample& s, int k) {
  const int n = s.n;
  if (k < 1 || k > n - 1) throw InvalidK("k must lie in 1..n-1");
  const auto ff = compute_frame_field(s);
  const double C = binom(n - 1, k);

  const double lhs_r2 =
      integrate(s, ff, [&](const NodeData& nd) { return nd.frame.r2 * nd.frame.u * nd.curv.Hj(k); });
  const double lhs_u2 =
      integrate(s, ff, [&](const NodeData& nd) { return nd.frame.u * nd.frame.u * nd.curv.Hj(k); });
  const double r2Hkm1 =
      integrate(s, ff, [&](const NodeData& nd) { return nd.frame.r2 * nd.curv.Hj(k - 1); });
  const double uHkm1 =
      integrate(s, ff, [&](const NodeData& nd) { return nd.frame.u * nd.curv.Hj(k - 1); });
  const double qfT = integrate(s, ff, [&](const NodeData& nd) { return grad_forms(nd, k).qf_T; });
  const double qfTS = integrate(s, ff, [&](const NodeData& nd) { return grad_forms(nd, k).qf_TS; });

  WeightedIdentityResiduals out;
  out.res_r2 = lhs_r2 - r2Hkm1 - qfT / (2.0 * k * C);
  out.res_u2 = lhs_u2 - uHkm1 - qfTS / (4.0 * k * C);
  return out;
}

DivergenceResidual check_divergence_identity(const SurfaceSample& s, int k) {
  const int n = s.n;
  if (k < 1 || k > n - 1) throw InvalidK("k must lie in 1..n-1");
  if (s.grid.mode != GridSpec::Mode::Axisym1D)
    throw UnsupportedMode("discrete surface divergence requires the axisym grid");

  const auto ff = compute_frame_field(s);
  const int N = s.grid.N;
  const double C = binom(n - 1, k);

  // The flux density is W = J V^phi with J = rho^{n-2} v sin^{n-2}(phi) and
  // V^phi the meridian component of T_{k-1} grad r^2. The sin^{n-2} factor
  // flips parity with n, so differentiate Y = rho^{n-2} v V^phi instead
  // (odd about both poles for every n) and expand
  //   (1/J) dW/dphi = (Y' + (n-2) cot(phi) Y) / (rho^{n-2} v).
  std::vector<double> Y(static_cast<size_t>(N)), dens(static_cast<size_t>(N));
  for (int q = 0; q < N; ++q) {
    const auto& nd = ff.nodes[static_cast<size_t>(q)];
    const double t_mer = nd.curv.T[static_cast<size_t>(k - 1)](0, 0);
    const double Vphi = t_mer * nd.frame.grad_r2[0] / nd.frame.g(0, 0);
    dens[static_cast<size_t>(q)] = nd.frame.area_weight;  // rho^{n-2} v
    Y[static_cast<size_t>(q)] = dens[static_cast<size_t>(q)] * Vphi;
  }
  const auto dY = fd_d1(Y, s.h_phi(), s.grid.p, Parity::Odd, Parity::Odd);

  DivergenceResidual out;
  out.field.resize(static_cast<size_t>(N));
  for (int q = 0; q < N; ++q) {
    const auto& nd = ff.nodes[static_cast<size_t>(q)];
    const double rhs =
        2.0 * k * C * (nd.curv.Hj(k - 1) - nd.frame.u * nd.curv.Hj(k));
    const double cot = std::cos(s.phi[q]) / std::sin(s.phi[q]);
    const double lhs = (dY[static_cast<size_t>(q)] +
                        (n - 2) * cot * Y[static_cast<size_t>(q)]) /
                       dens[static_cast<size_t>(q)];
    out.field[static_cast<size_t>(q)] = lhs - rhs;
    out.max_abs = std::max(out.max_abs, std::fabs(lhs - rhs));
    out.scale = std::max(out.scale, std::fabs(rhs));
  }
  if (out.scale == 0.0) out.scale = 1.0;
  return out;
}

ResidualReport inequality_report(const SurfaceSample& s, const FrameField& ff,
                                 Ineq which, int k, int j) {
  const int n = s.n;
  const int kmin = (which == Ineq::KM_Quermass || which == Ineq::WZ) ? 2 : 1;
  if (k < kmin || k > n - 1) throw InvalidK("k outside the valid range for this inequality");
  if (which == Ineq::AF && (j < 0 || j >= k)) throw InvalidK("need 0 <= j < k");

  const auto f = functionals(s, ff, k);
  const double om = f.omega;

  ResidualReport r;
  r.star_shaped = true;
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& nd : ff.nodes) {
    if (!(nd.frame.u > 0.0)) r.star_shaped = false;
    for (int i = 1; i <= k; ++i) margin = std::min(margin, nd.curv.Hj(i));
  }
  r.strictness_margin = margin;
  r.k_convex = margin > 0.0;
  r.hypotheses_ok = r.star_shaped && r.k_convex;

  const auto r2Hk = f.I_r2H[static_cast<size_t>(k)];
  switch (which) {
    case Ineq::Iso:
      r.name = "isoperimetric";
      r.lhs = f.area() / om;
      r.rhs = std::pow(f.vol / (om / n), static_cast<double>(n - 1) / n);
      break;
    case Ineq::AF:
      r.name = "quermassintegral_j" + std::to_string(j) + "_k" + std::to_string(k);
      r.lhs = f.I_H[static_cast<size_t>(k)] / om;
      r.rhs = std::pow(f.I_H[static_cast<size_t>(j)] / om,
                       static_cast<double>(n - 1 - k) / (n - 1 - j));
      break;
    case Ineq::KM_Vol:
      r.name = "weighted_mean_curvature_volume";
      r.lhs = f.I_r2H[1];
      r.rhs = n * f.vol;
      break;
    case Ineq::GR:
      r.name = "weighted_mean_curvature_area";
      r.lhs = f.I_r2H[1];
      r.rhs = om * std::pow(f.area() / om, static_cast<double>(n) / (n - 1));
      break;
    case Ineq::KM_Quermass:
      r.name = "weighted_vs_lower_quermass_k" + std::to_string(k);
      r.lhs = r2Hk;
      r.rhs = f.IH(k - 2);
      break;
    case Ineq::WZ:
      r.name = "weighted_vs_quermass_power_k" + std::to_string(k);
      r.lhs = r2Hk;
      r.rhs = om * std::pow(f.IH(k - 1) / om,
                            static_cast<double>(n - k + 1) / (n - k));
      break;
    case Ineq::Main:
      r.name = "weighted_two_quermass_k" + std::to_string(k);
      r.lhs = r2Hk + 2.0 * (k - 1) / static_cast<double>(n - k + 1) * f.IH(k - 2);
      r.rhs = static_cast<double>(n + k - 1) / (n - k + 1) * om *
              std::pow(f.IH(k - 1) / om, static_cast<double>(n - k + 1) / (n - k));
      break;
  }
  r.residual = r.lhs - r.rhs;
  const double den = std::max(std::fabs(r.lhs), std::fabs(r.rhs));
  r.relative_margin = den > 0.0 ? r.residual / den : 0.0;
  return r;
}

ResidualReport inequality_report(const SurfaceSample& s, Ineq which, int k, int j) {
  return inequality_report(s, compute_frame_field(s), which, k, j);
}

double estimate_quad_tolerance(const ShapeSpec& spec, const GridSpec& g, int k) {
  GridSpec coarse = g;
  if (g.mode == GridSpec::Mode::Axisym1D)
    coarse.N = std::max(16, g.N / 2);
  else
    coarse.n_phi = std::max(8, g.n_phi / 2);

  const auto f1 = functionals(sample_shape(spec, g), k);
  const auto f0 = functionals(sample_shape(spec, coarse), k);
  double tau = 0;
  auto rel = [](double a, double b) {
    const double d = std::max(std::fabs(a), 1e-300);
    return std::fabs(a - b) / d;
  };
  for (int j = 0; j < spec.n; ++j)
    tau = std::max(tau, rel(f1.I_H[static_cast<size_t>(j)], f0.I_H[static_cast<size_t>(j)]));
  tau = std::max(tau, rel(f1.I_r2H[static_cast<size_t>(k)], f0.I_r2H[static_cast<size_t>(k)]));
  tau = std::max(tau, rel(f1.vol, f0.vol));
  return std::max(tau, 1e-12);
}

}  // namespace icflow
