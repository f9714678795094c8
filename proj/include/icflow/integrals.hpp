#pragma once

#include <functional>
#include <string>
#include <vector>

#include "icflow/frame.hpp"

namespace icflow {

// Base quadrature weights per node: the round-sphere measure factor
// (everything except area_weight). Axisym1D: omega_{n-2} * h * sin^{n-2}(phi);
// Full2D: glw * 2 pi / n_theta.
std::vector<double> base_weights(const SurfaceSample& s);

// Integral of a nodewise scalar over the hypersurface measure d mu.
// Deterministic pairwise summation.
double integrate(const SurfaceSample& s, const std::vector<double>& f);
double integrate(const SurfaceSample& s, const FrameField& ff,
                 const std::function<double(const NodeData&)>& f);

// Global functionals of a sampled hypersurface.
struct FunctionalSet {
  int n = 3, k = 1;
  std::vector<double> I_H;     // I_H[j] = int H_j dmu, j = 0 .. n-1
  std::vector<double> I_uH;    // int u H_j dmu
  std::vector<double> I_r2H;   // int r^2 H_j dmu
  double vol = 0;              // enclosed volume, (1/n) int u dmu
  double omega = 0;            // area of the unit sphere S^{n-1}
  double Qk = 0;               // scale-invariant monotone quantity

  // Convention slot: index -1 means n * Vol, indices >= n vanish.
  double IH(int j) const {
    if (j < 0) return static_cast<double>(n) * vol;
    return j < static_cast<int>(I_H.size()) ? I_H[static_cast<size_t>(j)] : 0.0;
  }
  double area() const { return I_H[0]; }
};

FunctionalSet functionals(const SurfaceSample& s, int k);
FunctionalSet functionals(const SurfaceSample& s, const FrameField& ff, int k);

double qk_value(const FunctionalSet& f);  // recompute Qk from the integrals

// int u H_k dmu - int H_{k-1} dmu  (vanishes on closed hypersurfaces).
double minkowski_residual(const SurfaceSample& s, int k);

// Residuals of the two weighted integral identities tying r^2- and
// u-weighted curvature integrals through Newton-tensor quadratic forms.
struct WeightedIdentityResiduals {
  double res_r2;  // int r^2 u H_k - int r^2 H_{k-1} - (1/(2k C)) int T_{k-1}(grad r^2, grad r^2)
  double res_u2;  // int u^2 H_k  - int u H_{k-1}  - (1/(4k C)) int T_{k-1}(S grad r^2, grad r^2)
};
WeightedIdentityResiduals prop22_residuals(const SurfaceSample& s, int k);

// Nodewise residual of the divergence identity
//   div(T_{k-1} grad r^2) = 2 k C(n-1,k) (H_{k-1} - u H_k),
// with an order-p discrete surface divergence. Axisym1D only.
struct DivergenceResidual {
  std::vector<double> field;
  double max_abs = 0;
  double scale = 0;  // max |rhs|, for relative reporting
};
DivergenceResidual check_divergence_identity(const SurfaceSample& s, int k);

enum class Ineq {
  Iso,              // isoperimetric
  AF,               // quermassintegral comparison, pair (j, k)
  KM_Vol,           // int r^2 H_1 >= n Vol
  GR,               // int r^2 H_1 >= omega (|Sigma|/omega)^{n/(n-1)}
  KM_Quermass,      // int r^2 H_k >= int H_{k-2}, k >= 2
  WZ,               // int r^2 H_k >= omega (int H_{k-1}/omega)^{(n-k+1)/(n-k)}, k >= 2
  Main,             // the weighted inequality with the two-quermassintegral left side
};

struct ResidualReport {
  std::string name;
  double lhs = 0, rhs = 0;
  double residual = 0;         // lhs - rhs; inequality satisfied <=> residual >= 0
  double relative_margin = 0;  // residual / max(|lhs|, |rhs|)
  bool star_shaped = false;
  bool k_convex = false;
  bool hypotheses_ok = false;
  double strictness_margin = 0;  // min over nodes of min_{i<=k} H_i
};

// j is the lower index for Ineq::AF (0 <= j < k), ignored otherwise.
ResidualReport inequality_report(const SurfaceSample& s, Ineq which, int k, int j = -1);
ResidualReport inequality_report(const SurfaceSample& s, const FrameField& ff,
                                 Ineq which, int k, int j = -1);

// |grad r^2|^2 with respect to the induced metric, at one node.
double surface_grad_r2_sq(const NodeData& nd);

// Two-grid Richardson estimate of the relative quadrature/discretization
// error of the functionals of `spec` at grid `g` (compares against N/2).
double estimate_quad_tolerance(const ShapeSpec& spec, const GridSpec& g, int k);

}  // namespace icflow
