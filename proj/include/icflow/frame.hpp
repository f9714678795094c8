#pragma once

#include <vector>

#include "icflow/linalg.hpp"
#include "icflow/sample.hpp"

namespace icflow {

// Per-node geometric package for a radial graph X = rho * theta over S^{n-1}.
// Tensors are expressed in a basis orthonormal for the round metric; index 0
// is the meridian direction. In Axisym1D mode everything is diagonal with an
// (n-2)-fold degenerate parallel block.
struct PointFrame {
  int n = 3;
  SmallMat g;        // induced metric
  SmallMat h;        // second fundamental form (outward normal)
  SmallMat S;        // shape operator g^{-1} h
  std::array<double, kMaxDim> kappa{};  // principal curvatures, ascending
  double v = 0;      // sqrt(rho^2 + |grad rho|^2)
  double u = 0;      // support function <X, nu> = rho^2 / v
  double r2 = 0;     // rho^2
  double rho = 0;
  double area_weight = 0;               // d mu / d sigma_round = rho^{n-2} v
  std::array<double, kMaxDim> grad_r2{};  // covariant components of grad(r^2)

  int dim() const { return n - 1; }
};

PointFrame point_frame(const SurfaceSample& s, int node);

// sigma_0 .. sigma_m for m principal curvatures, by the coefficient
// recurrence on prod(1 + kappa_i x).
std::vector<double> sigma_all(const double* kappa, int m);

// T_0 = I, T_k = sigma_k I - T_{k-1} S, for k = 0 .. dim-2.
std::vector<SmallMat> newton_tensors(const SmallMat& S, const std::vector<double>& sigma);

struct CurvatureData {
  int n = 3;
  std::vector<double> sigma;  // sigma_0 .. sigma_{n-1}
  std::vector<double> H;      // H_j = sigma_j / C(n-1, j)
  std::vector<SmallMat> T;    // T_0 .. T_{n-2}

  double Hj(int j) const {    // convention: H_j = 0 for j >= n, H_0 = 1
    if (j < 0) return 0.0;
    return j < static_cast<int>(H.size()) ? H[static_cast<size_t>(j)] : 0.0;
  }
  // k-convexity at this node: H_1 .. H_k all positive.
  bool k_convex(int k) const {
    for (int j = 1; j <= k; ++j)
      if (Hj(j) <= 0.0) return false;
    return true;
  }
};

CurvatureData curvature_data(const PointFrame& f);

struct NodeData {
  PointFrame frame;
  CurvatureData curv;
};

struct FrameField {
  std::vector<NodeData> nodes;
};

// Nodewise frame + curvature evaluation. The parallel version distributes
// nodes over OpenMP threads; outputs are written to disjoint slots so the
// result is identical to the serial reference.
FrameField compute_frame_field(const SurfaceSample& s);
FrameField compute_frame_field_serial(const SurfaceSample& s);

}  // namespace icflow
