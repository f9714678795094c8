#pragma once

// Slow reference implementations used only by tests. Everything here is
// derived independently of the library's curvature/quadrature code paths:
// curvatures come from the generating profile curve (x, z) = (rho sin phi,
// rho cos phi), sigma_k from explicit subset sums or principal minors, and
// integrals from composite Simpson on a very fine grid.

#include <vector>

#include "icflow/shapes.hpp"

namespace oracle {

// e_k of the list of reals, as an explicit sum over k-subsets.
double sigma_subset(const std::vector<double>& kappa, int k);

// e_k of the eigenvalues of a dim x dim matrix (row-major), as the sum of
// all k x k principal minors. Valid for any square matrix.
double sigma_minors(const std::vector<double>& A, int dim, int k);

// Newton tensor T_k(S) entries via central finite differences of
// sigma_{k+1} with respect to single matrix entries. Row-major output.
std::vector<double> newton_fd(const std::vector<double>& S, int dim, int k,
                              double eps = 1e-5);

// Principal curvatures of the surface of revolution at colatitude phi, from
// the profile curve: meridian curvature of the plane curve plus the parallel
// curvature N_x / x.
void profile_curvatures(const icflow::ShapeSpec& sp, double phi,
                        double& k_mer, double& k_par);

// Support function <X, N> computed directly in profile-plane coordinates.
double profile_u(const icflow::ShapeSpec& sp, double phi);

struct Functionals {
  int n = 3, k = 1;
  std::vector<double> I_H;  // j = 0 .. n-1, normalized H_j
  double I_r2Hk = 0;
  double I_uHk = 0;
  double vol = 0;  // independent radial formula, not (1/n) int u
};

// Composite-Simpson surface integrals with `panels` intervals over phi.
Functionals integrate_shape(const icflow::ShapeSpec& sp, int k, int panels = 40000);

// The shape matrix the checked-in fixture file is generated from: spheres,
// ellipsoid aspects up to 3 and single-mode perturbed spheres (m in {2,3,4},
// eps up to 0.15) for n in {3, 4, 5}.
std::vector<icflow::ShapeSpec> fixture_matrix();

}  // namespace oracle
