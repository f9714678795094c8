#pragma once

#include <vector>

#include "icflow/shapes.hpp"

namespace icflow {

struct GridSpec {
  enum class Mode { Axisym1D, Full2D };

  Mode mode = Mode::Axisym1D;
  int N = 128;        // Axisym1D: interior nodes over phi in (0, pi)
  int n_phi = 48;     // Full2D: Gauss-Legendre nodes in cos(phi)
  int n_theta = 64;   // Full2D: uniform azimuth nodes, even
  int p = 4;          // finite-difference order, 2 or 4

  void validate(int ambient_n) const;  // throws ConfigError / DimensionMismatch
};

// Discretized radial function with tangential derivatives on the grid.
//
// Axisym1D: nodes at midpoints phi_q = (q + 1/2) pi/N, poles excluded;
// derivatives are with respect to phi. Full2D (n = 3 only): lat-long grid,
// phi from Gauss-Legendre nodes in cos(phi), theta uniform on [0, 2pi);
// node index is i_phi * n_theta + i_theta.
struct SurfaceSample {
  GridSpec grid;
  int n = 3;

  std::vector<double> phi;       // colatitude per phi-row
  std::vector<double> glw;       // Full2D: GL weights in cos(phi)
  std::vector<double> rho;
  std::vector<double> rho_d1;    // d rho / d phi
  std::vector<double> rho_d2;    // d^2 rho / d phi^2
  std::vector<double> rho_dt;    // Full2D: d rho / d theta
  std::vector<double> rho_d1t;   // Full2D: d^2 rho / d phi d theta
  std::vector<double> rho_dtt;   // Full2D: d^2 rho / d theta^2

  int node_count() const {
    return grid.mode == GridSpec::Mode::Axisym1D ? grid.N : grid.n_phi * grid.n_theta;
  }
  double phi_of(int node) const {
    return grid.mode == GridSpec::Mode::Axisym1D ? phi[node] : phi[node / grid.n_theta];
  }
  double h_phi() const;  // Axisym1D spacing

  void validate() const;  // rho > 0 everywhere, sizes consistent
};

SurfaceSample sample_shape(const ShapeSpec& spec, const GridSpec& grid);

// Recompute rho_d1 / rho_d2 from rho by order-p centered differences with
// even ghost extension at both poles. Axisym1D only (flow path).
void refresh_derivatives(SurfaceSample& s);

enum class Parity { Even, Odd };

// Order-p centered first derivative of a nodal field on the midpoint phi
// grid, ghost values from the stated parity at phi = 0 and phi = pi.
std::vector<double> fd_d1(const std::vector<double>& f, double h, int p,
                          Parity at0, Parity atPi);
std::vector<double> fd_d2(const std::vector<double>& f, double h, int p,
                          Parity at0, Parity atPi);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w);

}  // namespace icflow
