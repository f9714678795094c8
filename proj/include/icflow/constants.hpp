#pragma once

#include <cmath>

namespace icflow {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Area of the unit sphere S^{m} in R^{m+1}: 2 pi^{(m+1)/2} / Gamma((m+1)/2).
// Closed form so the reference constant carries no quadrature error.
inline double sphere_area(int m) {
  const double half = 0.5 * static_cast<double>(m + 1);
  return 2.0 * std::pow(kPi, half) / std::tgamma(half);
}

// omega_{n-1} in the usual notation: area of the unit sphere in R^n.
inline double omega(int n) { return sphere_area(n - 1); }

// Binomial coefficient as double; arguments stay tiny here.
inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace icflow
