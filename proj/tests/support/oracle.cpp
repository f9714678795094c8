#include "support/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {

// binomial as a double; small arguments only
double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double unit_sphere_area(int m) {  // area of S^m
  return (m + 1) * std::pow(M_PI, (m + 1) / 2.0) / std::tgamma((m + 1) / 2.0 + 1.0);
}

// determinant by plain Gaussian elimination with partial pivoting
double det_dense(std::vector<double> a, int dim) {
  double sign = 1.0;
  for (int c = 0; c < dim; ++c) {
    int piv = c;
    for (int r = c + 1; r < dim; ++r)
      if (std::fabs(a[r * dim + c]) > std::fabs(a[piv * dim + c])) piv = r;
    if (a[piv * dim + c] == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < dim; ++j) std::swap(a[c * dim + j], a[piv * dim + j]);
      sign = -sign;
    }
    for (int r = c + 1; r < dim; ++r) {
      const double f = a[r * dim + c] / a[c * dim + c];
      for (int j = c; j < dim; ++j) a[r * dim + j] -= f * a[c * dim + j];
    }
  }
  double d = sign;
  for (int c = 0; c < dim; ++c) d *= a[c * dim + c];
  return d;
}

// profile curve and its derivatives at phi
struct Profile {
  double x, z, xd, zd, xdd, zdd, speed;  // speed = |P'|
};

Profile profile_at(const icflow::ShapeSpec& sp, double phi) {
  double rho, d1, d2;
  sp.eval(phi, rho, d1, d2);
  const double s = std::sin(phi), c = std::cos(phi);
  Profile p;
  p.x = rho * s;
  p.z = rho * c;
  p.xd = d1 * s + rho * c;
  p.zd = d1 * c - rho * s;
  p.xdd = d2 * s + 2 * d1 * c - rho * s;
  p.zdd = d2 * c - 2 * d1 * s - rho * c;
  p.speed = std::hypot(p.xd, p.zd);
  return p;
}

}  // namespace

double sigma_subset(const std::vector<double>& kappa, int k) {
  const int m = static_cast<int>(kappa.size());
  if (k == 0) return 1.0;
  if (k < 0 || k > m) return 0.0;
  double total = 0.0;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    double prod = 1.0;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) prod *= kappa[i];
    total += prod;
  }
  return total;
}

double sigma_minors(const std::vector<double>& A, int dim, int k) {
  if (k == 0) return 1.0;
  if (k < 0 || k > dim) return 0.0;
  double total = 0.0;
  std::vector<int> idx(k);
  // iterate k-subsets of {0..dim-1}
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    std::vector<double> minor(k * k);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) minor[r * k + c] = A[idx[r] * dim + idx[c]];
    total += det_dense(minor, k);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == dim - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  return total;
}

std::vector<double> newton_fd(const std::vector<double>& S, int dim, int k, double eps) {
  // T_k^{ij} = d sigma_{k+1}(A) / d A_{ji} at A = S
  std::vector<double> T(dim * dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      std::vector<double> Ap = S, Am = S;
      Ap[j * dim + i] += eps;
      Am[j * dim + i] -= eps;
      T[i * dim + j] =
          (sigma_minors(Ap, dim, k + 1) - sigma_minors(Am, dim, k + 1)) / (2 * eps);
    }
  }
  return T;
}

void profile_curvatures(const icflow::ShapeSpec& sp, double phi,
                        double& k_mer, double& k_par) {
  const Profile p = profile_at(sp, phi);
  // outward normal N = (-zd, xd)/speed; curvature of the meridian with the
  // matching orientation, and the rotational curvature N_x / x
  k_mer = (p.zd * p.xdd - p.xd * p.zdd) / (p.speed * p.speed * p.speed);
  if (std::fabs(p.x) < 1e-14) {
    k_par = k_mer;  // umbilic pole limit
  } else {
    k_par = (-p.zd / p.speed) / p.x;
  }
}

double profile_u(const icflow::ShapeSpec& sp, double phi) {
  const Profile p = profile_at(sp, phi);
  return (p.x * (-p.zd) + p.z * p.xd) / p.speed;
}

Functionals integrate_shape(const icflow::ShapeSpec& sp, int k, int panels) {
  if (panels % 2) ++panels;
  const int n = sp.n;
  const double area_s = unit_sphere_area(n - 2);  // omega_{n-2}
  const double h = M_PI / panels;

  Functionals out;
  out.n = n;
  out.k = k;
  out.I_H.assign(n, 0.0);

  double vol_acc = 0.0;
  for (int i = 0; i <= panels; ++i) {
    const double phi = i * h;
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double s = std::sin(phi);
    const double sw = std::pow(s, n - 2);
    if (sw == 0.0) continue;  // poles contribute nothing

    double rho, d1, d2;
    sp.eval(phi, rho, d1, d2);
    const Profile p = profile_at(sp, phi);
    const double dmu = p.x == 0 ? 0.0 : std::pow(p.x, n - 2) * p.speed;  // / (area_s)

    double km, kp;
    profile_curvatures(sp, phi, km, kp);
    std::vector<double> kappa(n - 1, kp);
    kappa[0] = km;

    const double u = profile_u(sp, phi);
    const double r2 = rho * rho;

    for (int j = 0; j < n; ++j) {
      const double Hj = sigma_subset(kappa, j) / binom(n - 1, j);
      out.I_H[j] += w * Hj * dmu;
      if (j == k) {
        out.I_r2Hk += w * r2 * Hj * dmu;
        out.I_uHk += w * u * Hj * dmu;
      }
    }
    vol_acc += w * std::pow(rho, n) * sw;
  }
  const double f = area_s * h / 3.0;
  for (auto& v : out.I_H) v *= f;
  out.I_r2Hk *= f;
  out.I_uHk *= f;
  out.vol = area_s / n * vol_acc * h / 3.0;
  return out;
}

std::vector<icflow::ShapeSpec> fixture_matrix() {
  using icflow::ShapeSpec;
  std::vector<ShapeSpec> out;
  for (int n : {3, 4, 5}) {
    out.push_back(ShapeSpec::sphere(1.0, n));
    out.push_back(ShapeSpec::sphere(2.0, n));
    for (double aspect : {1.3, 2.0, 3.0})
      out.push_back(ShapeSpec::ellipsoid(1.0, aspect, n));
    for (int m : {2, 3, 4})
      for (double eps : {0.05, 0.15})
        out.push_back(ShapeSpec::perturbed_sphere(1.0, {{m, eps}}, n));
  }
  return out;
}

}  // namespace oracle
