#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <span>
#include <vector>

namespace icflow {

// Dense square matrix with a small fixed capacity. Hypersurface frames in
// R^n have dimension n-1 and the artifact caps n at 8.
inline constexpr int kMaxDim = 8;

class SmallMat {
 public:
  SmallMat() = default;
  explicit SmallMat(int d) : d_(d) { a_.fill(0.0); }

  static SmallMat identity(int d) {
    SmallMat m(d);
    for (int i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
  }

  int dim() const { return d_; }

  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * kMaxDim + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * kMaxDim + j]; }

  double trace() const {
    double t = 0;
    for (int i = 0; i < d_; ++i) t += (*this)(i, i);
    return t;
  }

  SmallMat operator*(const SmallMat& o) const {
    assert(d_ == o.d_);
    SmallMat r(d_);
    for (int i = 0; i < d_; ++i)
      for (int l = 0; l < d_; ++l) {
        const double ail = (*this)(i, l);
        if (ail == 0.0) continue;
        for (int j = 0; j < d_; ++j) r(i, j) += ail * o(l, j);
      }
    return r;
  }

  SmallMat& operator+=(const SmallMat& o) {
    assert(d_ == o.d_);
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) (*this)(i, j) += o(i, j);
    return *this;
  }

  SmallMat& operator-=(const SmallMat& o) {
    assert(d_ == o.d_);
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) (*this)(i, j) -= o(i, j);
    return *this;
  }

  SmallMat& operator*=(double s) {
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) (*this)(i, j) *= s;
    return *this;
  }

  friend SmallMat operator-(SmallMat a, const SmallMat& b) { return a -= b; }
  friend SmallMat operator+(SmallMat a, const SmallMat& b) { return a += b; }
  friend SmallMat operator*(double s, SmallMat a) { return a *= s; }

  // max |a_ij|
  double max_abs() const {
    double m = 0;
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) m = std::max(m, std::fabs((*this)(i, j)));
    return m;
  }

  // y = A x
  std::array<double, kMaxDim> apply(std::span<const double> x) const {
    std::array<double, kMaxDim> y{};
    for (int i = 0; i < d_; ++i) {
      double s = 0;
      for (int j = 0; j < d_; ++j) s += (*this)(i, j) * x[static_cast<size_t>(j)];
      y[static_cast<size_t>(i)] = s;
    }
    return y;
  }

 private:
  int d_ = 0;
  std::array<double, kMaxDim * kMaxDim> a_{};
};

// Determinant by Gaussian elimination with partial pivoting. Test oracles
// and the frame builder (positive-definiteness probe) use it; never hot.
inline double det(SmallMat m) {
  const int d = m.dim();
  double sign = 1.0, prod = 1.0;
  for (int c = 0; c < d; ++c) {
    int piv = c;
    for (int r = c + 1; r < d; ++r)
      if (std::fabs(m(r, c)) > std::fabs(m(piv, c))) piv = r;
    if (m(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (int j = 0; j < d; ++j) std::swap(m(piv, j), m(c, j));
      sign = -sign;
    }
    prod *= m(c, c);
    for (int r = c + 1; r < d; ++r) {
      const double f = m(r, c) / m(c, c);
      for (int j = c; j < d; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return sign * prod;
}

// Deterministic reduction: fixed pairwise tree, independent of thread count.
inline double pairwise_sum(std::span<const double> x) {
  const size_t n = x.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0;
    for (double v : x) s += v;
    return s;
  }
  const size_t half = n / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

}  // namespace icflow
