#pragma once

#include <array>
#include <cmath>
#include <initializer_list>

// Dense vectors and symmetric matrices of dimension <= 8, sized for
// pointwise curvature algebra.  Fixed capacity, no heap traffic.

namespace hcg {

inline constexpr int kMaxDim = 8;

struct Vec {
  int n = 0;
  std::array<double, kMaxDim> a{};

  Vec() = default;
  explicit Vec(int dim) : n(dim) {}
  Vec(std::initializer_list<double> xs) : n(static_cast<int>(xs.size())) {
    int i = 0;
    for (double x : xs) a[i++] = x;
  }

  double operator[](int i) const { return a[i]; }
  double& operator[](int i) { return a[i]; }
};

struct Mat {
  int n = 0;
  std::array<double, kMaxDim * kMaxDim> a{};

  Mat() = default;
  explicit Mat(int dim) : n(dim) {}

  double operator()(int i, int j) const { return a[i * kMaxDim + j]; }
  double& operator()(int i, int j) { return a[i * kMaxDim + j]; }
};

double dot(const Vec& x, const Vec& y);
double norm2(const Vec& x);
double max_abs(const Vec& x);
double min_entry(const Vec& x);
double max_entry(const Vec& x);
Vec scaled(const Vec& x, double c);
Vec sorted_ascending(const Vec& x);

Mat identity(int n);
Mat outer(const Vec& x, const Vec& y);
Mat mul(const Mat& A, const Mat& B);
Vec mul(const Mat& A, const Vec& x);
Mat add(const Mat& A, const Mat& B);
Mat sub(const Mat& A, const Mat& B);
Mat scaled(const Mat& A, double c);
void symmetrize(Mat& A);
double trace(const Mat& A);
// Sum_ij A(i,j) B(i,j).
double frobenius_inner(const Mat& A, const Mat& B);
double max_abs(const Mat& A);
double max_asymmetry(const Mat& A);

struct EigenSym {
  Vec values;   // ascending
  Mat vectors;  // column k pairs with values[k]
};

// Symmetric eigendecomposition: closed form for n = 2 with a
// cancellation-safe discriminant, cyclic Jacobi sweeps for 3 <= n <= 8.
EigenSym eigen_sym(const Mat& A);
Vec eigenvalues_sym(const Mat& A);

}  // namespace hcg
