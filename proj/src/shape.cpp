#include "hcg/shape.hpp"

#include <cmath>

#include "hcg/errors.hpp"

namespace hcg {

Mat gamma_upper(const Vec& du) {
  const double w = std::sqrt(1.0 + dot(du, du));
  Mat g = identity(du.n);
  const double c = 1.0 / (w * (1.0 + w));
  for (int i = 0; i < du.n; ++i)
    for (int j = 0; j < du.n; ++j) g(i, j) -= c * du[i] * du[j];
  return g;
}

Mat gamma_lower(const Vec& du) {
  const double w = std::sqrt(1.0 + dot(du, du));
  Mat g = identity(du.n);
  const double c = 1.0 / (1.0 + w);
  for (int i = 0; i < du.n; ++i)
    for (int j = 0; j < du.n; ++j) g(i, j) += c * du[i] * du[j];
  return g;
}

Mat euclidean_shape(const Vec& du, const Mat& d2u) {
  Mat hess = d2u;
  symmetrize(hess);
  const double w = std::sqrt(1.0 + dot(du, du));
  const Mat g = gamma_upper(du);
  Mat ae = scaled(mul(g, mul(hess, g)), 1.0 / w);
  symmetrize(ae);
  return ae;
}

GraphPointState hyperbolic_shape(double u, const Vec& du, const Mat& d2u) {
  if (!(u > 0.0)) throw NonpositiveHeight("graph height must be positive");
  GraphPointState st;
  st.u = u;
  st.du = du;
  st.d2u = d2u;
  symmetrize(st.d2u);
  st.w = std::sqrt(1.0 + dot(du, du));
  st.gamma_up = gamma_upper(du);
  st.shape_e = euclidean_shape(du, st.d2u);
  st.shape_h = add(scaled(identity(du.n), 1.0 / st.w), scaled(st.shape_e, u));
  symmetrize(st.shape_h);
  st.kappa = eigenvalues_sym(st.shape_h);
  return st;
}

Vec principal_curvatures(const Mat& shape) { return eigenvalues_sym(shape); }

MatrixSplit split_pm(const Mat& A) {
  Mat S = A;
  symmetrize(S);
  const EigenSym eig = eigen_sym(S);
  MatrixSplit out;
  out.abs = Mat(S.n);
  out.plus = Mat(S.n);
  out.minus = Mat(S.n);
  for (int k = 0; k < S.n; ++k) {
    const double lam = eig.values[k];
    const double pos = std::max(lam, 0.0);
    const double neg = std::max(-lam, 0.0);
    for (int i = 0; i < S.n; ++i)
      for (int j = 0; j < S.n; ++j) {
        const double vij = eig.vectors(i, k) * eig.vectors(j, k);
        out.abs(i, j) += std::fabs(lam) * vij;
        out.plus(i, j) += pos * vij;
        out.minus(i, j) += neg * vij;
      }
  }
  return out;
}

Mat first_fundamental(const GraphPointState& st) {
  Mat g = identity(st.du.n);
  for (int i = 0; i < st.du.n; ++i)
    for (int j = 0; j < st.du.n; ++j) g(i, j) += st.du[i] * st.du[j];
  return scaled(g, 1.0 / (st.u * st.u));
}

Mat second_fundamental(const GraphPointState& st) {
  Mat h = identity(st.du.n);
  for (int i = 0; i < st.du.n; ++i)
    for (int j = 0; j < st.du.n; ++j)
      h(i, j) += st.du[i] * st.du[j] + st.u * st.d2u(i, j);
  return scaled(h, 1.0 / (st.u * st.u * st.w));
}

}  // namespace hcg
