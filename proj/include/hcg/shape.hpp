#pragma once

#include "hcg/smallmat.hpp"

// Pointwise geometry of a vertical graph x_{n+1} = u(x) over the boundary
// plane of the half-space model.  With w = sqrt(1 + |Du|^2) and
//   gamma^{ij} = delta_ij - u_i u_j / (w (1 + w)),
// the Euclidean and hyperbolic shape matrices are
//   A^e = (1/w) gamma Du^2 gamma,      A = (1/w) I + u A^e,
// so the hyperbolic principal curvatures are kappa_i = u kappa^e_i + 1/w.

namespace hcg {

struct GraphPointState {
  double u = 0;
  Vec du;
  Mat d2u;      // symmetrized copy of the input Hessian
  double w = 1;
  Mat gamma_up;  // gamma^{ij}
  Mat shape_e;   // A^e
  Mat shape_h;   // A
  Vec kappa;     // eigenvalues of A, ascending
};

Mat gamma_upper(const Vec& du);
Mat gamma_lower(const Vec& du);

// Square root identities: gamma_up * gamma_lower = I and
// gamma_lower * gamma_lower = I + Du Du^T.
Mat euclidean_shape(const Vec& du, const Mat& d2u);

// Full pointwise state; throws NonpositiveHeight unless u > 0.
GraphPointState hyperbolic_shape(double u, const Vec& du, const Mat& d2u);

// Eigenvalues of a symmetric matrix, ascending.
Vec principal_curvatures(const Mat& shape);

struct MatrixSplit {
  Mat abs;    // (A A^T)^{1/2}
  Mat plus;   // (|A| + A)/2
  Mat minus;  // (|A| - A)/2
};

// Spectral positive/negative split: plus and minus are positive
// semidefinite and annihilate each other.
MatrixSplit split_pm(const Mat& A);

// Induced metric g_ij = (delta_ij + u_i u_j) / u^2.
Mat first_fundamental(const GraphPointState& st);
// Second fundamental form h_ij = (delta_ij + u_i u_j + u u_ij) / (u^2 w).
Mat second_fundamental(const GraphPointState& st);

}  // namespace hcg
