#pragma once

#include <utility>

#include "hcg/curvature_family.hpp"
#include "hcg/shape.hpp"
#include "hcg/smallmat.hpp"

// Matrix calculus for G(D^2 u, D u, u) = F(A[u]) = f(kappa[u]) and its
// linearization.  dF is assembled from Newton transformation tensors
//   T_m(A) = sum_{j=0..m} (-1)^j sigma_{m-j}(A) A^j,
// polynomials in A that stay smooth through repeated eigenvalues.

namespace hcg {

struct LinearizationAtPoint {
  Mat Gst;    // dG / d(u_st)
  Vec Gs;     // dG / d(u_s)
  double Gu;  // dG / du
  Mat Fij;    // dF / d(a_ij) at A[u]
};

// f evaluated on the eigenvalues of a symmetric matrix.
double eval_F(const CurvatureFamily& fam, const Mat& A);

// Derivative of eval_F with respect to the matrix entries.
Mat dF(const CurvatureFamily& fam, const Mat& A);

double eval_G(const CurvatureFamily& fam, const GraphPointState& st);

LinearizationAtPoint linearize(const CurvatureFamily& fam,
                               const GraphPointState& st);

// Slacks of the two-sided bound  w mu_k <= u f_k <= w^3 mu_k  between the
// ascending eigenvalues mu of Gst and f of Fij.  Returns
// {min_k (u f_k - w mu_k), min_k (w^3 mu_k - u f_k)}.
std::pair<double, double> eigen_sandwich_slack(const CurvatureFamily& fam,
                                               const GraphPointState& st);

}  // namespace hcg
