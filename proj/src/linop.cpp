#include "hcg/linop.hpp"

#include <cmath>

#include "hcg/errors.hpp"

namespace hcg {

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

// T_{m}(A) from eigenvalues lam of A and powers of A.
Mat newton_tensor(const Mat& A, const Vec& lam, int m) {
  Mat T(A.n);
  Mat Apow = identity(A.n);  // A^0
  for (int j = 0; j <= m; ++j) {
    const double sig = elementary_symmetric(lam, m - j);
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    T = add(T, scaled(Apow, sign * sig));
    if (j < m) Apow = mul(Apow, A);
  }
  return T;
}

void require_cone(const CurvatureFamily& fam, const Vec& lam) {
  if (fam.needs_cone() && !in_cone(fam, lam))
    throw NotInCone("shape matrix spectrum outside the cone of " + fam.label);
}

Mat dF_impl(const CurvatureFamily& fam, const Mat& A, const Vec& lam) {
  const int n = fam.n;
  switch (fam.kind) {
    case FamilyKind::HkRoot: {
      if (fam.k == 1) return scaled(identity(n), 1.0 / n);
      require_cone(fam, lam);
      const int k = fam.k;
      const double H = elementary_symmetric(lam, k) / binom(n, k);
      const double c = std::pow(H, (1.0 - k) / k) / (k * binom(n, k));
      return scaled(newton_tensor(A, lam, k - 1), c);
    }
    case FamilyKind::Quotient: {
      require_cone(fam, lam);
      const int k = fam.k, l = fam.l, m = fam.k - fam.l;
      const double Hk = elementary_symmetric(lam, k) / binom(n, k);
      const double Hl = elementary_symmetric(lam, l) / binom(n, l);
      const double q = Hk / Hl;
      const double c = std::pow(q, (1.0 - m) / m) / m;
      const Mat dHk = scaled(newton_tensor(A, lam, k - 1), 1.0 / binom(n, k));
      const Mat dHl = scaled(newton_tensor(A, lam, l - 1), 1.0 / binom(n, l));
      return scaled(sub(scaled(dHk, Hl), scaled(dHl, Hk)), c / (Hl * Hl));
    }
    case FamilyKind::Composite: {
      Mat out(n);
      for (std::size_t i = 0; i < fam.members.size(); ++i)
        out = add(out, scaled(dF_impl(fam.members[i], A, lam),
                              fam.weights[i]));
      return out;
    }
  }
  throw PreconditionViolated("unreachable family kind");
}

}  // namespace

double eval_F(const CurvatureFamily& fam, const Mat& A) {
  Mat S = A;
  symmetrize(S);
  return eval_f(fam, eigenvalues_sym(S));
}

Mat dF(const CurvatureFamily& fam, const Mat& A) {
  if (A.n != fam.n) throw PreconditionViolated("matrix dimension mismatch");
  Mat S = A;
  symmetrize(S);
  Mat out = dF_impl(fam, S, eigenvalues_sym(S));
  symmetrize(out);
  return out;
}

double eval_G(const CurvatureFamily& fam, const GraphPointState& st) {
  return eval_f(fam, st.kappa);
}

LinearizationAtPoint linearize(const CurvatureFamily& fam,
                               const GraphPointState& st) {
  const int n = fam.n;
  const double u = st.u, w = st.w;
  const Mat& A = st.shape_h;
  const Mat& g = st.gamma_up;

  LinearizationAtPoint lin;
  lin.Fij = dF(fam, A);

  lin.Gst = scaled(mul(g, mul(lin.Fij, g)), u / w);
  symmetrize(lin.Gst);

  const double trFA = frobenius_inner(lin.Fij, A);
  const double sumF = trace(lin.Fij);
  lin.Gu = (trFA - sumF / w) / u;

  // Gs, term by term:
  //   - (u_s / w^2) F^{ij} a_ij
  //   - (2/w) F^{ij} a_ik (w u_k gamma^{sj} + u_j gamma^{ks}) / (1 + w)
  //   + (2/w^2) F^{ij} u_i gamma^{sj}
  const Mat FA = mul(lin.Fij, A);
  const Vec FAu = mul(FA, st.du);       // (F A u)_j
  const Vec Fu = mul(lin.Fij, st.du);   // (F u)_i
  const Vec AFu = mul(A, Fu);           // (A F u)_k
  const Vec g_FAu = mul(g, FAu);
  const Vec g_AFu = mul(g, AFu);
  const Vec g_Fu = mul(g, Fu);

  lin.Gs = Vec(n);
  for (int s = 0; s < n; ++s) {
    const double t1 = -(st.du[s] / (w * w)) * trFA;
    const double t2 =
        -(2.0 / (w * (1.0 + w))) * (w * g_FAu[s] + g_AFu[s]);
    const double t3 = (2.0 / (w * w)) * g_Fu[s];
    lin.Gs[s] = t1 + t2 + t3;
  }
  return lin;
}

std::pair<double, double> eigen_sandwich_slack(const CurvatureFamily& fam,
                                               const GraphPointState& st) {
  const LinearizationAtPoint lin = linearize(fam, st);
  const Vec mu = eigenvalues_sym(lin.Gst);
  const Vec fe = eigenvalues_sym(lin.Fij);
  const double u = st.u, w = st.w;
  double lo = 1e300, hi = 1e300;
  for (int k = 0; k < fam.n; ++k) {
    lo = std::min(lo, u * fe[k] - w * mu[k]);
    hi = std::min(hi, w * w * w * mu[k] - u * fe[k]);
  }
  return {lo, hi};
}

}  // namespace hcg
