#include "hcg/smallmat.hpp"

#include <algorithm>
#include <cassert>

namespace hcg {

double dot(const Vec& x, const Vec& y) {
  double s = 0;
  for (int i = 0; i < x.n; ++i) s += x.a[i] * y.a[i];
  return s;
}

double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

double max_abs(const Vec& x) {
  double m = 0;
  for (int i = 0; i < x.n; ++i) m = std::max(m, std::fabs(x.a[i]));
  return m;
}

double min_entry(const Vec& x) {
  double m = x.a[0];
  for (int i = 1; i < x.n; ++i) m = std::min(m, x.a[i]);
  return m;
}

double max_entry(const Vec& x) {
  double m = x.a[0];
  for (int i = 1; i < x.n; ++i) m = std::max(m, x.a[i]);
  return m;
}

Vec sorted_ascending(const Vec& x) {
  Vec y = x;
  std::sort(y.a.begin(), y.a.begin() + y.n);
  return y;
}

Mat identity(int n) {
  Mat I(n);
  for (int i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

Mat outer(const Vec& x, const Vec& y) {
  Mat M(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < y.n; ++j) M(i, j) = x[i] * y[j];
  return M;
}

Mat mul(const Mat& A, const Mat& B) {
  Mat C(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) {
      double s = 0;
      for (int k = 0; k < A.n; ++k) s += A(i, k) * B(k, j);
      C(i, j) = s;
    }
  return C;
}

Vec mul(const Mat& A, const Vec& x) {
  Vec y(A.n);
  for (int i = 0; i < A.n; ++i) {
    double s = 0;
    for (int k = 0; k < A.n; ++k) s += A(i, k) * x[k];
    y[i] = s;
  }
  return y;
}

Mat add(const Mat& A, const Mat& B) {
  Mat C(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) C(i, j) = A(i, j) + B(i, j);
  return C;
}

Mat sub(const Mat& A, const Mat& B) {
  Mat C(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) C(i, j) = A(i, j) - B(i, j);
  return C;
}

Mat scaled(const Mat& A, double c) {
  Mat C(A.n);
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) C(i, j) = c * A(i, j);
  return C;
}

Vec scaled(const Vec& x, double c) {
  Vec y(x.n);
  for (int i = 0; i < x.n; ++i) y[i] = c * x[i];
  return y;
}

void symmetrize(Mat& A) {
  for (int i = 0; i < A.n; ++i)
    for (int j = i + 1; j < A.n; ++j) {
      double m = 0.5 * (A(i, j) + A(j, i));
      A(i, j) = m;
      A(j, i) = m;
    }
}

double trace(const Mat& A) {
  double s = 0;
  for (int i = 0; i < A.n; ++i) s += A(i, i);
  return s;
}

double frobenius_inner(const Mat& A, const Mat& B) {
  double s = 0;
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) s += A(i, j) * B(i, j);
  return s;
}

double max_abs(const Mat& A) {
  double m = 0;
  for (int i = 0; i < A.n; ++i)
    for (int j = 0; j < A.n; ++j) m = std::max(m, std::fabs(A(i, j)));
  return m;
}

double max_asymmetry(const Mat& A) {
  double m = 0;
  for (int i = 0; i < A.n; ++i)
    for (int j = i + 1; j < A.n; ++j)
      m = std::max(m, std::fabs(A(i, j) - A(j, i)));
  return m;
}

namespace {

EigenSym eigen_sym_2x2(const Mat& A) {
  const double a = A(0, 0);
  const double b = 0.5 * (A(0, 1) + A(1, 0));
  const double c = A(1, 1);

  EigenSym out;
  out.values = Vec(2);
  out.vectors = Mat(2);

  if (b == 0.0) {
    if (a <= c) {
      out.values = {a, c};
      out.vectors(0, 0) = 1.0;
      out.vectors(1, 1) = 1.0;
    } else {
      out.values = {c, a};
      out.vectors(1, 0) = 1.0;
      out.vectors(0, 1) = 1.0;
    }
    return out;
  }

  const double mu = 0.5 * (a + c);
  const double disc = std::hypot(0.5 * (a - c), b);
  const double det = a * c - b * b;
  // Take the larger-magnitude root directly, recover the other from the
  // determinant so near-zero eigenvalues keep their digits.
  double big = (mu >= 0.0) ? mu + disc : mu - disc;
  double small = (big != 0.0) ? det / big : mu - disc;
  double lo = std::min(big, small);
  double hi = std::max(big, small);

  const double theta = 0.5 * std::atan2(2.0 * b, a - c);
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  // Rotation angle theta sends (ct, st) to the eigenvalue
  // d1 = a ct^2 + 2 b ct st + c st^2; pair columns by proximity.
  const double d1 = a * ct * ct + 2.0 * b * ct * st + c * st * st;
  const bool first_is_lo = std::fabs(d1 - lo) <= std::fabs(d1 - hi);

  out.values = {lo, hi};
  if (first_is_lo) {
    out.vectors(0, 0) = ct;
    out.vectors(1, 0) = st;
    out.vectors(0, 1) = -st;
    out.vectors(1, 1) = ct;
  } else {
    out.vectors(0, 0) = -st;
    out.vectors(1, 0) = ct;
    out.vectors(0, 1) = ct;
    out.vectors(1, 1) = st;
  }
  return out;
}

EigenSym eigen_sym_jacobi(const Mat& A_in) {
  const int n = A_in.n;
  Mat A = A_in;
  symmetrize(A);
  Mat V = identity(n);

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0, diag = 0;
    for (int i = 0; i < n; ++i) {
      diag += A(i, i) * A(i, i);
      for (int j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
    }
    if (off <= 1e-30 * (diag + off) || off == 0.0) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (apq == 0.0) continue;
        const double scale = std::fabs(A(p, p)) + std::fabs(A(q, q));
        if (scale + std::fabs(apq) * 1e18 == scale) {
          A(p, q) = A(q, p) = 0.0;
          continue;
        }
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0)
                             ? 1.0 / (theta + std::sqrt(theta * theta + 1.0))
                             : -1.0 / (-theta + std::sqrt(theta * theta + 1.0));
        const double cth = 1.0 / std::sqrt(t * t + 1.0);
        const double sth = t * cth;
        const double tau = sth / (1.0 + cth);
        const double app = A(p, p), aqq = A(q, q);

        A(p, p) = app - t * apq;
        A(q, q) = aqq + t * apq;
        A(p, q) = A(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = A(p, k) = akp - sth * (akq + tau * akp);
          A(k, q) = A(q, k) = akq + sth * (akp - tau * akq);
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = vkp - sth * (vkq + tau * vkp);
          V(k, q) = vkq + sth * (vkp - tau * vkq);
        }
      }
    }
  }

  std::array<int, kMaxDim> order{};
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.begin() + n,
                   [&](int i, int j) { return A(i, i) < A(j, j); });

  EigenSym out;
  out.values = Vec(n);
  out.vectors = Mat(n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = A(order[k], order[k]);
    for (int r = 0; r < n; ++r) out.vectors(r, k) = V(r, order[k]);
  }
  return out;
}

}  // namespace

EigenSym eigen_sym(const Mat& A) {
  assert(A.n >= 1 && A.n <= kMaxDim);
  if (A.n == 1) {
    EigenSym out;
    out.values = Vec(1);
    out.values[0] = A(0, 0);
    out.vectors = identity(1);
    return out;
  }
  if (A.n == 2) return eigen_sym_2x2(A);
  return eigen_sym_jacobi(A);
}

Vec eigenvalues_sym(const Mat& A) { return eigen_sym(A).values; }

}  // namespace hcg
