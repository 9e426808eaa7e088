#include "hcg/scalar_bounds.hpp"

#include <cmath>

#include "hcg/errors.hpp"

namespace hcg {

double phi(double a) {
  const double s = std::sqrt(a * a + 3.0);
  return (8.0 / 3.0) * a + (22.0 / 27.0) * a * a * a -
         (5.0 / 27.0) * s * s * s;
}

double phi_prime(double a) {
  return 8.0 / 3.0 + (22.0 / 9.0) * a * a -
         (5.0 / 9.0) * a * std::sqrt(a * a + 3.0);
}

double sigma0() {
  double lo = 1e-12, hi = 1.0 - 1e-12;
  double flo = phi(lo), fhi = phi(hi);
  if (!(flo < 0.0 && fhi > 0.0))
    throw BracketFailure("phi does not change sign on (0,1)");
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

static void check_ay(double y, double a) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("a must lie in (0,1)");
  if (!(y > a && y <= 1.0)) throw DomainError("y must lie in (a, 1]");
}

double gamma_y(double y, double a) {
  check_ay(y, a);
  return a - 2.0 * (1.0 - y * y) * (y - a);
}

double phi_theta(double y, double a, double theta) {
  check_ay(y, a);
  if (!(theta >= 0.0 && theta < 1.0)) throw DomainError("theta must lie in [0,1)");
  const double g = a - 2.0 * (1.0 - y * y) * (y - a);
  return g - (a - g) / (4.0 * (1.0 - theta)) + a * a * a;
}

double gamma_lower_bound(double a) {
  const double s = std::sqrt(a * a + 3.0);
  return (7.0 / 3.0) * a - (4.0 / 27.0) * a * a * a - (4.0 / 27.0) * s * s * s;
}

ThetaSearch largest_positive_theta(double a, int y_grid) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("a must lie in (0,1)");
  if (y_grid < 2) throw PreconditionViolated("y_grid must be >= 2");

  const auto grid_min = [&](double theta) {
    double m = 1e300;
    for (int i = 0; i < y_grid; ++i) {
      const double y = a + (i + 0.5) * (1.0 - a) / y_grid;
      m = std::min(m, phi_theta(y, a, theta));
    }
    return m;
  };

  ThetaSearch out;
  out.min_phi_at_zero = grid_min(0.0);
  out.exists = out.min_phi_at_zero > 0.0;
  if (!out.exists) return out;

  // min_y phi_theta is strictly decreasing in theta (a - gamma_y > 0 on the
  // open interval), so a plain bisection brackets the sign change.
  double lo = 0.0, hi = 1.0 - 1e-9;
  if (grid_min(hi) > 0.0) {
    out.theta_max = hi;
    return out;
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (grid_min(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  out.theta_max = lo;
  return out;
}

}  // namespace hcg
