#pragma once

// Closed-form scalar functions behind the global curvature bound, plus the
// grid checks that certify their sign properties.
//
//   phi(a)        = (8/3) a + (22/27) a^3 - (5/27) (a^2 + 3)^{3/2}
//   sigma0        = unique zero of phi in (0, 1)
//   gamma_y(y; a) = a - 2 (1 - y^2)(y - a)
//   phi_theta(y)  = gamma_y - (a - gamma_y) / (4 (1 - theta)) + a^3
//
// phi(a) > 0 makes the curvature-ratio test function usable at angle offset
// a; the solver can therefore certify interior curvature bounds only for
// sigma above sigma0.

namespace hcg {

double phi(double a);
double phi_prime(double a);

// Zero of phi in (0,1), bisected to 1e-14.  Throws BracketFailure if the
// endpoints fail to bracket a sign change.
double sigma0();

// Requires a in (0,1) and y in (a, 1]; throws DomainError otherwise.
double gamma_y(double y, double a);

// Requires additionally theta in [0,1).
double phi_theta(double y, double a, double theta);

// Closed-form lower bound for gamma_y over y in (a,1), valid when a^2 > 1/8:
// (7/3) a - (4/27) a^3 - (4/27) (a^2 + 3)^{3/2}.
double gamma_lower_bound(double a);

struct ThetaSearch {
  bool exists = false;      // some theta > 0 keeps min_y phi_theta positive
  double theta_max = 0;     // largest such theta found by bisection
  double min_phi_at_zero = 0;  // min over the y grid at theta -> 0
};

// Scans min over a midpoint grid of y in (a,1) and bisects for the largest
// theta with a positive minimum.
ThetaSearch largest_positive_theta(double a, int y_grid = 2001);

}  // namespace hcg
