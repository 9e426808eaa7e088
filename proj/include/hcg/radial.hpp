#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hcg/curvature_family.hpp"

// Rotationally symmetric reduction on a disk of radius r_b: a profile u(r)
// has one meridian curvature and n-1 tangential ones,
//   kappa_1   = u u'' / w^3 + 1/w,
//   kappa_tan = u u'  / (r w) + 1/w        (-> kappa_1 as r -> 0),
// and f(kappa) = sigma collocated with second-order central differences on
// a uniform mesh gives a high-accuracy reference for disk runs.

namespace hcg {

struct RadialProfile {
  std::vector<double> r;
  std::vector<double> u;
  double sigma = 0;
  double eps = 0;
  double r_b = 0;
  int n = 0;
  std::string family_label;
  bool converged = false;
  int newton_iters = 0;
  double residual_norm = 0;
  double max_w = 0;          // node gradients plus the boundary slope
  double boundary_w = 0;     // w extrapolated to r = r_b
  double boundary_nu = 0;    // 1/boundary_w
};

// f(kappa(u, u', u'', r)) - sigma for an n-dimensional profile; r = 0 takes
// the symmetric limit u'/r -> u''.
double radial_residual(const CurvatureFamily& fam, double sigma, double u,
                       double up, double upp, double r);

struct RadialOptions {
  int mesh_size = 2048;
  double newton_tol = 1e-10;
  int max_newton_iters = 60;
  double min_step = 1.0 / (1 << 20);
  double cone_floor = 1e-12;
};

// Damped Newton from the spherical-cap initial iterate through (r_b, eps).
// Throws NoCapInitializer, NewtonDiverged, or LineSearchStalled.
RadialProfile solve_radial(const CurvatureFamily& fam, double sigma,
                           double eps, double r_b,
                           const RadialOptions& opts = {});

// Experimental: position-dependent forcing sigma(r) for cross-validation
// runs.  The constant-sigma entry point is the supported surface.
RadialProfile solve_radial_forced(const CurvatureFamily& fam,
                                  const std::function<double(double)>& sigma_r,
                                  double sigma_for_init, double eps, double r_b,
                                  const RadialOptions& opts = {});

// Cubic interpolation of the profile at radius r in [0, r_b].
double profile_value(const RadialProfile& prof, double r);

}  // namespace hcg
