#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hcg/grid.hpp"
#include "hcg/smallmat.hpp"

// Equidistant spheres: Euclidean spheres of radius R centered at signed
// height -sigma R (side Lower) or +sigma R (side Upper).  Their upper caps
// are graphs with all hyperbolic principal curvatures equal to sigma, which
// makes them exact barriers for the Dirichlet problem.

namespace hcg {

enum class SphereSide { Lower, Upper };

struct EquidistantSphere {
  Vec center;  // horizontal center, n components
  double radius = 0;
  double sigma = 0;
  SphereSide side = SphereSide::Lower;

  // Horizontal radius of the region where the cap stays above height 0.
  double footprint_radius() const;
  // Horizontal radius of the sphere's slice at a given height.
  double cross_section_radius(double height) const;
};

// Cap height sqrt(R^2 - |x - center|^2) - sigma R for a Lower sphere;
// throws OutsideFootprint when the height would be nonpositive.
double cap_height(const EquidistantSphere& sph, const Vec& x);

// Height together with its analytic gradient and Hessian.
void cap_derivatives(const EquidistantSphere& sph, const Vec& x, double& u,
                     Vec& du, Mat& d2u);

struct SphereRadii {
  double R1 = 0;  // lower sphere through the r1-circle at height eps
  double R2 = 0;  // upper sphere through the r2-circle at height eps
};

// Solves R1^2 = r1^2 + (R1 sigma + eps)^2 and R2^2 = r2^2 + (R2 sigma - eps)^2.
// r2 may be infinite, giving R2 infinite.
SphereRadii sphere_radii(double sigma, double eps, double r1, double r2);

struct AngleBounds {
  double lower = 0;  // bound below on nu^{n+1} - sigma at the boundary
  double upper = 0;
};

// Envelope  -eps sqrt(1-sigma^2)/r2 - eps^2 (1+sigma)/r2^2
//        <  nu^{n+1} - sigma
//        <   eps sqrt(1-sigma^2)/r1 + eps^2 (1-sigma)/r1^2.
AngleBounds angle_bounds(double sigma, double eps, double r1, double r2);

struct BarrierCheck {
  std::string name;
  double worst_slack = 0;
  bool applicable = true;
  bool pass = true;
};

struct BarrierAuditReport {
  bool converged_input = false;  // set from the field's converged marker
  double inclusion_tol = 0;
  std::vector<BarrierCheck> checks;
  bool pass() const;
};

// Position checks for a solved field against the sphere barriers:
//   (i)    height floor      min u >= eps           (slack tolerance 1e-10)
//   (ii)   circumscribed     graph inside the lower sphere through the
//                            circumscribed circle of the domain
//   (iii)  inscribed         graph outside the lower sphere through the
//                            largest centered inscribed circle
//   (iv)   exterior          graph outside upper spheres tangent from
//                            outside (skipped when r2 is infinite)
// The inclusion tolerance absorbs the scheme's O(h^2) solution error; it
// defaults to 5 h^2.
BarrierAuditReport barrier_audit(const ScalarField& field,
                                 const GridDomain& dom, double sigma,
                                 double eps,
                                 std::optional<double> inclusion_tol = {});

}  // namespace hcg
