#include "hcg/barrier.hpp"

#include <cmath>
#include <limits>

#include "hcg/errors.hpp"

namespace hcg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_sigma_eps(double sigma, double eps) {
  if (!(sigma > 0.0 && sigma < 1.0))
    throw PreconditionViolated("sigma must lie in (0,1)");
  if (!(eps >= 0.0)) throw PreconditionViolated("eps must be nonnegative");
}

}  // namespace

double EquidistantSphere::footprint_radius() const {
  return radius * std::sqrt(1.0 - sigma * sigma);
}

double EquidistantSphere::cross_section_radius(double height) const {
  const double d = (side == SphereSide::Lower) ? sigma * radius + height
                                               : sigma * radius - height;
  const double s2 = radius * radius - d * d;
  return s2 > 0 ? std::sqrt(s2) : 0.0;
}

double cap_height(const EquidistantSphere& sph, const Vec& x) {
  if (sph.side != SphereSide::Lower)
    throw PreconditionViolated("cap heights are defined for Lower spheres");
  double rho2 = 0;
  for (int i = 0; i < x.n; ++i) {
    const double d = x[i] - sph.center[i];
    rho2 += d * d;
  }
  const double s2 = sph.radius * sph.radius - rho2;
  if (s2 <= 0) throw OutsideFootprint("point outside the sphere shadow");
  const double u = std::sqrt(s2) - sph.sigma * sph.radius;
  if (u <= 0) throw OutsideFootprint("point outside the cap footprint");
  return u;
}

void cap_derivatives(const EquidistantSphere& sph, const Vec& x, double& u,
                     Vec& du, Mat& d2u) {
  u = cap_height(sph, x);
  const double s = u + sph.sigma * sph.radius;  // sqrt(R^2 - rho^2)
  du = Vec(x.n);
  d2u = Mat(x.n);
  for (int i = 0; i < x.n; ++i) du[i] = -(x[i] - sph.center[i]) / s;
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) {
      const double di = x[i] - sph.center[i];
      const double dj = x[j] - sph.center[j];
      d2u(i, j) = -((i == j ? 1.0 : 0.0) / s + di * dj / (s * s * s));
    }
}

SphereRadii sphere_radii(double sigma, double eps, double r1, double r2) {
  validate_sigma_eps(sigma, eps);
  if (!(r1 > 0)) throw PreconditionViolated("r1 must be positive");
  if (!(r2 > 0)) throw PreconditionViolated("r2 must be positive");

  SphereRadii out;
  // Reciprocal forms stay finite for all admissible parameters:
  //   1/R1 = (sqrt((1-s^2) r1^2 + e^2) - e s) / (r1^2 + e^2)
  //   1/R2 = (sqrt((1-s^2) r2^2 + e^2) + e s) / (r2^2 + e^2)
  const double one_m = 1.0 - sigma * sigma;
  const double inv_R1 = (std::sqrt(one_m * r1 * r1 + eps * eps) - eps * sigma) /
                        (r1 * r1 + eps * eps);
  out.R1 = 1.0 / inv_R1;
  if (std::isinf(r2)) {
    out.R2 = kInf;
  } else {
    const double inv_R2 =
        (std::sqrt(one_m * r2 * r2 + eps * eps) + eps * sigma) /
        (r2 * r2 + eps * eps);
    out.R2 = 1.0 / inv_R2;
  }
  return out;
}

AngleBounds angle_bounds(double sigma, double eps, double r1, double r2) {
  validate_sigma_eps(sigma, eps);
  if (!(r1 > 0)) throw PreconditionViolated("r1 must be positive");
  if (!(r2 > 0)) throw PreconditionViolated("r2 must be positive");
  const double root = std::sqrt(1.0 - sigma * sigma);
  AngleBounds b;
  b.upper = eps * root / r1 + eps * eps * (1.0 - sigma) / (r1 * r1);
  b.lower = std::isinf(r2)
                ? 0.0
                : -eps * root / r2 - eps * eps * (1.0 + sigma) / (r2 * r2);
  return b;
}

bool BarrierAuditReport::pass() const {
  for (const auto& c : checks)
    if (c.applicable && !c.pass) return false;
  return true;
}

BarrierAuditReport barrier_audit(const ScalarField& field,
                                 const GridDomain& dom, double sigma,
                                 double eps,
                                 std::optional<double> inclusion_tol) {
  validate_sigma_eps(sigma, eps);
  if (field.values.size() != static_cast<std::size_t>(dom.num_nodes()))
    throw PreconditionViolated("field does not match the domain");

  BarrierAuditReport rep;
  rep.converged_input = field.converged;
  rep.inclusion_tol = inclusion_tol.value_or(5.0 * dom.h() * dom.h());
  const double tol = rep.inclusion_tol;
  const auto& shp = dom.shape();

  // (i) height floor.
  {
    double worst = kInf;
    for (double v : field.values) worst = std::min(worst, v - eps);
    rep.checks.push_back({"height_floor", worst, true, worst >= -1e-10});
  }

  // Graph points (x, y, u) against the lower sphere of radius R centered at
  // (c2, -sigma R); want_inside measures R - dist, otherwise dist - R.
  const auto ball_slack = [&](const Vec2& c2, double R, bool want_inside) {
    double worst = kInf;
    const double cz = -sigma * R;
    for (int idx = 0; idx < dom.num_nodes(); ++idx) {
      const auto& nd = dom.nodes()[idx];
      const double dx = nd.x - c2.x;
      const double dy = nd.y - c2.y;
      const double dz = field.values[idx] - cz;
      const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
      worst = std::min(worst, want_inside ? (R + tol - dist) : (dist + tol - R));
    }
    return worst;
  };

  // (ii) circumscribed sphere: contains the boundary curve at height eps.
  {
    const double R = sphere_radii(sigma, eps, shp.circumradius, kInf).R1;
    const double worst = ball_slack(shp.center, R, true);
    rep.checks.push_back({"circumscribed_inclusion", worst, true, worst >= -1e-9});
  }

  // (iii) inscribed sphere: its slice at height eps stays inside the domain,
  // so the graph must stay outside the ball.
  {
    const double R = sphere_radii(sigma, eps, shp.incircle, kInf).R1;
    const double worst = ball_slack(shp.center, R, false);
    rep.checks.push_back({"inscribed_disjoint", worst, true, worst >= -1e-9});
  }

  // (iv) exterior spheres tangent from outside at sampled boundary cuts.
  {
    BarrierCheck chk{"exterior_disjoint", kInf, true, true};
    if (std::isinf(shp.r2) || dom.boundary_cuts().empty()) {
      chk.applicable = false;
    } else {
      const double R2 = sphere_radii(sigma, eps, shp.r1, shp.r2).R2;
      const std::size_t stride =
          std::max<std::size_t>(1, dom.boundary_cuts().size() / 64);
      for (std::size_t c = 0; c < dom.boundary_cuts().size(); c += stride) {
        const auto& cut = dom.boundary_cuts()[c];
        const Vec2 center{cut.point.x + shp.r2 * cut.normal_out.x,
                          cut.point.y + shp.r2 * cut.normal_out.y};
        const double cz = sigma * R2;
        for (int idx = 0; idx < dom.num_nodes(); ++idx) {
          const auto& nd = dom.nodes()[idx];
          const double dx = nd.x - center.x;
          const double dy = nd.y - center.y;
          const double dz = field.values[idx] - cz;
          chk.worst_slack =
              std::min(chk.worst_slack,
                       std::sqrt(dx * dx + dy * dy + dz * dz) + tol - R2);
        }
      }
      chk.pass = chk.worst_slack >= -1e-9;
    }
    rep.checks.push_back(chk);
  }

  return rep;
}

}  // namespace hcg
