#include <cmath>
#include <limits>

#include "doctest.h"
#include "hcg/barrier.hpp"
#include "hcg/errors.hpp"
#include "hcg/grid.hpp"
#include "hcg/shape.hpp"

using namespace hcg;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

ScalarField cap_field(const GridDomain& dom, const EquidistantSphere& sph,
                      double eps) {
  ScalarField f;
  f.eps = eps;
  f.converged = true;
  f.admissible = true;
  f.values.resize(dom.num_nodes());
  for (int k = 0; k < dom.num_nodes(); ++k) {
    Vec x{dom.nodes()[k].x, dom.nodes()[k].y};
    f.values[k] = cap_height(sph, x);
  }
  return f;
}
}  // namespace

TEST_CASE("sphere geometry accessors") {
  EquidistantSphere sph;
  sph.center = Vec{0.0, 0.0};
  sph.radius = 2.0;
  sph.sigma = 0.5;
  CHECK(sph.footprint_radius() == doctest::Approx(2.0 * std::sqrt(0.75)).epsilon(1e-15));
  CHECK(sph.cross_section_radius(0.0) ==
        doctest::Approx(sph.footprint_radius()).epsilon(1e-14));
  // slice through the equator has the full radius
  CHECK(sph.cross_section_radius(-sph.sigma * sph.radius) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sph.cross_section_radius(10.0) == 0.0);
}

TEST_CASE("cap height worked values and footprint errors") {
  EquidistantSphere sph;
  sph.center = Vec{0.0, 0.0};
  sph.radius = 1.0;
  sph.sigma = 0.5;
  CHECK(cap_height(sph, Vec{0.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-15));
  double foot = sph.footprint_radius();
  CHECK(cap_height(sph, Vec{0.99 * foot, 0.0}) > 0);
  // exactly at the footprint the height is zero up to roundoff, so probe
  // strictly outside
  CHECK_THROWS_AS(cap_height(sph, Vec{foot * (1 + 1e-12), 0.0}),
                  OutsideFootprint);
  CHECK_THROWS_AS(cap_height(sph, Vec{2.0, 0.0}), OutsideFootprint);

  EquidistantSphere upper = sph;
  upper.side = SphereSide::Upper;
  CHECK_THROWS_AS(cap_height(upper, Vec{0.0, 0.0}), PreconditionViolated);
}

TEST_CASE("cap derivatives match finite differences") {
  EquidistantSphere sph;
  sph.center = Vec{0.1, -0.2};
  sph.radius = 1.3;
  sph.sigma = 0.6;
  Vec x{0.4, 0.1};
  double u;
  Vec du;
  Mat d2u;
  cap_derivatives(sph, x, u, du, d2u);
  CHECK(u == doctest::Approx(cap_height(sph, x)).epsilon(1e-15));

  const double s = 1e-6;
  for (int i = 0; i < 2; ++i) {
    Vec xp = x, xm = x;
    xp[i] += s;
    xm[i] -= s;
    double fd = (cap_height(sph, xp) - cap_height(sph, xm)) / (2 * s);
    CHECK(du[i] == doctest::Approx(fd).epsilon(1e-8));
    for (int j = 0; j < 2; ++j) {
      Vec a = x, b = x;
      a[i] += s;
      b[i] -= s;
      double up1, um1;
      Vec t;
      Mat tt;
      cap_derivatives(sph, a, up1, t, tt);
      double dup = t[j];
      cap_derivatives(sph, b, um1, t, tt);
      double dum = t[j];
      CHECK(d2u(i, j) == doctest::Approx((dup - dum) / (2 * s)).epsilon(1e-7));
    }
  }
  // the cap has constant hyperbolic curvature sigma
  GraphPointState st = hyperbolic_shape(u, du, d2u);
  CHECK(st.kappa[0] == doctest::Approx(sph.sigma).epsilon(1e-11));
  CHECK(st.kappa[1] == doctest::Approx(sph.sigma).epsilon(1e-11));
}

TEST_CASE("sphere radii: closed forms and defining equations") {
  // eps = 0: R^2 = r^2 + sigma^2 R^2, so R = r / sqrt(1 - sigma^2)
  SphereRadii r0 = sphere_radii(0.5, 0.0, 1.0, kInf);
  CHECK(r0.R1 == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(std::isinf(r0.R2));

  SphereRadii r1 = sphere_radii(0.5, 0.01, 1.0, kInf);
  CHECK(r1.R1 == doctest::Approx(1.16144418251598).epsilon(1e-12));
  // defining equation R1^2 = r1^2 + (R1 sigma + eps)^2
  double lhs = r1.R1 * r1.R1;
  double rhs = 1.0 + (0.5 * r1.R1 + 0.01) * (0.5 * r1.R1 + 0.01);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));

  SphereRadii r2 = sphere_radii(0.5, 0.01, 1.0, 2.0);
  CHECK(r2.R2 * r2.R2 ==
        doctest::Approx(4.0 + (0.5 * r2.R2 - 0.01) * (0.5 * r2.R2 - 0.01))
            .epsilon(1e-13));
  CHECK(r2.R2 > r2.R1);

  // monotone in eps: raising the boundary fattens the lower sphere
  CHECK(sphere_radii(0.5, 0.05, 1.0, kInf).R1 > r1.R1);

  CHECK_THROWS_AS(sphere_radii(1.0, 0.0, 1.0, kInf), PreconditionViolated);
  CHECK_THROWS_AS(sphere_radii(0.5, -0.1, 1.0, kInf), PreconditionViolated);
  CHECK_THROWS_AS(sphere_radii(0.5, 0.1, 0.0, kInf), PreconditionViolated);
}

TEST_CASE("boundary angle envelope worked values") {
  AngleBounds b = angle_bounds(0.5, 0.01, 1.0, kInf);
  CHECK(b.upper == doctest::Approx(0.008710254037844386).epsilon(1e-14));
  CHECK(b.lower == doctest::Approx(0.0));

  AngleBounds bf = angle_bounds(0.5, 0.01, 1.0, 2.0);
  CHECK(bf.upper == doctest::Approx(0.008710254037844386).epsilon(1e-14));
  CHECK(bf.lower ==
        doctest::Approx(-(0.01 * std::sqrt(0.75) / 2.0 + 1e-4 * 1.5 / 4.0))
            .epsilon(1e-14));

  // envelope shrinks linearly with eps
  AngleBounds half = angle_bounds(0.5, 0.005, 1.0, kInf);
  CHECK(half.upper < 0.51 * b.upper);
}

TEST_CASE("barrier audit accepts the exact cap solution on a disk") {
  double sigma = 0.5, eps = 0.01;
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 16);
  EquidistantSphere sph;
  sph.center = Vec{0.0, 0.0};
  sph.radius = sphere_radii(sigma, eps, 1.0, kInf).R1;
  sph.sigma = sigma;
  ScalarField field = cap_field(dom, sph, eps);

  BarrierAuditReport rep = barrier_audit(field, dom, sigma, eps);
  CHECK(rep.converged_input);
  CHECK(rep.inclusion_tol == doctest::Approx(5.0 / 256.0));
  REQUIRE(rep.checks.size() == 4);
  CHECK(rep.checks[0].name == "height_floor");
  CHECK(rep.checks[1].name == "circumscribed_inclusion");
  CHECK(rep.checks[2].name == "inscribed_disjoint");
  CHECK(rep.checks[3].name == "exterior_disjoint");
  CHECK(rep.checks[0].pass);
  CHECK(rep.checks[1].pass);
  CHECK(rep.checks[2].pass);
  CHECK_FALSE(rep.checks[3].applicable);  // r2 infinite for a disk
  CHECK(rep.pass());

  // for the disk the circumscribed and inscribed spheres coincide with the
  // solution sphere, so both slacks are essentially the tolerance itself
  CHECK(std::fabs(rep.checks[1].worst_slack - rep.inclusion_tol) < 1e-6);
  CHECK(std::fabs(rep.checks[2].worst_slack - rep.inclusion_tol) < 1e-6);
}

TEST_CASE("barrier audit exercises exterior spheres when r2 is finite") {
  // a disk admits exterior tangent disks of any radius; declaring r2 = 2
  // turns the exterior check on without changing the geometry
  double sigma = 0.5, eps = 0.01;
  DomainShape shp = make_disk(1.0);
  shp.r2 = 2.0;
  GridDomain dom = GridDomain::build(shp, 1.0 / 16);
  EquidistantSphere sph;
  sph.center = Vec{0.0, 0.0};
  sph.radius = sphere_radii(sigma, eps, 1.0, kInf).R1;
  sph.sigma = sigma;
  ScalarField field = cap_field(dom, sph, eps);

  BarrierAuditReport rep = barrier_audit(field, dom, sigma, eps);
  REQUIRE(rep.checks.size() == 4);
  CHECK(rep.checks[3].applicable);
  CHECK(rep.checks[3].pass);
  CHECK(rep.pass());
}

TEST_CASE("barrier audit flags an out-of-position field") {
  double sigma = 0.5, eps = 0.01;
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 16);
  EquidistantSphere sph;
  sph.center = Vec{0.0, 0.0};
  sph.radius = sphere_radii(sigma, eps, 1.0, kInf).R1;
  sph.sigma = sigma;

  // dipping below the boundary height breaks the floor check
  ScalarField low = cap_field(dom, sph, eps);
  low.values[0] = eps / 2;
  BarrierAuditReport rep1 = barrier_audit(low, dom, sigma, eps);
  CHECK_FALSE(rep1.checks[0].pass);
  CHECK_FALSE(rep1.pass());

  // bulging far above the circumscribed sphere breaks the inclusion
  ScalarField high = cap_field(dom, sph, eps);
  for (double& v : high.values) v += 0.5;
  BarrierAuditReport rep2 = barrier_audit(high, dom, sigma, eps);
  CHECK_FALSE(rep2.checks[1].pass);
  CHECK_FALSE(rep2.pass());

  ScalarField wrong_size;
  wrong_size.values = {1.0, 2.0};
  CHECK_THROWS_AS(barrier_audit(wrong_size, dom, sigma, eps), PreconditionViolated);
}
