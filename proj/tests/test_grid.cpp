#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "hcg/errors.hpp"
#include "hcg/grid.hpp"

using namespace hcg;

namespace {

// arm index pointing the opposite way, matching the E,W,N,S,NE,SW,NW,SE order
int opposite_arm(int a) { return a ^ 1; }

}  // namespace

TEST_CASE("shape constructors validate their arguments") {
  CHECK_THROWS_AS(make_disk(0.0), PreconditionViolated);
  CHECK_THROWS_AS(make_ellipse(1.0, -0.5), PreconditionViolated);
  CHECK_THROWS_AS(make_stadium(0.0, 1.0), PreconditionViolated);
  CHECK_THROWS_AS(GridDomain::build(make_disk(1.0), 0.0), PreconditionViolated);
  CHECK_THROWS_AS(GridDomain::build(make_disk(1.0), -0.1), PreconditionViolated);
}

TEST_CASE("disk shape metadata") {
  DomainShape d = make_disk(1.0);
  CHECK(d.r1 == doctest::Approx(1.0));
  CHECK(std::isinf(d.r2));
  CHECK(d.incircle == doctest::Approx(1.0));
  CHECK(d.circumradius == doctest::Approx(1.0));
  CHECK(d.level(0.0, 0.0) < 0);
  CHECK(d.level(2.0, 0.0) > 0);
}

TEST_CASE("ellipse normalizes axis order") {
  DomainShape e1 = make_ellipse(1.0, 0.7);
  DomainShape e2 = make_ellipse(0.7, 1.0);
  CHECK(e1.r1 == doctest::Approx(e2.r1));
  CHECK(e1.circumradius == doctest::Approx(1.0));
  CHECK(e1.incircle == doctest::Approx(0.7));
  // interior tangent disks are limited by the tightest curvature a/b^2
  CHECK(e1.r1 == doctest::Approx(0.49).epsilon(1e-12));
  CHECK(std::isinf(e1.r2));  // convex
}

TEST_CASE("stadium metadata") {
  DomainShape s = make_stadium(0.8, 0.5);
  CHECK(s.r1 == doctest::Approx(0.5));
  CHECK(std::isinf(s.r2));
  CHECK(s.incircle == doctest::Approx(0.5));
  CHECK(s.circumradius == doctest::Approx(1.3));
  CHECK(s.level(1.29, 0.0) < 0);
  CHECK(s.level(1.31, 0.0) > 0);
  CHECK(s.level(0.0, 0.49) < 0);
  CHECK(s.level(0.0, 0.51) > 0);
}

TEST_CASE("disk grid structural invariants") {
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 16);
  const auto& nodes = dom.nodes();
  REQUIRE(dom.num_nodes() > 0);

  int boundary_adjacent = 0;
  for (int k = 0; k < dom.num_nodes(); ++k) {
    const GridNode& nd = nodes[k];
    CHECK(dom.shape().level(nd.x, nd.y) < 0);
    CHECK(dom.index_of(nd.i, nd.j) == k);

    bool any_cut = false;
    for (int a = 0; a < kArmCount; ++a) {
      const Arm& arm = nd.arms[a];
      if (arm.neighbor >= 0) {
        // full arm reaches the lattice neighbor, and the relation is mutual
        CHECK(arm.theta == 1.0);
        const GridNode& nb = nodes[arm.neighbor];
        CHECK(nb.i == nd.i + kArmDir[a][0]);
        CHECK(nb.j == nd.j + kArmDir[a][1]);
        CHECK(nb.arms[opposite_arm(a)].neighbor == k);
      } else {
        any_cut = true;
        CHECK(arm.theta > 0.0);
        CHECK(arm.theta <= 1.0);
      }
    }
    if (any_cut) {
      CHECK(nd.cls == NodeClass::BoundaryAdjacent);
      ++boundary_adjacent;
    } else {
      CHECK(nd.cls == NodeClass::Interior);
    }
  }
  CHECK(boundary_adjacent > 0);
  CHECK(boundary_adjacent < dom.num_nodes());

  // area scaling: node count ~ pi / h^2
  GridDomain fine = GridDomain::build(make_disk(1.0), 1.0 / 32);
  double ratio = static_cast<double>(fine.num_nodes()) / dom.num_nodes();
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("disk boundary cuts sit on the circle with radial normals") {
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 24);
  REQUIRE(!dom.boundary_cuts().empty());
  for (const BoundaryCut& cut : dom.boundary_cuts()) {
    // cuts are tracked for the four axis arms
    CHECK(cut.arm >= 0);
    CHECK(cut.arm < 4);
    REQUIRE(cut.node >= 0);
    const GridNode& nd = dom.nodes()[cut.node];
    CHECK(nd.arms[cut.arm].neighbor == -1);

    double r = std::hypot(cut.point.x, cut.point.y);
    CHECK(std::fabs(r - 1.0) < 1e-10);
    double nx = cut.point.x / r, ny = cut.point.y / r;
    // the normal comes from differencing the level set, so it matches the
    // exact radial direction only to the square of the probe step
    CHECK(cut.normal_out.x == doctest::Approx(nx).epsilon(1e-7));
    CHECK(cut.normal_out.y == doctest::Approx(ny).epsilon(1e-7));
    double nn = std::hypot(cut.normal_out.x, cut.normal_out.y);
    CHECK(nn == doctest::Approx(1.0).epsilon(1e-12));

    // the cut point matches the node plus theta times the arm vector
    double theta = nd.arms[cut.arm].theta;
    double px = nd.x + theta * dom.h() * kArmDir[cut.arm][0];
    double py = nd.y + theta * dom.h() * kArmDir[cut.arm][1];
    CHECK(px == doctest::Approx(cut.point.x).epsilon(1e-12));
    CHECK(py == doctest::Approx(cut.point.y).epsilon(1e-12));
  }
}

TEST_CASE("boundary curvature sampling") {
  GridDomain disk = GridDomain::build(make_disk(1.0), 1.0 / 16);
  CHECK(disk.min_boundary_curvature() == doctest::Approx(1.0).epsilon(1e-4));

  GridDomain disk2 = GridDomain::build(make_disk(0.5), 1.0 / 32);
  CHECK(disk2.min_boundary_curvature() == doctest::Approx(2.0).epsilon(1e-4));

  // ellipse: smallest curvature b/a^2 at the flat ends of the long axis
  GridDomain ell = GridDomain::build(make_ellipse(1.0, 0.7), 1.0 / 24);
  CHECK(ell.min_boundary_curvature() == doctest::Approx(0.7).epsilon(0.05));
  CHECK(ell.min_boundary_curvature() > 0);

  // stadium: straight sides have zero curvature
  GridDomain stad = GridDomain::build(make_stadium(0.8, 0.5), 1.0 / 24);
  CHECK(std::fabs(stad.min_boundary_curvature()) < 0.02);
}

TEST_CASE("sampled level sets reproduce a disk approximately") {
  const int ns = 161;
  const double half = 1.2;
  std::vector<double> vals(ns * ns);
  for (int j = 0; j < ns; ++j) {
    for (int i = 0; i < ns; ++i) {
      double x = -half + 2 * half * i / (ns - 1);
      double y = -half + 2 * half * j / (ns - 1);
      vals[j * ns + i] = x * x + y * y - 1.0;
    }
  }
  DomainShape shp = make_sampled(vals, ns, ns, half, half);
  GridDomain dom = GridDomain::build(shp, 1.0 / 16);

  GridDomain ref = GridDomain::build(make_disk(1.0), 1.0 / 16);
  // same resolution, nearly the same node set
  CHECK(std::abs(dom.num_nodes() - ref.num_nodes()) <= 8);
  for (const GridNode& nd : dom.nodes()) {
    CHECK(nd.x * nd.x + nd.y * nd.y < 1.0 + 1e-6);
  }
  for (const BoundaryCut& cut : dom.boundary_cuts()) {
    double r = std::hypot(cut.point.x, cut.point.y);
    CHECK(std::fabs(r - 1.0) < 5e-3);  // bilinear boundary error
  }
  // a bilinear interpolant is ruled inside each sample cell, so the
  // small-step curvature probe reads (near) zero there, not the circle's 1
  CHECK(std::fabs(dom.min_boundary_curvature()) < 1e-6);
}

TEST_CASE("index_of rejects out-of-range lattice coordinates") {
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 8);
  int mx = dom.lattice_extent_x(), my = dom.lattice_extent_y();
  CHECK(dom.index_of(mx + 1, 0) == -1);
  CHECK(dom.index_of(0, -my - 1) == -1);
  CHECK(dom.index_of(mx, my) == -1);  // corner of the bounding box is outside
  CHECK(dom.index_of(0, 0) >= 0);
}
