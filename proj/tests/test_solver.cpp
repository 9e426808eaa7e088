#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "doctest.h"
#include "hcg/barrier.hpp"
#include "hcg/errors.hpp"
#include "hcg/grid.hpp"
#include "hcg/linop.hpp"
#include "hcg/radial.hpp"
#include "hcg/solver.hpp"

using namespace hcg;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// quadratic test function, positive over the unit disk
double quad(double x, double y) {
  return 0.6 + 0.1 * x - 0.08 * y + 0.05 * x * x + 0.12 * x * y - 0.07 * y * y;
}

ScalarField fill(const GridDomain& dom, double (*f)(double, double), double eps) {
  ScalarField fld;
  fld.eps = eps;
  fld.values.resize(dom.num_nodes());
  for (int k = 0; k < dom.num_nodes(); ++k)
    fld.values[k] = f(dom.nodes()[k].x, dom.nodes()[k].y);
  return fld;
}

ScalarField exact_cap_field(const GridDomain& dom, double sigma, double eps) {
  double R = sphere_radii(sigma, eps, dom.shape().circumradius, kInf).R1;
  EquidistantSphere sph;
  sph.center = Vec{0.0, 0.0};
  sph.radius = R;
  sph.sigma = sigma;
  ScalarField fld;
  fld.eps = eps;
  fld.values.resize(dom.num_nodes());
  for (int k = 0; k < dom.num_nodes(); ++k) {
    Vec x{dom.nodes()[k].x, dom.nodes()[k].y};
    fld.values[k] = cap_height(sph, x);
  }
  return fld;
}

double sup_norm(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}
}  // namespace

TEST_CASE("stencil weights differentiate quadratics exactly") {
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 12);
  ScalarField fld = fill(dom, quad, 0.0);
  double h = dom.h();

  for (int k = 0; k < dom.num_nodes(); ++k) {
    const GridNode& nd = dom.nodes()[k];
    NodeEval ev = eval_node(dom, fld, k);
    CHECK(ev.u == doctest::Approx(quad(nd.x, nd.y)).epsilon(1e-15));

    // value point of each slot: the node itself, a full-arm neighbor, or the
    // boundary cut at fraction theta along the arm
    auto slot_value = [&](int s) {
      if (s == 0) return quad(nd.x, nd.y);
      const Arm& arm = nd.arms[s - 1];
      double t = arm.theta;
      return quad(nd.x + t * h * kArmDir[s - 1][0],
                  nd.y + t * h * kArmDir[s - 1][1]);
    };
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int s = 0; s < 9; ++s) {
      double v = slot_value(s);
      sx += ev.wx[s] * v;
      sy += ev.wy[s] * v;
      sxx += ev.wxx[s] * v;
      syy += ev.wyy[s] * v;
      sxy += ev.wxy[s] * v;
    }
    double gx = 0.1 + 0.1 * nd.x + 0.12 * nd.y;
    double gy = -0.08 + 0.12 * nd.x - 0.14 * nd.y;
    CHECK(sx == doctest::Approx(gx).epsilon(1e-9).scale(1.0));
    CHECK(sy == doctest::Approx(gy).epsilon(1e-9).scale(1.0));
    CHECK(sxx == doctest::Approx(0.10).epsilon(1e-8).scale(1.0));
    CHECK(syy == doctest::Approx(-0.14).epsilon(1e-8).scale(1.0));
    CHECK(sxy == doctest::Approx(0.12).epsilon(1e-8).scale(1.0));

    // derivative stencils annihilate constants
    double cx = 0, cxx = 0, cxy = 0;
    for (int s = 0; s < 9; ++s) {
      cx += ev.wx[s];
      cxx += ev.wxx[s];
      cxy += ev.wxy[s];
    }
    CHECK(std::fabs(cx) < 1e-11 / h);
    CHECK(std::fabs(cxx) < 1e-10 / (h * h));
    CHECK(std::fabs(cxy) < 1e-10 / (h * h));

    // interior nodes reproduce the derivatives from the field directly
    if (nd.cls == NodeClass::Interior) {
      CHECK(ev.du[0] == doctest::Approx(gx).epsilon(1e-11));
      CHECK(ev.du[1] == doctest::Approx(gy).epsilon(1e-11));
      CHECK(ev.d2u(0, 0) == doctest::Approx(0.10).epsilon(1e-9));
      CHECK(ev.d2u(1, 1) == doctest::Approx(-0.14).epsilon(1e-9));
      CHECK(ev.d2u(0, 1) == doctest::Approx(0.12).epsilon(1e-9));
    }
  }
}

TEST_CASE("node state matches the pointwise shape pipeline") {
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 12);
  ScalarField fld = exact_cap_field(dom, 0.5, 0.02);
  int mid = dom.index_of(3, 2);
  REQUIRE(mid >= 0);
  NodeEval ev = eval_node(dom, fld, mid);
  GraphPointState st = node_state(dom, fld, mid);
  CHECK(st.u == doctest::Approx(ev.u).epsilon(1e-15));
  CHECK(st.du[0] == doctest::Approx(ev.du[0]).epsilon(1e-14));
  CHECK(st.kappa[0] == doctest::Approx(0.5).epsilon(5e-3));  // cap curvature + O(h^2)
}

TEST_CASE("residual of the exact cap shrinks with the mesh") {
  CurvatureFamily mean = parse_family("mean", 2);
  double r16 = 0, r32 = 0;
  {
    GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 16);
    ScalarField fld = exact_cap_field(dom, 0.5, 0.02);
    r16 = sup_norm(assemble_residual(dom, fld, mean, 0.5));
  }
  {
    GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 32);
    ScalarField fld = exact_cap_field(dom, 0.5, 0.02);
    r32 = sup_norm(assemble_residual(dom, fld, mean, 0.5));
  }
  CHECK(r16 < 0.01);
  CHECK(r32 < 0.7 * r16);
}

TEST_CASE("cone violations are reported with the offending nodes") {
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 12);
  CurvatureFamily mean = parse_family("mean", 2);
  ScalarField fld = exact_cap_field(dom, 0.5, 0.02);
  // a sharp downward spike drives the curvature sum negative at the center
  int c = dom.index_of(0, 0);
  REQUIRE(c >= 0);
  fld.values[c] -= 0.3;
  try {
    assemble_residual(dom, fld, mean, 0.5);
    FAIL("expected ConeViolation");
  } catch (const ConeViolation& e) {
    CHECK(!e.nodes.empty());
    bool involves_center_patch = false;
    for (int idx : e.nodes) {
      const GridNode& nd = dom.nodes()[idx];
      if (std::abs(nd.i) <= 1 && std::abs(nd.j) <= 1) involves_center_patch = true;
    }
    CHECK(involves_center_patch);
  }
}

TEST_CASE("jacobian action matches directional differences") {
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 16);
  CurvatureFamily fam = parse_family("mean", 2);
  ScalarField fld = exact_cap_field(dom, 0.5, 0.02);

  // smooth direction field
  std::vector<double> v(dom.num_nodes());
  for (int k = 0; k < dom.num_nodes(); ++k) {
    const GridNode& nd = dom.nodes()[k];
    v[k] = std::sin(1.7 * nd.x + 0.3) * std::cos(1.3 * nd.y - 0.2);
  }

  std::vector<double> jv = apply_jacobian(dom, fld, fam, 0.5, v);

  const double s = 1e-6;
  ScalarField fp = fld, fm = fld;
  for (int k = 0; k < dom.num_nodes(); ++k) {
    fp.values[k] += s * v[k];
    fm.values[k] -= s * v[k];
  }
  std::vector<double> rp = assemble_residual(dom, fp, fam, 0.5);
  std::vector<double> rm = assemble_residual(dom, fm, fam, 0.5);

  double scale = sup_norm(jv);
  REQUIRE(scale > 0);
  for (int k = 0; k < dom.num_nodes(); ++k) {
    double fd = (rp[k] - rm[k]) / (2 * s);
    CHECK(std::fabs(fd - jv[k]) <= 1e-5 * (1.0 + scale));
  }
}

TEST_CASE("banded assembly agrees with the matrix-free action") {
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 12);
  CurvatureFamily fam = parse_family("mean", 2);
  ScalarField fld = exact_cap_field(dom, 0.5, 0.02);

  std::vector<double> v(dom.num_nodes());
  for (int k = 0; k < dom.num_nodes(); ++k) {
    const GridNode& nd = dom.nodes()[k];
    v[k] = 0.3 + 0.2 * std::sin(2.1 * nd.x) + 0.1 * nd.y;
  }
  std::vector<double> jv = apply_jacobian(dom, fld, fam, 0.5, v);

  // solving the banded system against J v must return v
  BandedMatrix J = assemble_jacobian(dom, fld, fam, 0.5);
  std::vector<double> sol = jv;
  REQUIRE(J.solve(sol));
  for (int k = 0; k < dom.num_nodes(); ++k)
    CHECK(std::fabs(sol[k] - v[k]) < 1e-8);
}

TEST_CASE("newton polishes the exact cap in a few steps") {
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 16);
  CurvatureFamily fam = parse_family("mean", 2);
  ScalarField fld = exact_cap_field(dom, 0.5, 0.02);

  NewtonOutcome out = newton_solve(dom, fld, fam, 0.5);
  CHECK(out.success);
  CHECK(out.iters <= 4);
  CHECK(out.residual_norm <= 1e-8);
  // the convergence markers belong to the continuation driver, not to the
  // bare Newton loop
  CHECK(!fld.converged);
  CHECK(field_cone_margin(dom, fld, fam) > 0);
  for (double u : fld.values) CHECK(u >= 0.02 - 1e-10);
}

TEST_CASE("gradient peaks at the boundary ring") {
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 16);
  CurvatureFamily fam = parse_family("mean", 2);
  ScalarField fld = exact_cap_field(dom, 0.5, 0.02);
  newton_solve(dom, fld, fam, 0.5);

  double wmax = 0;
  int argmax = -1;
  for (int k = 0; k < dom.num_nodes(); ++k) {
    GraphPointState st = node_state(dom, fld, k);
    if (st.w > wmax) {
      wmax = st.w;
      argmax = k;
    }
  }
  REQUIRE(argmax >= 0);
  CHECK(dom.nodes()[argmax].cls == NodeClass::BoundaryAdjacent);

  BoundaryAngleStats ang = boundary_angle_stats(dom, fld);
  CHECK(ang.samples > 0);
  CHECK(ang.w_max >= wmax - 1e-3);  // extrapolated boundary w tops the nodes
  CHECK(ang.nu_min > 0.5);           // nu stays above sigma
  AngleBounds env = angle_bounds(0.5, 0.02, 1.0, kInf);
  // envelope with the scheme's O(h^2) extrapolation allowance
  double allow = 10.0 * dom.h() * dom.h();
  CHECK(ang.nu_max - 0.5 < env.upper + allow);
  CHECK(ang.nu_min - 0.5 > env.lower - allow);
}

TEST_CASE("field diagnostics summarize a solved state") {
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 16);
  CurvatureFamily fam = parse_family("mean", 2);
  ScalarField fld = exact_cap_field(dom, 0.5, 0.02);
  newton_solve(dom, fld, fam, 0.5);

  FieldDiagnostics d = field_diagnostics(dom, fld, fam, 0.5);
  CHECK(d.min_u >= 0.02 - 1e-10);
  CHECK(d.max_u < 0.62);
  CHECK(d.max_w <= 2.0 * (1 + 1e-6));  // gradient bound 1/sigma
  CHECK(d.min_cone_margin > 0);
  CHECK(d.kappa_min > 0.4);
  CHECK(d.kappa_max < 0.6);
  CHECK(d.nu_boundary_min > 0.5);
  double s0 = 0.3703498972193131;
  CHECK(d.angle_offset_a == doctest::Approx(s0 + (0.5 - s0) / 2).epsilon(1e-12));
  CHECK(std::isfinite(d.curvature_ratio_max));
  CHECK(d.curvature_ratio_max > 0);
}

TEST_CASE("continuation walks t to one and matches the radial reference") {
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 16);
  CurvatureFamily fam = parse_family("mean", 2);
  SolveResult res = continue_in_t(dom, fam, 0.5, 0.02);

  REQUIRE(res.report.status == RunStatus::Converged);
  REQUIRE(!res.report.steps.empty());
  CHECK(res.report.steps.front().t == 0.0);
  CHECK(res.report.steps.back().t == doctest::Approx(1.0));
  CHECK(res.report.steps.back().sigma_t == doctest::Approx(0.5));
  for (std::size_t i = 1; i < res.report.steps.size(); ++i)
    CHECK(res.report.steps[i].t > res.report.steps[i - 1].t);
  CHECK(res.report.sigma == 0.5);
  CHECK(res.report.eps == 0.02);
  CHECK(res.report.h == doctest::Approx(1.0 / 16));
  CHECK(res.report.min_boundary_curvature == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(res.field.converged);

  RadialProfile ref = solve_radial(fam, 0.5, 0.02, 1.0);
  double worst = 0;
  for (int k = 0; k < dom.num_nodes(); ++k) {
    const GridNode& nd = dom.nodes()[k];
    double r = std::hypot(nd.x, nd.y);
    worst = std::max(worst, std::fabs(res.field.values[k] - profile_value(ref, r)));
  }
  CHECK(worst < 5.0 * dom.h() * dom.h());
}

TEST_CASE("eps schedule reuses the previous stage") {
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 16);
  CurvatureFamily fam = parse_family("mean", 2);
  std::vector<SolveResult> stages = continue_in_eps(dom, fam, 0.5, {0.04, 0.02});
  REQUIRE(stages.size() == 2);
  CHECK(stages[0].report.status == RunStatus::Converged);
  CHECK(stages[1].report.status == RunStatus::Converged);
  CHECK(stages[0].report.eps == 0.04);
  CHECK(stages[1].report.eps == 0.02);

  SolveResult direct = continue_in_t(dom, fam, 0.5, 0.02);
  double diff = 0;
  for (int k = 0; k < dom.num_nodes(); ++k)
    diff = std::max(diff,
                    std::fabs(stages[1].field.values[k] - direct.field.values[k]));
  CHECK(diff < 1e-6);
}

TEST_CASE("one newton step from sphere-cap data lands near the solution") {
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 16);
  CurvatureFamily fam = parse_family("mean", 2);
  ScalarField fld = exact_cap_field(dom, 0.5, 0.02);
  double h = dom.h();

  NewtonStepReport rep = newton_step(dom, fld, fam, 0.5);
  // cap data solves the continuum equation, so the discrete residual is pure
  // truncation error
  CHECK(rep.residual_before < 2.0 * h * h);
  CHECK(rep.residual_before > 0.25 * h * h);
  CHECK(rep.step_scale == doctest::Approx(1.0));  // no damping needed
  CHECK(rep.residual_after < rep.residual_before / 50);
}

TEST_CASE("a converged field is a newton fixed point") {
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 16);
  CurvatureFamily fam = parse_family("mean", 2);
  ScalarField fld = exact_cap_field(dom, 0.5, 0.02);
  NewtonOutcome out = newton_solve(dom, fld, fam, 0.5);
  REQUIRE(out.success);

  NewtonStepReport rep = newton_step(dom, fld, fam, 0.5);
  CHECK(rep.residual_before <= 1e-8);
  CHECK(rep.residual_after <= rep.residual_before);
}

TEST_CASE("jacobian row sums equal the zeroth-order coefficient inside") {
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 16);
  CurvatureFamily fam = parse_family("mean", 2);
  ScalarField fld = exact_cap_field(dom, 0.5, 0.02);
  newton_solve(dom, fld, fam, 0.5);

  // shifting u by a constant leaves every difference quotient alone, so on
  // rows whose nine slots are all unknowns J*1 collapses to dG/du; cut arms
  // hold the fixed boundary value and carry no column, which breaks the
  // identity near the rim
  std::vector<double> ones(dom.num_nodes(), 1.0);
  std::vector<double> Jv = apply_jacobian(dom, fld, fam, 0.5, ones);
  int counted = 0;
  for (int k = 0; k < dom.num_nodes(); ++k) {
    const GridNode& nd = dom.nodes()[k];
    LinearizationAtPoint lin = linearize(fam, node_state(dom, fld, k));
    // the zeroth-order coefficient stays negative on the solved field, the
    // sign behind the comparison principle
    CHECK(lin.Gu < 0);
    bool full = nd.cls == NodeClass::Interior;
    for (const Arm& a : nd.arms) full = full && a.neighbor >= 0;
    if (!full) continue;
    ++counted;
    CHECK(Jv[k] == doctest::Approx(lin.Gu).epsilon(1e-10));
  }
  CHECK(counted > 500);
}

TEST_CASE("backtracking keeps a crude start admissible") {
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 16);
  ScalarField flat;
  flat.eps = 0.04;
  flat.values.assign(dom.num_nodes(), 0.04);

  // a flat field reads kappa = (1, 1), far from the target; the full update
  // would overshoot admissibility, so the line search must damp it
  for (const char* text : {"H2", "mean"}) {
    CurvatureFamily fam = parse_family(text, 2);
    ScalarField fld = flat;
    NewtonStepReport rep = newton_step(dom, fld, fam, 0.5);
    CHECK(rep.residual_before == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rep.step_scale < 1.0);
    CHECK(rep.step_scale >= 1.0 / (1 << 20));
    CHECK(rep.residual_after < rep.residual_before);
    CHECK(field_cone_margin(dom, fld, fam) > 0);
    for (double u : fld.values) CHECK(u > 0);
  }
}

TEST_CASE("an ellipse solve keeps boundary angles inside the envelope") {
  GridDomain dom = GridDomain::build(make_ellipse(1.3, 0.8), 1.0 / 16);
  // the barrier footprint radius is the smallest boundary curvature radius,
  // b^2/a for this ellipse
  CHECK(dom.shape().r1 == doctest::Approx(0.64 / 1.3).epsilon(1e-6));

  CurvatureFamily fam = parse_family("H2", 2);
  SolveResult res = continue_in_t(dom, fam, 0.6, 0.02);
  REQUIRE(res.report.status == RunStatus::Converged);
  CHECK(res.field.converged);
  // flattest point of the rim, curvature b/a^2
  CHECK(res.report.min_boundary_curvature ==
        doctest::Approx(0.8 / 1.69).epsilon(1e-3));

  FieldDiagnostics d = field_diagnostics(dom, res.field, fam, 0.6);
  CHECK(d.min_u >= 0.02 - 1e-10);
  CHECK(d.max_w_nodes < 1.0 / 0.6);
  CHECK(d.min_cone_margin > 0);

  BoundaryAngleStats ang = boundary_angle_stats(dom, res.field);
  AngleBounds env = angle_bounds(0.6, 0.02, dom.shape().r1, kInf);
  double allow = 10.0 * dom.h() * dom.h();
  CHECK(ang.nu_max - 0.6 < env.upper + allow);
  CHECK(ang.nu_min - 0.6 > env.lower - allow);
}

TEST_CASE("a strangled newton budget yields a stalled report, not a throw") {
  GridDomain dom = GridDomain::build(make_disk(1.0), 1.0 / 16);
  CurvatureFamily fam = parse_family("mean", 2);
  ContinuationOptions opts;
  opts.newton.max_iters = 1;
  opts.newton.tol = 1e-12;
  opts.dt_min = 0.05;
  SolveResult res = continue_in_t(dom, fam, 0.9, 0.01, opts);
  CHECK(res.report.status == RunStatus::Stalled);
  CHECK(!res.report.message.empty());
  CHECK_FALSE(res.field.converged);
}
