#pragma once

#include <string>
#include <vector>

#include "hcg/band_solve.hpp"
#include "hcg/curvature_family.hpp"
#include "hcg/grid.hpp"
#include "hcg/shape.hpp"

// Damped-Newton continuation for f(kappa[u]) = sigma on a planar embedded-
// boundary grid (two horizontal dimensions).  The curvature parameter is
// walked from the exactly solvable horosphere state u = eps at
// sigma_t = t sigma + (1 - t) down to t = 1, then optionally through a
// decreasing schedule of boundary heights eps.

namespace hcg {

// Derivatives of the field at one node, with the stencil weights used to
// assemble Jacobian rows.  Slot 0 is the center, slots 1..8 the arms in
// kArmDir order; cut arms carry the boundary value eps and no column.
struct NodeEval {
  double u = 0;
  Vec du;
  Mat d2u;
  std::array<double, 9> wx{}, wy{}, wxx{}, wyy{}, wxy{};
};

NodeEval eval_node(const GridDomain& dom, const ScalarField& field, int idx);
GraphPointState node_state(const GridDomain& dom, const ScalarField& field,
                           int idx);

// Residual f(kappa) - sigma_t per node; throws ConeViolation listing the
// offending nodes when any curvature vector leaves the cone.
std::vector<double> assemble_residual(const GridDomain& dom,
                                      const ScalarField& field,
                                      const CurvatureFamily& fam,
                                      double sigma_t);

BandedMatrix assemble_jacobian(const GridDomain& dom, const ScalarField& field,
                               const CurvatureFamily& fam, double sigma_t);

// Row-wise J v without forming band storage; oracle hook for tests.
std::vector<double> apply_jacobian(const GridDomain& dom,
                                   const ScalarField& field,
                                   const CurvatureFamily& fam, double sigma_t,
                                   const std::vector<double>& v);

// Smallest admissibility margin min_nodes min_j sigma_j(kappa).
double field_cone_margin(const GridDomain& dom, const ScalarField& field,
                         const CurvatureFamily& fam);

struct NewtonOptions {
  double tol = 1e-8;
  int max_iters = 40;
  double cone_floor = 1e-8;
  double min_step = 1.0 / (1 << 20);
};

struct NewtonStepReport {
  double step_scale = 0;
  double residual_before = 0;
  double residual_after = 0;
};

// One damped Newton update in place.  Throws SingularJacobian or
// LineSearchStalled; admissibility (u > 0 and the cone floor) is enforced
// by backtracking.
NewtonStepReport newton_step(const GridDomain& dom, ScalarField& field,
                             const CurvatureFamily& fam, double sigma_t,
                             const NewtonOptions& opts = {});

struct NewtonOutcome {
  bool success = false;
  int iters = 0;
  double residual_norm = 0;
  std::string message;
};

NewtonOutcome newton_solve(const GridDomain& dom, ScalarField& field,
                           const CurvatureFamily& fam, double sigma_t,
                           const NewtonOptions& opts = {});

// Extrapolated boundary angles: the gradient at a boundary point of a
// Dirichlet solution is purely normal, so a one-sided second-order
// derivative along a well-aligned cut axis arm recovers w and nu = 1/w on
// the boundary itself.
struct BoundaryAngleStats {
  double nu_min = 0, nu_max = 0;
  double w_max = 0;
  int samples = 0;
};
BoundaryAngleStats boundary_angle_stats(const GridDomain& dom,
                                        const ScalarField& field);

struct FieldDiagnostics {
  double min_u = 0, max_u = 0;
  double max_w_nodes = 0;  // node-sampled
  double max_w = 0;        // including the boundary extrapolation
  double min_cone_margin = 0;
  double kappa_min = 0, kappa_max = 0;
  double max_u_d2u = 0;
  double nu_node_min = 0;
  double nu_boundary_min = 0, nu_boundary_max = 0;
  // max over nodes of kappa_max / (nu - a) at angle offset
  // a = sigma0 + (sigma - sigma0)/2; NaN when no node has nu > a.
  double curvature_ratio_max = 0;
  double angle_offset_a = 0;
};

FieldDiagnostics field_diagnostics(const GridDomain& dom,
                                   const ScalarField& field,
                                   const CurvatureFamily& fam, double sigma);

struct ContinuationOptions {
  double dt_init = 0.1;
  double dt_min = 1e-4;
  double dt_max = 0.25;
  int easy_iters = 4;  // a step this cheap counts toward re-doubling dt
  NewtonOptions newton;
};

struct TStepRecord {
  double t = 0;
  double sigma_t = 0;
  int newton_iters = 0;
  double residual = 0;
  double min_cone_margin = 0;
  double max_w = 0;
  double max_u_d2u = 0;
  double nu_boundary_min = 0, nu_boundary_max = 0;
  double kappa_max = 0;
  double curvature_ratio_max = 0;
};

enum class RunStatus { Converged, Stalled, NotRun };

struct ContinuationReport {
  RunStatus status = RunStatus::NotRun;
  std::string message;
  std::string family_label;
  double sigma = 0, eps = 0, h = 0;
  double angle_offset_a = 0;
  double min_boundary_curvature = 0;
  std::vector<TStepRecord> steps;
};

struct SolveResult {
  ScalarField field;
  ContinuationReport report;
};

SolveResult continue_in_t(const GridDomain& dom, const CurvatureFamily& fam,
                          double sigma, double eps,
                          const ContinuationOptions& opts = {});

// Decreasing eps schedule with warm starts; stages that fail the direct
// warm solve fall back to a full t-walk.  Default schedule 0.04 * 2^{-j},
// j = 0..4.
std::vector<SolveResult> continue_in_eps(const GridDomain& dom,
                                         const CurvatureFamily& fam,
                                         double sigma,
                                         std::vector<double> eps_schedule = {},
                                         const ContinuationOptions& opts = {});

}  // namespace hcg
