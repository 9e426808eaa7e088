#include "hcg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hcg/errors.hpp"
#include "hcg/linop.hpp"
#include "hcg/scalar_bounds.hpp"

namespace hcg {

namespace {

double arm_value(const ScalarField& field, const GridNode& nd, int arm) {
  const Arm& a = nd.arms[arm];
  return a.neighbor >= 0 ? field.values[a.neighbor] : field.eps;
}

// Three-point first/second derivatives on the nonuniform pair
// {-dm, 0, +dp}; weights are returned for (plus, minus, center).
struct PairWeights {
  double d1p, d1m, d1c;
  double d2p, d2m, d2c;
};

PairWeights pair_weights(double dp, double dm) {
  const double denom = dp * dm * (dp + dm);
  PairWeights w;
  w.d1p = dm * dm / denom;
  w.d1m = -dp * dp / denom;
  w.d1c = (dp * dp - dm * dm) / denom;
  w.d2p = 2.0 * dm / denom;
  w.d2m = 2.0 * dp / denom;
  w.d2c = -2.0 * (dp + dm) / denom;
  return w;
}

double sup_norm(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

NodeEval eval_node(const GridDomain& dom, const ScalarField& field, int idx) {
  const GridNode& nd = dom.nodes()[idx];
  const double h = dom.h();
  const double diag = h * std::sqrt(2.0);

  NodeEval ev;
  ev.u = field.values[idx];
  ev.du = Vec(2);
  ev.d2u = Mat(2);

  // slot 1+arm holds that arm's weight; slot 0 the center.
  auto fill_pair = [&](int plus, int minus, double len, double& d1,
                       double& d2, std::array<double, 9>* w1,
                       std::array<double, 9>* w2, double w2_scale) {
    const double dp = nd.arms[plus].theta * len;
    const double dm = nd.arms[minus].theta * len;
    const double vp = arm_value(field, nd, plus);
    const double vm = arm_value(field, nd, minus);
    const PairWeights pw = pair_weights(dp, dm);
    d1 = pw.d1p * vp + pw.d1m * vm + pw.d1c * ev.u;
    d2 = pw.d2p * vp + pw.d2m * vm + pw.d2c * ev.u;
    if (w1 != nullptr) {
      (*w1)[1 + plus] = pw.d1p;
      (*w1)[1 + minus] = pw.d1m;
      (*w1)[0] += pw.d1c;
    }
    if (w2 != nullptr) {
      (*w2)[1 + plus] += w2_scale * pw.d2p;
      (*w2)[1 + minus] += w2_scale * pw.d2m;
      (*w2)[0] += w2_scale * pw.d2c;
    }
  };

  double ux, uy, uxx, uyy;
  fill_pair(0, 1, h, ux, uxx, &ev.wx, &ev.wxx, 1.0);   // E, W
  fill_pair(2, 3, h, uy, uyy, &ev.wy, &ev.wyy, 1.0);   // N, S
  // Diagonal second derivatives; u_xy = (u_{ee} - u_{ff}) / 2 with
  // e = (1,1)/sqrt2 and f = (-1,1)/sqrt2.
  double dd1, dee, dd2, dff;
  fill_pair(4, 5, diag, dd1, dee, nullptr, &ev.wxy, 0.5);   // NE, SW
  fill_pair(6, 7, diag, dd2, dff, nullptr, &ev.wxy, -0.5);  // NW, SE
  const double uxy = 0.5 * (dee - dff);

  ev.du[0] = ux;
  ev.du[1] = uy;
  ev.d2u(0, 0) = uxx;
  ev.d2u(1, 1) = uyy;
  ev.d2u(0, 1) = uxy;
  ev.d2u(1, 0) = uxy;
  return ev;
}

GraphPointState node_state(const GridDomain& dom, const ScalarField& field,
                           int idx) {
  const NodeEval ev = eval_node(dom, field, idx);
  return hyperbolic_shape(ev.u, ev.du, ev.d2u);
}

std::vector<double> assemble_residual(const GridDomain& dom,
                                      const ScalarField& field,
                                      const CurvatureFamily& fam,
                                      double sigma_t) {
  const int n = dom.num_nodes();
  std::vector<double> r(n);
  std::vector<int> bad;
  for (int i = 0; i < n; ++i) {
    const GraphPointState st = node_state(dom, field, i);
    if (!in_cone(fam, st.kappa)) {
      bad.push_back(i);
      continue;
    }
    r[i] = eval_f(fam, st.kappa) - sigma_t;
  }
  if (!bad.empty()) {
    throw ConeViolation("curvature vector left the admissible cone at " +
                            std::to_string(bad.size()) + " node(s)",
                        bad);
  }
  return r;
}

namespace {

// Jacobian row for one node: chain rule through the stencil weights.
// Returns (slot coefficient, column index) pairs; cut arms have no column.
struct RowEntry {
  int col;
  double coeff;
};

int jacobian_row(const GridDomain& dom, const ScalarField& field,
                 const CurvatureFamily& fam, int idx,
                 std::array<RowEntry, 9>& out) {
  const GridNode& nd = dom.nodes()[idx];
  const NodeEval ev = eval_node(dom, field, idx);
  const GraphPointState st = hyperbolic_shape(ev.u, ev.du, ev.d2u);
  const LinearizationAtPoint lin = linearize(fam, st);

  int cnt = 0;
  for (int s = 0; s < 9; ++s) {
    const int col = (s == 0) ? idx : nd.arms[s - 1].neighbor;
    if (col < 0) continue;
    double c = lin.Gst(0, 0) * ev.wxx[s] + lin.Gst(1, 1) * ev.wyy[s] +
               2.0 * lin.Gst(0, 1) * ev.wxy[s] + lin.Gs[0] * ev.wx[s] +
               lin.Gs[1] * ev.wy[s];
    if (s == 0) c += lin.Gu;
    out[cnt++] = RowEntry{col, c};
  }
  return cnt;
}

int max_bandwidth(const GridDomain& dom) {
  int band = 0;
  const auto& nodes = dom.nodes();
  for (int i = 0; i < dom.num_nodes(); ++i) {
    for (const Arm& a : nodes[i].arms) {
      if (a.neighbor >= 0) band = std::max(band, std::abs(a.neighbor - i));
    }
  }
  return band;
}

}  // namespace

BandedMatrix assemble_jacobian(const GridDomain& dom, const ScalarField& field,
                               const CurvatureFamily& fam, double sigma_t) {
  (void)sigma_t;  // the shift does not enter the derivative
  const int n = dom.num_nodes();
  const int band = max_bandwidth(dom);
  BandedMatrix J(n, band, band);
  std::array<RowEntry, 9> row;
  for (int i = 0; i < n; ++i) {
    const int cnt = jacobian_row(dom, field, fam, i, row);
    for (int k = 0; k < cnt; ++k) J.add(i, row[k].col, row[k].coeff);
  }
  return J;
}

std::vector<double> apply_jacobian(const GridDomain& dom,
                                   const ScalarField& field,
                                   const CurvatureFamily& fam, double sigma_t,
                                   const std::vector<double>& v) {
  (void)sigma_t;
  const int n = dom.num_nodes();
  std::vector<double> out(n, 0.0);
  std::array<RowEntry, 9> row;
  for (int i = 0; i < n; ++i) {
    const int cnt = jacobian_row(dom, field, fam, i, row);
    double acc = 0;
    for (int k = 0; k < cnt; ++k) acc += row[k].coeff * v[row[k].col];
    out[i] = acc;
  }
  return out;
}

double field_cone_margin(const GridDomain& dom, const ScalarField& field,
                         const CurvatureFamily& fam) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dom.num_nodes(); ++i) {
    const GraphPointState st = node_state(dom, field, i);
    m = std::min(m, cone_margin(fam, st.kappa));
  }
  return m;
}

NewtonStepReport newton_step(const GridDomain& dom, ScalarField& field,
                             const CurvatureFamily& fam, double sigma_t,
                             const NewtonOptions& opts) {
  const std::vector<double> r = assemble_residual(dom, field, fam, sigma_t);
  const double r0 = sup_norm(r);

  BandedMatrix J = assemble_jacobian(dom, field, fam, sigma_t);
  std::vector<double> delta = r;
  if (!J.solve(delta)) {
    throw SingularJacobian("banded LU factorization failed");
  }

  // Backtrack: keep u positive and inside the cone with a safety floor,
  // and require a strict residual decrease.
  ScalarField trial = field;
  double scale = 1.0;
  while (true) {
    for (size_t k = 0; k < field.values.size(); ++k) {
      trial.values[k] = field.values[k] - scale * delta[k];
    }
    bool ok = true;
    for (double v : trial.values) {
      if (!(v > 0)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      try {
        ok = field_cone_margin(dom, trial, fam) >= opts.cone_floor;
      } catch (const NonpositiveHeight&) {
        ok = false;
      }
    }
    if (ok) {
      const double r1 = sup_norm(assemble_residual(dom, trial, fam, sigma_t));
      if (r1 < r0) {
        field = trial;
        return NewtonStepReport{scale, r0, r1};
      }
    }
    scale *= 0.5;
    if (scale < opts.min_step) {
      throw LineSearchStalled("no admissible decrease above step scale " +
                              std::to_string(opts.min_step));
    }
  }
}

NewtonOutcome newton_solve(const GridDomain& dom, ScalarField& field,
                           const CurvatureFamily& fam, double sigma_t,
                           const NewtonOptions& opts) {
  NewtonOutcome out;
  try {
    out.residual_norm = sup_norm(assemble_residual(dom, field, fam, sigma_t));
  } catch (const SolverError& e) {
    out.message = e.what();
    return out;
  }
  for (int it = 0; it < opts.max_iters; ++it) {
    if (out.residual_norm <= opts.tol) {
      out.success = true;
      return out;
    }
    try {
      const NewtonStepReport rep = newton_step(dom, field, fam, sigma_t, opts);
      out.residual_norm = rep.residual_after;
      out.iters = it + 1;
    } catch (const SolverError& e) {
      out.message = e.what();
      return out;
    }
  }
  if (out.residual_norm <= opts.tol) {
    out.success = true;
  } else {
    out.message = "newton iteration budget exhausted";
  }
  return out;
}

BoundaryAngleStats boundary_angle_stats(const GridDomain& dom,
                                        const ScalarField& field) {
  BoundaryAngleStats stats;
  stats.nu_min = std::numeric_limits<double>::infinity();
  stats.nu_max = -stats.nu_min;
  const double h = dom.h();
  constexpr double kMinAlign = 0.5;   // |normal . arm| filter
  constexpr double kMinTheta = 0.05;  // skip razor-thin cuts

  for (const BoundaryCut& cut : dom.boundary_cuts()) {
    const GridNode& nd = dom.nodes()[cut.node];
    const Arm& a = nd.arms[cut.arm];
    if (a.theta < kMinTheta) continue;
    const double dirx = kArmDir[cut.arm][0];
    const double diry = kArmDir[cut.arm][1];
    const double align = cut.normal_out.x * dirx + cut.normal_out.y * diry;
    if (std::abs(align) < kMinAlign) continue;

    // Collinear samples at distances 0, xi1, xi2 from the cut, walking
    // inward: the cut itself (value eps), the node, and the opposite arm.
    const int opp = cut.arm ^ 1;
    const Arm& ao = nd.arms[opp];
    const double xi1 = a.theta * h;
    const double xi2 = xi1 + (ao.neighbor >= 0 ? h : ao.theta * h);
    const double v0 = field.eps;
    const double v1 = field.values[cut.node];
    const double v2 = arm_value(field, nd, opp);

    const double c0 = -(xi1 + xi2) / (xi1 * xi2);
    const double c1 = xi2 / (xi1 * (xi2 - xi1));
    const double c2 = -xi1 / (xi2 * (xi2 - xi1));
    const double du_in = c0 * v0 + c1 * v1 + c2 * v2;

    // Dirichlet data is constant, so Du at the cut is u_n * normal_out and
    // the inward derivative equals -u_n * (normal . arm).
    const double u_n = -du_in / align;
    const double w = std::sqrt(1.0 + u_n * u_n);
    const double nu = 1.0 / w;
    stats.nu_min = std::min(stats.nu_min, nu);
    stats.nu_max = std::max(stats.nu_max, nu);
    stats.w_max = std::max(stats.w_max, w);
    ++stats.samples;
  }
  return stats;
}

FieldDiagnostics field_diagnostics(const GridDomain& dom,
                                   const ScalarField& field,
                                   const CurvatureFamily& fam, double sigma) {
  static const double s0 = sigma0();
  FieldDiagnostics d;
  const double inf = std::numeric_limits<double>::infinity();
  d.min_u = inf;
  d.max_u = -inf;
  d.kappa_min = inf;
  d.kappa_max = -inf;
  d.min_cone_margin = inf;
  d.nu_node_min = inf;
  d.angle_offset_a = s0 + 0.5 * (sigma - s0);
  double ratio = -inf;
  bool ratio_seen = false;

  for (int i = 0; i < dom.num_nodes(); ++i) {
    const GraphPointState st = node_state(dom, field, i);
    d.min_u = std::min(d.min_u, st.u);
    d.max_u = std::max(d.max_u, st.u);
    d.max_w_nodes = std::max(d.max_w_nodes, st.w);
    d.min_cone_margin = std::min(d.min_cone_margin, cone_margin(fam, st.kappa));
    d.kappa_min = std::min(d.kappa_min, st.kappa[0]);
    d.kappa_max = std::max(d.kappa_max, st.kappa[st.kappa.n - 1]);
    d.max_u_d2u = std::max(d.max_u_d2u, st.u * max_abs(st.d2u));
    const double nu = 1.0 / st.w;
    d.nu_node_min = std::min(d.nu_node_min, nu);
    if (nu > d.angle_offset_a) {
      ratio = std::max(ratio,
                       st.kappa[st.kappa.n - 1] / (nu - d.angle_offset_a));
      ratio_seen = true;
    }
  }

  const BoundaryAngleStats bs = boundary_angle_stats(dom, field);
  d.nu_boundary_min = bs.nu_min;
  d.nu_boundary_max = bs.nu_max;
  d.max_w = std::max(d.max_w_nodes, bs.w_max);
  d.curvature_ratio_max =
      ratio_seen ? ratio : std::numeric_limits<double>::quiet_NaN();
  return d;
}

namespace {

TStepRecord make_record(const GridDomain& dom, const ScalarField& field,
                        const CurvatureFamily& fam, double sigma, double t,
                        double sigma_t, int iters, double residual) {
  const FieldDiagnostics d = field_diagnostics(dom, field, fam, sigma);
  TStepRecord rec;
  rec.t = t;
  rec.sigma_t = sigma_t;
  rec.newton_iters = iters;
  rec.residual = residual;
  rec.min_cone_margin = d.min_cone_margin;
  rec.max_w = d.max_w;
  rec.max_u_d2u = d.max_u_d2u;
  rec.nu_boundary_min = d.nu_boundary_min;
  rec.nu_boundary_max = d.nu_boundary_max;
  rec.kappa_max = d.kappa_max;
  rec.curvature_ratio_max = d.curvature_ratio_max;
  return rec;
}

}  // namespace

SolveResult continue_in_t(const GridDomain& dom, const CurvatureFamily& fam,
                          double sigma, double eps,
                          const ContinuationOptions& opts) {
  if (!(eps > 0)) throw PreconditionViolated("boundary height must be > 0");
  if (!(sigma > 0 && sigma < 1)) {
    throw PreconditionViolated("sigma must lie in (0, 1)");
  }

  SolveResult res;
  res.field.values.assign(static_cast<size_t>(dom.num_nodes()), eps);
  res.field.eps = eps;
  res.field.admissible = true;

  ContinuationReport& rep = res.report;
  rep.family_label = fam.label;
  rep.sigma = sigma;
  rep.eps = eps;
  rep.h = dom.h();
  rep.angle_offset_a = sigma0() + 0.5 * (sigma - sigma0());
  rep.min_boundary_curvature = dom.min_boundary_curvature();

  // u = eps solves the t = 0 equation f(1,...,1) = 1 exactly.
  rep.steps.push_back(make_record(dom, res.field, fam, sigma, 0.0, 1.0, 0, 0));

  double t = 0;
  double dt = opts.dt_init;
  int easy_streak = 0;
  while (t < 1.0) {
    const double t_next = std::min(1.0, t + dt);
    const double sigma_t = t_next * sigma + (1.0 - t_next);
    ScalarField trial = res.field;
    const NewtonOutcome out = newton_solve(dom, trial, fam, sigma_t,
                                           opts.newton);
    if (out.success) {
      t = t_next;
      res.field = trial;
      rep.steps.push_back(make_record(dom, res.field, fam, sigma, t, sigma_t,
                                      out.iters, out.residual_norm));
      if (out.iters <= opts.easy_iters) {
        if (++easy_streak >= 2) {
          dt = std::min(2.0 * dt, opts.dt_max);
          easy_streak = 0;
        }
      } else {
        easy_streak = 0;
      }
    } else {
      dt *= 0.5;
      easy_streak = 0;
      if (dt < opts.dt_min) {
        rep.status = RunStatus::Stalled;
        rep.message = "continuation step fell below " +
                      std::to_string(opts.dt_min) + " at t = " +
                      std::to_string(t) +
                      (out.message.empty() ? "" : ("; " + out.message));
        return res;
      }
    }
  }
  res.field.converged = true;
  rep.status = RunStatus::Converged;
  return res;
}

std::vector<SolveResult> continue_in_eps(const GridDomain& dom,
                                         const CurvatureFamily& fam,
                                         double sigma,
                                         std::vector<double> eps_schedule,
                                         const ContinuationOptions& opts) {
  if (eps_schedule.empty()) {
    for (int j = 0; j < 5; ++j) eps_schedule.push_back(0.04 / (1 << j));
  }
  std::vector<SolveResult> stages;
  for (size_t j = 0; j < eps_schedule.size(); ++j) {
    const double eps = eps_schedule[j];
    if (j == 0 || !stages.back().field.converged) {
      stages.push_back(continue_in_t(dom, fam, sigma, eps, opts));
      continue;
    }
    // Warm start: previous interior values, new boundary height.
    SolveResult warm;
    warm.field = stages.back().field;
    warm.field.eps = eps;
    warm.field.converged = false;
    NewtonOutcome out;
    out.success = false;
    try {
      out = newton_solve(dom, warm.field, fam, sigma, opts.newton);
    } catch (const SolverError&) {
      out.success = false;
    }
    if (out.success) {
      warm.field.converged = true;
      ContinuationReport& rep = warm.report;
      rep.status = RunStatus::Converged;
      rep.message = "warm start from previous boundary height";
      rep.family_label = fam.label;
      rep.sigma = sigma;
      rep.eps = eps;
      rep.h = dom.h();
      rep.angle_offset_a = sigma0() + 0.5 * (sigma - sigma0());
      rep.min_boundary_curvature = dom.min_boundary_curvature();
      rep.steps.push_back(make_record(dom, warm.field, fam, sigma, 1.0, sigma,
                                      out.iters, out.residual_norm));
      stages.push_back(std::move(warm));
    } else {
      stages.push_back(continue_in_t(dom, fam, sigma, eps, opts));
    }
  }
  return stages;
}

}  // namespace hcg
