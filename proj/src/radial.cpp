#include "hcg/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hcg/band_solve.hpp"
#include "hcg/barrier.hpp"
#include "hcg/errors.hpp"

namespace hcg {

namespace {

Vec kappa_vector(const CurvatureFamily& fam, double u, double up, double upp,
                 double r) {
  const double w = std::sqrt(1.0 + up * up);
  const double w3 = w * w * w;
  const double k1 = u * upp / w3 + 1.0 / w;
  const double kt = (r > 0.0) ? u * up / (r * w) + 1.0 / w : k1;
  Vec kappa(fam.n);
  kappa[0] = k1;
  for (int i = 1; i < fam.n; ++i) kappa[i] = kt;
  return kappa;
}

// d kappa_1 / d(u, up, upp) and d kappa_tan / d(u, up, upp).
struct KappaDerivs {
  double k1_u, k1_up, k1_upp;
  double kt_u, kt_up, kt_upp;
};

KappaDerivs kappa_derivs(double u, double up, double upp, double r) {
  const double w = std::sqrt(1.0 + up * up);
  const double w3 = w * w * w;
  const double w5 = w3 * w * w;
  KappaDerivs d;
  d.k1_u = upp / w3;
  d.k1_up = -3.0 * u * upp * up / w5 - up / w3;
  d.k1_upp = u / w3;
  if (r > 0.0) {
    d.kt_u = up / (r * w);
    d.kt_up = u / (r * w3) - up / w3;
    d.kt_upp = 0.0;
  } else {
    d.kt_u = d.k1_u;
    d.kt_up = d.k1_up;
    d.kt_upp = d.k1_upp;
  }
  return d;
}

struct Derivatives {
  double up, upp;
  // stencil weights of (u_{i-1}, u_i, u_{i+1}) in up and upp
  double up_m, up_c, up_p;
  double upp_m, upp_c, upp_p;
};

Derivatives stencil(const std::vector<double>& u, double eps, double h,
                    int i, int m) {
  Derivatives d{};
  const double um = (i == 0) ? u[1] : u[i - 1];  // ghost u_{-1} = u_1
  const double up1 = (i + 1 == m) ? eps : u[i + 1];
  if (i == 0) {
    d.up = 0.0;
    d.up_m = d.up_c = d.up_p = 0.0;
    d.upp = 2.0 * (u[1] - u[0]) / (h * h);
    d.upp_m = 0.0;
    d.upp_c = -2.0 / (h * h);
    d.upp_p = 2.0 / (h * h);
  } else {
    d.up = (up1 - um) / (2.0 * h);
    d.up_m = -1.0 / (2.0 * h);
    d.up_c = 0.0;
    d.up_p = 1.0 / (2.0 * h);
    d.upp = (up1 - 2.0 * u[i] + um) / (h * h);
    d.upp_m = 1.0 / (h * h);
    d.upp_c = -2.0 / (h * h);
    d.upp_p = 1.0 / (h * h);
  }
  return d;
}

double cone_floor_margin(const CurvatureFamily& fam,
                         const std::vector<double>& u, double eps, double h,
                         int m) {
  double margin = 1e300;
  for (int i = 0; i < m; ++i) {
    const Derivatives d = stencil(u, eps, h, i, m);
    margin = std::min(
        margin, cone_margin(fam, kappa_vector(fam, u[i], d.up, d.upp, i * h)));
  }
  return margin;
}

RadialProfile solve_radial_impl(const CurvatureFamily& fam,
                                const std::function<double(double)>& sigma_r,
                                double sigma_for_init, double eps, double r_b,
                                const RadialOptions& opts) {
  if (!(eps > 0)) throw PreconditionViolated("eps must be positive");
  if (!(r_b > 0)) throw PreconditionViolated("r_b must be positive");
  const int m = opts.mesh_size;
  if (m < 8) throw PreconditionViolated("mesh_size must be at least 8");
  const double h = r_b / m;

  // Spherical cap through (r_b, eps) with curvature sigma.
  const double R = sphere_radii(sigma_for_init, eps, r_b,
                                std::numeric_limits<double>::infinity()).R1;
  if (!(R > 0) || !std::isfinite(R))
    throw NoCapInitializer("no cap through the boundary data");
  EquidistantSphere cap;
  cap.center = Vec(1);
  cap.radius = R;
  cap.sigma = sigma_for_init;

  std::vector<double> u(m);
  for (int i = 0; i < m; ++i) {
    Vec x(1);
    x[0] = i * h;
    u[i] = cap_height(cap, x);
  }

  const auto residual = [&](const std::vector<double>& uu,
                            std::vector<double>& out) {
    out.resize(m);
    for (int i = 0; i < m; ++i) {
      const Derivatives d = stencil(uu, eps, h, i, m);
      out[i] = radial_residual(fam, sigma_r(i * h), uu[i], d.up, d.upp, i * h);
    }
  };

  std::vector<double> res, trial_res, rhs;
  residual(u, res);
  double rn = 0;
  for (double v : res) rn = std::max(rn, std::fabs(v));

  // The second difference divides rounding error in u by h^2, so residuals
  // cannot drop below ~eps_mach u / h^2; widen the tolerance to that floor.
  double umax = 0;
  for (double v : u) umax = std::max(umax, v);
  const double noise_floor =
      8.0 * std::numeric_limits<double>::epsilon() * (1.0 + umax) / (h * h);
  const double tol = std::max(opts.newton_tol, noise_floor);

  std::ostringstream trace;
  trace << rn;
  int iters = 0;
  while (rn > tol) {
    if (iters++ >= opts.max_newton_iters)
      throw NewtonDiverged("radial Newton exceeded iteration budget; residuals " +
                           trace.str());
    BandedMatrix J(m, 1, 1);
    for (int i = 0; i < m; ++i) {
      const Derivatives d = stencil(u, eps, h, i, m);
      const double r = i * h;
      const Vec kappa = kappa_vector(fam, u[i], d.up, d.upp, r);
      const Vec g = grad_f(fam, kappa);
      const KappaDerivs kd = kappa_derivs(u[i], d.up, d.upp, r);
      double gt = 0;
      for (int q = 1; q < fam.n; ++q) gt += g[q];
      const double dR_u = g[0] * kd.k1_u + gt * kd.kt_u;
      const double dR_up = g[0] * kd.k1_up + gt * kd.kt_up;
      const double dR_upp = g[0] * kd.k1_upp + gt * kd.kt_upp;
      // column contributions via the stencil weights
      const double cm = dR_up * d.up_m + dR_upp * d.upp_m;
      const double cc = dR_u + dR_up * d.up_c + dR_upp * d.upp_c;
      const double cp = dR_up * d.up_p + dR_upp * d.upp_p;
      if (i == 0) {
        J.add(0, 0, cc);
        J.add(0, 1, cp + cm);  // ghost u_{-1} = u_1 folds into column 1
      } else {
        J.add(i, i - 1, cm);
        J.add(i, i, cc);
        if (i + 1 < m) J.add(i, i + 1, cp);
      }
    }
    rhs.assign(res.begin(), res.end());
    for (double& v : rhs) v = -v;
    if (!J.solve(rhs)) throw SingularJacobian("radial Jacobian is singular");

    double step = 1.0;
    bool accepted = false;
    std::vector<double> trial(m);
    while (step >= opts.min_step) {
      for (int i = 0; i < m; ++i) trial[i] = u[i] + step * rhs[i];
      const bool positive =
          std::all_of(trial.begin(), trial.end(), [](double v) { return v > 0; });
      if (positive &&
          cone_floor_margin(fam, trial, eps, h, m) >= opts.cone_floor) {
        residual(trial, trial_res);
        double trn = 0;
        for (double v : trial_res) trn = std::max(trn, std::fabs(v));
        if (trn < rn) {
          u.swap(trial);
          res.swap(trial_res);
          rn = trn;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Stagnation within a small factor of the noise floor is convergence.
      if (rn <= 8.0 * tol) break;
      throw LineSearchStalled("radial line search hit the minimum step");
    }
    trace << " -> " << rn;
  }

  RadialProfile prof;
  prof.r.resize(m + 1);
  prof.u.resize(m + 1);
  for (int i = 0; i < m; ++i) {
    prof.r[i] = i * h;
    prof.u[i] = u[i];
  }
  prof.r[m] = r_b;
  prof.u[m] = eps;
  prof.sigma = sigma_r(r_b);
  prof.eps = eps;
  prof.r_b = r_b;
  prof.n = fam.n;
  prof.family_label = fam.label;
  prof.converged = true;
  prof.newton_iters = iters;
  prof.residual_norm = rn;

  double max_w = 1.0;
  for (int i = 1; i < m; ++i) {
    const double up = (prof.u[i + 1] - prof.u[i - 1]) / (2.0 * h);
    max_w = std::max(max_w, std::sqrt(1.0 + up * up));
  }
  // One-sided second-order slope at the boundary.
  const double up_b = (3.0 * eps - 4.0 * u[m - 1] + u[m - 2]) / (2.0 * h);
  prof.boundary_w = std::sqrt(1.0 + up_b * up_b);
  prof.boundary_nu = 1.0 / prof.boundary_w;
  prof.max_w = std::max(max_w, prof.boundary_w);
  return prof;
}

}  // namespace

double radial_residual(const CurvatureFamily& fam, double sigma, double u,
                       double up, double upp, double r) {
  if (!(u > 0)) throw NonpositiveHeight("profile height must be positive");
  if (!(r >= 0)) throw PreconditionViolated("radius must be nonnegative");
  return eval_f(fam, kappa_vector(fam, u, up, upp, r)) - sigma;
}

RadialProfile solve_radial(const CurvatureFamily& fam, double sigma,
                           double eps, double r_b, const RadialOptions& opts) {
  if (!(sigma > 0 && sigma < 1))
    throw PreconditionViolated("sigma must lie in (0,1)");
  return solve_radial_impl(
      fam, [sigma](double) { return sigma; }, sigma, eps, r_b, opts);
}

RadialProfile solve_radial_forced(const CurvatureFamily& fam,
                                  const std::function<double(double)>& sigma_r,
                                  double sigma_for_init, double eps, double r_b,
                                  const RadialOptions& opts) {
  if (!(sigma_for_init > 0 && sigma_for_init < 1))
    throw PreconditionViolated("initializer sigma must lie in (0,1)");
  return solve_radial_impl(fam, sigma_r, sigma_for_init, eps, r_b, opts);
}

double profile_value(const RadialProfile& prof, double r) {
  const int m = static_cast<int>(prof.r.size()) - 1;
  if (!(r >= 0 && r <= prof.r_b + 1e-12))
    throw PreconditionViolated("radius outside the profile");
  const double h = prof.r_b / m;
  int i = std::clamp(static_cast<int>(r / h), 1, m - 2);
  // 4-point Lagrange interpolation on nodes i-1..i+2
  double val = 0;
  for (int a = i - 1; a <= i + 2; ++a) {
    double lk = 1;
    for (int b = i - 1; b <= i + 2; ++b)
      if (b != a) lk *= (r - prof.r[b]) / (prof.r[a] - prof.r[b]);
    val += lk * prof.u[a];
  }
  return val;
}

}  // namespace hcg
