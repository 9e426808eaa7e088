#include "hcg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hcg/linop.hpp"
#include "hcg/rng.hpp"
#include "hcg/shape.hpp"

namespace hcg {

namespace {

constexpr int kMaxAttemptsFactor = 200;

double uniform_in(SplitMix64& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.uniform();
}

Vec random_lambda(SplitMix64& rng, int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform_in(rng, -0.5, 2.5);
  return v;
}

// Safety margin keeping samples away from the cone boundary, scaled with
// the degree of each symmetric function: sigma_j >= 1e-3 (1 + |lambda|^j).
bool margin_ok(const CurvatureFamily& fam, const Vec& lam) {
  const double nrm = norm2(lam);
  double pw = 1.0;
  for (int j = 1; j <= fam.cone_order(); ++j) {
    pw *= nrm;
    if (!(elementary_symmetric(lam, j) >= 1e-3 * (1.0 + pw))) return false;
  }
  return true;
}

// Rejection sample a curvature vector with a safety margin inside the cone
// so finite differences and strict inequalities are numerically meaningful.
bool next_cone_sample(SplitMix64& rng, const CurvatureFamily& fam, Vec& out) {
  for (int a = 0; a < kMaxAttemptsFactor; ++a) {
    Vec v = random_lambda(rng, fam.n);
    if (margin_ok(fam, v)) {
      out = v;
      return true;
    }
  }
  return false;
}

struct RandomState {
  GraphPointState st;
  bool ok = false;
};

RandomState next_graph_state(SplitMix64& rng, const CurvatureFamily* fam,
                             int n) {
  RandomState r;
  for (int a = 0; a < kMaxAttemptsFactor; ++a) {
    const double u = uniform_in(rng, 0.2, 1.5);
    Vec du(n);
    for (int i = 0; i < n; ++i) du[i] = uniform_in(rng, -1.5, 1.5);
    Mat d2u(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double v = uniform_in(rng, -2.0, 2.0);
        d2u(i, j) = v;
        d2u(j, i) = v;
      }
    }
    GraphPointState st = hyperbolic_shape(u, du, d2u);
    if (fam != nullptr && !margin_ok(*fam, st.kappa)) continue;
    r.st = st;
    r.ok = true;
    return r;
  }
  return r;
}

class Check {
 public:
  Check(std::string name, std::string family, int n, double tol)
      : res_{std::move(name), std::move(family), n, 0, 0,
             std::numeric_limits<double>::infinity(), tol} {}

  // A sample passes when its slack is >= -tolerance.
  void observe(double slack) {
    ++res_.samples;
    res_.worst_slack = std::min(res_.worst_slack, slack);
    if (!(slack >= -res_.tolerance)) ++res_.failures;
  }

  PropertyResult take() {
    if (res_.samples == 0) res_.worst_slack = 0;
    return std::move(res_);
  }

 private:
  PropertyResult res_;
};

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index) {
  return base + 0x9E3779B97F4A7C15ull * (index + 1);
}

// Relative agreement as a slack: -|a - b| / max(1, |a|, |b|).
double rel_slack(double a, double b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return -std::abs(a - b) / scale;
}

void check_homogeneity(const CurvatureFamily& fam, SplitMix64 rng, int samples,
                       std::vector<PropertyResult>& out) {
  Check ch("homogeneity", fam.label, fam.n, 1e-11);
  for (int s = 0; s < samples; ++s) {
    Vec lam(fam.n);
    if (!next_cone_sample(rng, fam, lam)) break;
    const double c = uniform_in(rng, 0.5, 2.0);
    const double f = eval_f(fam, lam);
    const double fc = eval_f(fam, scaled(lam, c));
    ch.observe(rel_slack(fc, c * f));
  }
  out.push_back(ch.take());
}

void check_normalization(const CurvatureFamily& fam,
                         std::vector<PropertyResult>& out) {
  Check ch("normalization", fam.label, fam.n, 1e-13);
  Vec ones(fam.n);
  for (int i = 0; i < fam.n; ++i) ones[i] = 1.0;
  ch.observe(-std::abs(eval_f(fam, ones) - 1.0));
  out.push_back(ch.take());
}

void check_monotonicity(const CurvatureFamily& fam, SplitMix64 rng,
                        int samples, std::vector<PropertyResult>& out) {
  Check ch("monotonicity", fam.label, fam.n, 0.0);
  for (int s = 0; s < samples; ++s) {
    Vec lam(fam.n);
    if (!next_cone_sample(rng, fam, lam)) break;
    const Vec g = grad_f(fam, lam);
    ch.observe(min_entry(g));
  }
  out.push_back(ch.take());
}

void check_midpoint_concavity(const CurvatureFamily& fam, SplitMix64 rng,
                              int samples, std::vector<PropertyResult>& out) {
  Check ch("midpoint_concavity", fam.label, fam.n, 1e-11);
  for (int s = 0; s < samples; ++s) {
    Vec a(fam.n), b(fam.n);
    if (!next_cone_sample(rng, fam, a)) break;
    if (!next_cone_sample(rng, fam, b)) break;
    Vec mid(fam.n);
    for (int i = 0; i < fam.n; ++i) mid[i] = 0.5 * (a[i] + b[i]);
    // The cone is convex, so the midpoint is admissible.
    ch.observe(eval_f(fam, mid) - 0.5 * (eval_f(fam, a) + eval_f(fam, b)));
  }
  out.push_back(ch.take());
}

void check_mean_bound(const CurvatureFamily& fam, SplitMix64 rng, int samples,
                      std::vector<PropertyResult>& out) {
  Check ch("mean_bound", fam.label, fam.n, 1e-11);
  for (int s = 0; s < samples; ++s) {
    Vec lam(fam.n);
    if (!next_cone_sample(rng, fam, lam)) break;
    double mean = 0;
    for (int i = 0; i < fam.n; ++i) mean += lam[i];
    mean /= fam.n;
    ch.observe(mean - eval_f(fam, lam));
  }
  out.push_back(ch.take());
}

void check_gradient_sum(const CurvatureFamily& fam, SplitMix64 rng,
                        int samples, std::vector<PropertyResult>& out) {
  Check ch("gradient_sum_bound", fam.label, fam.n, 1e-11);
  for (int s = 0; s < samples; ++s) {
    Vec lam(fam.n);
    if (!next_cone_sample(rng, fam, lam)) break;
    const Vec g = grad_f(fam, lam);
    double sum = 0;
    for (int i = 0; i < fam.n; ++i) sum += g[i];
    ch.observe(sum - 1.0);
  }
  out.push_back(ch.take());
}

void check_negative_entry_gap(const CurvatureFamily& fam, SplitMix64 rng,
                              int samples, std::vector<PropertyResult>& out) {
  // Families whose cone pins every entry positive cannot produce a
  // negative-entry sample; the check is then vacuous.
  Check ch("negative_entry_gap", fam.label, fam.n, 1e-12);
  if (fam.n > 1 && fam.cone_order() < fam.n) {
    int found = 0, attempts = 0;
    const int budget = samples * kMaxAttemptsFactor;
    while (found < samples && attempts < budget) {
      ++attempts;
      Vec lam = random_lambda(rng, fam.n);
      if (!margin_ok(fam, lam)) continue;
      int r = -1;
      for (int i = 0; i < fam.n; ++i) {
        if (lam[i] < -1e-3) r = i;
      }
      if (r < 0) continue;
      ++found;
      ch.observe(negative_entry_gap(fam, lam, r));
    }
  }
  out.push_back(ch.take());
}

void check_gradient_fd(const CurvatureFamily& fam, SplitMix64 rng, int samples,
                       std::vector<PropertyResult>& out) {
  Check ch("gradient_fd", fam.label, fam.n, 2e-5);
  const double step = 1e-7;
  for (int s = 0; s < samples; ++s) {
    Vec lam(fam.n);
    if (!next_cone_sample(rng, fam, lam)) break;
    const Vec g = grad_f(fam, lam);
    double worst = 0;
    for (int i = 0; i < fam.n; ++i) {
      const double hh = step * std::max(1.0, std::abs(lam[i]));
      Vec up = lam, dn = lam;
      up[i] += hh;
      dn[i] -= hh;
      if (!in_cone(fam, up) || !in_cone(fam, dn)) continue;
      const double fd = (eval_f(fam, up) - eval_f(fam, dn)) / (2.0 * hh);
      const double scale = std::max(1.0, std::abs(g[i]));
      worst = std::max(worst, std::abs(fd - g[i]) / scale);
    }
    ch.observe(-worst);
  }
  out.push_back(ch.take());
}

void check_gamma_inverse(int n, SplitMix64 rng, int samples,
                         std::vector<PropertyResult>& out) {
  Check ch("gamma_inverse", "", n, 1e-12);
  for (int s = 0; s < samples; ++s) {
    Vec du(n);
    for (int i = 0; i < n; ++i) du[i] = uniform_in(rng, -2.0, 2.0);
    const Mat up = gamma_upper(du);
    const Mat lo = gamma_lower(du);
    const double err_inv = max_abs(sub(mul(up, lo), identity(n)));
    const double err_sq =
        max_abs(sub(mul(lo, lo), add(identity(n), outer(du, du))));
    ch.observe(-std::max(err_inv, err_sq));
  }
  out.push_back(ch.take());
}

void check_curvature_shift(int n, SplitMix64 rng, int samples,
                           std::vector<PropertyResult>& out) {
  Check ch("curvature_shift", "", n, 1e-11);
  for (int s = 0; s < samples; ++s) {
    const RandomState r = next_graph_state(rng, nullptr, n);
    if (!r.ok) break;
    const Vec ke = principal_curvatures(r.st.shape_e);
    double err = 0;
    for (int i = 0; i < n; ++i) {
      err = std::max(err,
                     std::abs(r.st.kappa[i] - (r.st.u * ke[i] + 1.0 / r.st.w)));
    }
    ch.observe(-err);
  }
  out.push_back(ch.take());
}

void check_split_complementarity(int n, SplitMix64 rng, int samples,
                                 std::vector<PropertyResult>& out) {
  Check ch("split_complementarity", "", n, 1e-12);
  for (int s = 0; s < samples; ++s) {
    Mat A(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double v = uniform_in(rng, -3.0, 3.0);
        A(i, j) = v;
        A(j, i) = v;
      }
    }
    const MatrixSplit sp = split_pm(A);
    double err = max_abs(sub(sub(sp.plus, sp.minus), A));
    err = std::max(err, max_abs(mul(sp.plus, sp.minus)));
    const Vec ep = principal_curvatures(sp.plus);
    const Vec em = principal_curvatures(sp.minus);
    err = std::max(err, std::max(-ep[0], -em[0]));
    ch.observe(-err);
  }
  out.push_back(ch.take());
}

void check_trace_identity(const CurvatureFamily& fam, SplitMix64 rng,
                          int samples, std::vector<PropertyResult>& out) {
  Check ch("trace_identity", fam.label, fam.n, 1e-10);
  for (int s = 0; s < samples; ++s) {
    const RandomState r = next_graph_state(rng, &fam, fam.n);
    if (!r.ok) break;
    const LinearizationAtPoint lin = linearize(fam, r.st);
    const double lhs = frobenius_inner(lin.Gst, r.st.d2u);
    const double rhs = r.st.u * lin.Gu;
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    ch.observe(-std::abs(lhs - rhs) / scale);
  }
  out.push_back(ch.take());
}

void check_eigen_sandwich(const CurvatureFamily& fam, SplitMix64 rng,
                          int samples, std::vector<PropertyResult>& out) {
  Check ch("eigen_sandwich", fam.label, fam.n, 1e-10);
  for (int s = 0; s < samples; ++s) {
    const RandomState r = next_graph_state(rng, &fam, fam.n);
    if (!r.ok) break;
    const auto slack = eigen_sandwich_slack(fam, r.st);
    ch.observe(std::min(slack.first, slack.second));
  }
  out.push_back(ch.take());
}

void check_linearization_fd(const CurvatureFamily& fam, SplitMix64 rng,
                            int samples, std::vector<PropertyResult>& out) {
  Check ch("linearization_fd", fam.label, fam.n, 1e-5);
  const double step = 1e-6;
  for (int s = 0; s < samples; ++s) {
    const RandomState r = next_graph_state(rng, &fam, fam.n);
    if (!r.ok) break;
    const LinearizationAtPoint lin = linearize(fam, r.st);

    // Random symmetric Hessian direction, gradient direction, and height
    // bump, pushed through G by central differences.
    const int n = fam.n;
    Mat dH(n);
    Vec dg(n);
    for (int i = 0; i < n; ++i) {
      dg[i] = uniform_in(rng, -1.0, 1.0);
      for (int j = i; j < n; ++j) {
        const double v = uniform_in(rng, -1.0, 1.0);
        dH(i, j) = v;
        dH(j, i) = v;
      }
    }
    const double dc = uniform_in(rng, -1.0, 1.0);

    auto eval_at = [&](double sgn) {
      const double u = r.st.u + sgn * step * dc;
      Vec du = r.st.du;
      Mat d2u = r.st.d2u;
      for (int i = 0; i < n; ++i) {
        du[i] += sgn * step * dg[i];
        for (int j = 0; j < n; ++j) d2u(i, j) += sgn * step * dH(i, j);
      }
      return eval_G(fam, hyperbolic_shape(u, du, d2u));
    };

    double gp, gm;
    try {
      gp = eval_at(1.0);
      gm = eval_at(-1.0);
    } catch (const std::exception&) {
      continue;  // perturbation left the cone; draw again
    }
    const double fd = (gp - gm) / (2.0 * step);
    const double pred =
        frobenius_inner(lin.Gst, dH) + dot(lin.Gs, dg) + lin.Gu * dc;
    const double scale = std::max({1.0, std::abs(fd), std::abs(pred)});
    ch.observe(-std::abs(fd - pred) / scale);
  }
  out.push_back(ch.take());
}

void check_gradient_norm_bound(const CurvatureFamily& fam, SplitMix64 rng,
                               int samples, std::vector<PropertyResult>& out) {
  // |Gs| <= f/w + (2/w) tr F + 2 sum_i f_i |kappa_i|, from |Du| <= w,
  // |gamma| <= 1, and F commuting with the shape matrix.
  Check ch("gradient_term_bound", fam.label, fam.n, 1e-10);
  for (int s = 0; s < samples; ++s) {
    const RandomState r = next_graph_state(rng, &fam, fam.n);
    if (!r.ok) break;
    const LinearizationAtPoint lin = linearize(fam, r.st);
    const Vec fi = grad_f(fam, r.st.kappa);
    const double f = eval_f(fam, r.st.kappa);
    double bound = f / r.st.w + 2.0 * trace(lin.Fij) / r.st.w;
    for (int i = 0; i < fam.n; ++i) {
      bound += 2.0 * fi[i] * std::abs(r.st.kappa[i]);
    }
    double gs = 0;
    for (int i = 0; i < fam.n; ++i) gs += lin.Gs[i] * lin.Gs[i];
    ch.observe(bound - std::sqrt(gs));
  }
  out.push_back(ch.take());
}

}  // namespace

bool VerifyReport::all_pass() const {
  for (const PropertyResult& r : checks) {
    if (!r.pass()) return false;
  }
  return true;
}

std::vector<CurvatureFamily> verification_families() {
  std::vector<CurvatureFamily> fams;
  fams.push_back(parse_family("mean", 2));
  fams.push_back(parse_family("H2", 2));
  fams.push_back(parse_family("H2/H1", 2));
  fams.push_back(parse_family("mean", 3));
  fams.push_back(parse_family("H2", 3));
  fams.push_back(parse_family("H3", 3));
  fams.push_back(parse_family("H2/H1", 3));
  fams.push_back(parse_family("H3/H1", 3));
  fams.push_back(parse_family("avg(H1,H2/H1)", 3));
  return fams;
}

VerifyReport run_property_suite(std::uint64_t seed, int samples) {
  VerifyReport rep;
  rep.seed = seed;
  rep.samples_per_check = samples;
  std::uint64_t stream = 0;
  auto rng = [&]() { return SplitMix64(stream_seed(seed, stream++)); };

  for (int n : {2, 3}) {
    check_gamma_inverse(n, rng(), samples, rep.checks);
    check_curvature_shift(n, rng(), samples, rep.checks);
    check_split_complementarity(n, rng(), samples, rep.checks);
  }
  for (const CurvatureFamily& fam : verification_families()) {
    check_homogeneity(fam, rng(), samples, rep.checks);
    check_normalization(fam, rep.checks);
    check_monotonicity(fam, rng(), samples, rep.checks);
    check_midpoint_concavity(fam, rng(), samples, rep.checks);
    check_mean_bound(fam, rng(), samples, rep.checks);
    check_gradient_sum(fam, rng(), samples, rep.checks);
    check_negative_entry_gap(fam, rng(), samples, rep.checks);
    check_gradient_fd(fam, rng(), samples, rep.checks);
    check_trace_identity(fam, rng(), samples, rep.checks);
    check_eigen_sandwich(fam, rng(), samples, rep.checks);
    check_linearization_fd(fam, rng(), samples, rep.checks);
    check_gradient_norm_bound(fam, rng(), samples, rep.checks);
  }
  return rep;
}

}  // namespace hcg
