#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hcg/smallmat.hpp"

// Normalized symmetric curvature functions f(lambda) on Garding cones:
// k-th root of the normalized elementary symmetric function, ratios of two
// of them, and arithmetic means of those.  All members satisfy f(1,...,1)=1,
// are concave and strictly increasing on their cone, and are positively
// homogeneous of degree one.

namespace hcg {

enum class FamilyKind { HkRoot, Quotient, Composite };

struct CurvatureFamily {
  FamilyKind kind = FamilyKind::HkRoot;
  int n = 0;  // number of curvature entries
  int k = 1;  // HkRoot: f = (sigma_k / C(n,k))^{1/k}; Quotient: numerator order
  int l = 0;  // Quotient: denominator order, f = (H_k/H_l)^{1/(k-l)}
  std::vector<CurvatureFamily> members;  // Composite only
  std::vector<double> weights;           // normalized to sum 1
  std::string label;

  static CurvatureFamily hk_root(int k, int n);
  static CurvatureFamily quotient(int k, int l, int n);
  static CurvatureFamily mean(int n) { return hk_root(1, n); }
  static CurvatureFamily average(std::vector<CurvatureFamily> members);

  // Order of the Garding cone Gamma_k the family is admissible on.
  int cone_order() const;
  // Whether eval/grad need the cone precondition (k = 1 evaluates anywhere).
  bool needs_cone() const;
};

// Grammar: "mean" | "H<k>" | "H<k>/H<l>" | "avg(item, item, ...)".
CurvatureFamily parse_family(std::string_view text, int n);

// sigma_k(lambda) by the one-variable-at-a-time recurrence.
double elementary_symmetric(const Vec& lambda, int k);
// sigma_k of lambda with entry `skip` removed.
double elementary_symmetric_excluding(const Vec& lambda, int k, int skip);

// Strict positivity of sigma_1..sigma_{cone order}; zero is outside.
bool in_cone(const CurvatureFamily& fam, const Vec& lambda);

// Smallest value of sigma_j(lambda), j = 1..cone order (members minimized
// for composites).  Negative outside the cone; used as an admissibility
// margin by the solvers.
double cone_margin(const CurvatureFamily& fam, const Vec& lambda);

double eval_f(const CurvatureFamily& fam, const Vec& lambda);
Vec grad_f(const CurvatureFamily& fam, const Vec& lambda);

// For lambda in the cone with lambda[r] < 0, the slack of
//   sum_{i != r} f_i lambda_i^2  >=  (2 f |lambda_r| + f_r lambda_r^2)/(n-1).
double negative_entry_gap(const CurvatureFamily& fam, const Vec& lambda, int r);

// Weaker form: sum_{i != r} f_i lambda_i^2 - (1/n) sum_i f_i lambda_i^2.
double negative_entry_gap_weak(const CurvatureFamily& fam, const Vec& lambda,
                               int r);

// min over a deterministic sample of the delta-ball around (1,...,1) of
// f(lambda_1, ..., lambda_{n-1}, lambda_n + R): probes the behavior of f
// when one entry is pushed toward infinity.  Sample: center plus the 2n
// axis points at distance delta.
double limit_at_infinity_sample(const CurvatureFamily& fam, double delta,
                                double R);

}  // namespace hcg
