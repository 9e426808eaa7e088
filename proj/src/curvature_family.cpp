#include "hcg/curvature_family.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "hcg/errors.hpp"

namespace hcg {

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

void validate_dim(int n) {
  if (n < 1 || n > kMaxDim)
    throw PreconditionViolated("dimension out of range [1," +
                               std::to_string(kMaxDim) + "]");
}

}  // namespace

CurvatureFamily CurvatureFamily::hk_root(int k, int n) {
  validate_dim(n);
  if (k < 1 || k > n) throw PreconditionViolated("need 1 <= k <= n");
  CurvatureFamily f;
  f.kind = FamilyKind::HkRoot;
  f.n = n;
  f.k = k;
  f.label = (k == 1) ? std::string("mean") : "H" + std::to_string(k);
  return f;
}

CurvatureFamily CurvatureFamily::quotient(int k, int l, int n) {
  validate_dim(n);
  if (!(1 <= l && l < k && k <= n))
    throw PreconditionViolated("need 1 <= l < k <= n");
  CurvatureFamily f;
  f.kind = FamilyKind::Quotient;
  f.n = n;
  f.k = k;
  f.l = l;
  f.label = "H" + std::to_string(k) + "/H" + std::to_string(l);
  return f;
}

CurvatureFamily CurvatureFamily::average(std::vector<CurvatureFamily> members) {
  if (members.empty()) throw PreconditionViolated("average needs members");
  const int n = members.front().n;
  for (const auto& m : members)
    if (m.n != n) throw PreconditionViolated("average members must share n");
  CurvatureFamily f;
  f.kind = FamilyKind::Composite;
  f.n = n;
  f.members = std::move(members);
  f.weights.assign(f.members.size(), 1.0 / double(f.members.size()));
  f.label = "avg(";
  for (std::size_t i = 0; i < f.members.size(); ++i) {
    if (i) f.label += ",";
    f.label += f.members[i].label;
  }
  f.label += ")";
  return f;
}

int CurvatureFamily::cone_order() const {
  if (kind == FamilyKind::Composite) {
    int m = 1;
    for (const auto& mem : members) m = std::max(m, mem.cone_order());
    return m;
  }
  return k;
}

bool CurvatureFamily::needs_cone() const {
  switch (kind) {
    case FamilyKind::HkRoot:
      return k > 1;
    case FamilyKind::Quotient:
      return true;
    case FamilyKind::Composite:
      for (const auto& m : members)
        if (m.needs_cone()) return true;
      return false;
  }
  return true;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

int parse_order(std::string_view s) {
  s = trim(s);
  if (s.size() < 2 || (s[0] != 'H' && s[0] != 'h'))
    throw FamilyParseError("expected H<k>, got '" + std::string(s) + "'");
  int k = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw FamilyParseError("bad order in '" + std::string(s) + "'");
    k = k * 10 + (s[i] - '0');
  }
  return k;
}

CurvatureFamily parse_single(std::string_view s, int n) {
  s = trim(s);
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "mean") return CurvatureFamily::mean(n);
  const auto slash = s.find('/');
  try {
    if (slash == std::string_view::npos)
      return CurvatureFamily::hk_root(parse_order(s), n);
    return CurvatureFamily::quotient(parse_order(s.substr(0, slash)),
                                     parse_order(s.substr(slash + 1)), n);
  } catch (const PreconditionViolated& e) {
    throw FamilyParseError(std::string(e.what()) + " in '" + std::string(s) +
                           "'");
  }
}

}  // namespace

CurvatureFamily parse_family(std::string_view text, int n) {
  validate_dim(n);
  std::string_view s = trim(text);
  std::string lower(s.substr(0, 4));
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "avg(") {
    if (s.back() != ')') throw FamilyParseError("missing ')' in avg(...)");
    std::string_view inner = s.substr(4, s.size() - 5);
    std::vector<CurvatureFamily> members;
    std::size_t start = 0;
    while (start <= inner.size()) {
      auto comma = inner.find(',', start);
      if (comma == std::string_view::npos) comma = inner.size();
      members.push_back(parse_single(inner.substr(start, comma - start), n));
      start = comma + 1;
      if (comma == inner.size()) break;
    }
    return CurvatureFamily::average(std::move(members));
  }
  return parse_single(s, n);
}

double elementary_symmetric(const Vec& lambda, int k) {
  if (k < 0 || k > lambda.n) throw PreconditionViolated("bad sigma_k order");
  std::array<double, kMaxDim + 1> e{};
  e[0] = 1.0;
  for (int i = 0; i < lambda.n; ++i)
    for (int j = std::min(k, i + 1); j >= 1; --j)
      e[j] += lambda[i] * e[j - 1];
  return e[k];
}

double elementary_symmetric_excluding(const Vec& lambda, int k, int skip) {
  if (k < 0 || k > lambda.n - 1) throw PreconditionViolated("bad sigma_k order");
  std::array<double, kMaxDim + 1> e{};
  e[0] = 1.0;
  int seen = 0;
  for (int i = 0; i < lambda.n; ++i) {
    if (i == skip) continue;
    ++seen;
    for (int j = std::min(k, seen); j >= 1; --j) e[j] += lambda[i] * e[j - 1];
  }
  return e[k];
}

bool in_cone(const CurvatureFamily& fam, const Vec& lambda) {
  if (lambda.n != fam.n) throw PreconditionViolated("lambda dimension mismatch");
  if (fam.kind == FamilyKind::Composite) {
    for (const auto& m : fam.members)
      if (!in_cone(m, lambda)) return false;
    return true;
  }
  for (int j = 1; j <= fam.cone_order(); ++j)
    if (!(elementary_symmetric(lambda, j) > 0.0)) return false;
  return true;
}

double cone_margin(const CurvatureFamily& fam, const Vec& lambda) {
  if (fam.kind == FamilyKind::Composite) {
    double m = 1e300;
    for (const auto& mem : fam.members)
      m = std::min(m, cone_margin(mem, lambda));
    return m;
  }
  double m = 1e300;
  for (int j = 1; j <= fam.cone_order(); ++j)
    m = std::min(m, elementary_symmetric(lambda, j));
  return m;
}

namespace {

void require_cone(const CurvatureFamily& fam, const Vec& lambda) {
  if (fam.needs_cone() && !in_cone(fam, lambda))
    throw NotInCone("curvature vector outside the cone of " + fam.label);
}

double normalized_sym(const Vec& lambda, int k, int n) {
  return elementary_symmetric(lambda, k) / binom(n, k);
}

}  // namespace

double eval_f(const CurvatureFamily& fam, const Vec& lambda) {
  if (lambda.n != fam.n) throw PreconditionViolated("lambda dimension mismatch");
  switch (fam.kind) {
    case FamilyKind::HkRoot: {
      if (fam.k == 1) return elementary_symmetric(lambda, 1) / fam.n;
      require_cone(fam, lambda);
      return std::pow(normalized_sym(lambda, fam.k, fam.n), 1.0 / fam.k);
    }
    case FamilyKind::Quotient: {
      require_cone(fam, lambda);
      const double q = normalized_sym(lambda, fam.k, fam.n) /
                       normalized_sym(lambda, fam.l, fam.n);
      return std::pow(q, 1.0 / (fam.k - fam.l));
    }
    case FamilyKind::Composite: {
      double s = 0;
      for (std::size_t i = 0; i < fam.members.size(); ++i)
        s += fam.weights[i] * eval_f(fam.members[i], lambda);
      return s;
    }
  }
  throw PreconditionViolated("unreachable family kind");
}

Vec grad_f(const CurvatureFamily& fam, const Vec& lambda) {
  if (lambda.n != fam.n) throw PreconditionViolated("lambda dimension mismatch");
  const int n = fam.n;
  Vec g(n);
  switch (fam.kind) {
    case FamilyKind::HkRoot: {
      if (fam.k == 1) {
        for (int i = 0; i < n; ++i) g[i] = 1.0 / n;
        return g;
      }
      require_cone(fam, lambda);
      const int k = fam.k;
      const double H = normalized_sym(lambda, k, n);
      const double c = std::pow(H, (1.0 - k) / k) / (k * binom(n, k));
      for (int i = 0; i < n; ++i)
        g[i] = c * elementary_symmetric_excluding(lambda, k - 1, i);
      return g;
    }
    case FamilyKind::Quotient: {
      require_cone(fam, lambda);
      const int k = fam.k, l = fam.l, m = fam.k - fam.l;
      const double Hk = normalized_sym(lambda, k, n);
      const double Hl = normalized_sym(lambda, l, n);
      const double q = Hk / Hl;
      const double c = std::pow(q, (1.0 - m) / m) / m;
      for (int i = 0; i < n; ++i) {
        const double dHk =
            elementary_symmetric_excluding(lambda, k - 1, i) / binom(n, k);
        const double dHl =
            elementary_symmetric_excluding(lambda, l - 1, i) / binom(n, l);
        g[i] = c * (dHk * Hl - Hk * dHl) / (Hl * Hl);
      }
      return g;
    }
    case FamilyKind::Composite: {
      for (std::size_t j = 0; j < fam.members.size(); ++j) {
        const Vec gm = grad_f(fam.members[j], lambda);
        for (int i = 0; i < n; ++i) g[i] += fam.weights[j] * gm[i];
      }
      return g;
    }
  }
  throw PreconditionViolated("unreachable family kind");
}

double negative_entry_gap(const CurvatureFamily& fam, const Vec& lambda,
                          int r) {
  if (r < 0 || r >= lambda.n) throw PreconditionViolated("index out of range");
  if (!(lambda[r] < 0.0))
    throw PreconditionViolated("entry r must be negative");
  if (!in_cone(fam, lambda))
    throw NotInCone("gap requires lambda in the cone");
  if (fam.n < 2) throw PreconditionViolated("need n >= 2");
  const double f = eval_f(fam, lambda);
  const Vec g = grad_f(fam, lambda);
  double lhs = 0;
  for (int i = 0; i < lambda.n; ++i)
    if (i != r) lhs += g[i] * lambda[i] * lambda[i];
  const double rhs =
      (2.0 * f * std::fabs(lambda[r]) + g[r] * lambda[r] * lambda[r]) /
      (fam.n - 1);
  return lhs - rhs;
}

double negative_entry_gap_weak(const CurvatureFamily& fam, const Vec& lambda,
                               int r) {
  if (r < 0 || r >= lambda.n) throw PreconditionViolated("index out of range");
  if (!in_cone(fam, lambda))
    throw NotInCone("gap requires lambda in the cone");
  const Vec g = grad_f(fam, lambda);
  double all = 0, excl = 0;
  for (int i = 0; i < lambda.n; ++i) {
    const double t = g[i] * lambda[i] * lambda[i];
    all += t;
    if (i != r) excl += t;
  }
  return excl - all / fam.n;
}

double limit_at_infinity_sample(const CurvatureFamily& fam, double delta,
                                double R) {
  if (!(delta >= 0.0 && delta < 0.5))
    throw PreconditionViolated("delta must lie in [0, 0.5)");
  if (!(R >= 0.0)) throw PreconditionViolated("R must be nonnegative");
  const int n = fam.n;
  Vec base(n);
  for (int i = 0; i < n; ++i) base[i] = 1.0;

  double best = 1e300;
  const auto probe = [&](const Vec& p) {
    Vec q = p;
    q[n - 1] += R;
    best = std::min(best, eval_f(fam, q));
  };
  probe(base);
  if (delta > 0.0) {
    for (int i = 0; i < n; ++i) {
      Vec p = base;
      p[i] = 1.0 + delta;
      probe(p);
      p[i] = 1.0 - delta;
      probe(p);
    }
  }
  return best;
}

}  // namespace hcg
