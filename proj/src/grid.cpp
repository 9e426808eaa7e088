#include "hcg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "hcg/errors.hpp"

namespace hcg {

const std::array<std::array<int, 2>, kArmCount> kArmDir = {{
    {{1, 0}},    // E
    {{-1, 0}},   // W
    {{0, 1}},    // N
    {{0, -1}},   // S
    {{1, 1}},    // NE
    {{-1, -1}},  // SW
    {{-1, 1}},   // NW
    {{1, -1}},   // SE
}};

DomainShape make_disk(double radius) {
  if (!(radius > 0)) throw PreconditionViolated("disk radius must be positive");
  DomainShape s;
  s.name = "disk";
  s.level = [radius](double x, double y) { return std::hypot(x, y) - radius; };
  s.exact_distance = true;
  s.r1 = radius;
  s.r2 = std::numeric_limits<double>::infinity();
  s.incircle = radius;
  s.circumradius = radius;
  s.bbox_half_x = s.bbox_half_y = radius;
  return s;
}

DomainShape make_ellipse(double a, double b) {
  if (!(a > 0 && b > 0)) throw PreconditionViolated("ellipse axes must be positive");
  if (a < b) std::swap(a, b);
  DomainShape s;
  s.name = "ellipse";
  s.level = [a, b](double x, double y) {
    const double xa = x / a, yb = y / b;
    return std::sqrt(xa * xa + yb * yb) - 1.0;
  };
  s.exact_distance = false;
  s.r1 = b * b / a;  // curvature radius at the major-axis vertices
  s.r2 = std::numeric_limits<double>::infinity();
  s.incircle = b;
  s.circumradius = a;
  s.bbox_half_x = a;
  s.bbox_half_y = b;
  return s;
}

DomainShape make_stadium(double L, double r) {
  if (!(L > 0 && r > 0)) throw PreconditionViolated("stadium sizes must be positive");
  DomainShape s;
  s.name = "stadium";
  s.level = [L, r](double x, double y) {
    const double qx = std::max(std::fabs(x) - L, 0.0);
    return std::hypot(qx, y) - r;
  };
  s.exact_distance = true;
  s.r1 = r;
  s.r2 = std::numeric_limits<double>::infinity();
  s.incircle = r;
  s.circumradius = L + r;
  s.bbox_half_x = L + r;
  s.bbox_half_y = r;
  return s;
}

DomainShape make_sampled(std::vector<double> values, int nx, int ny,
                         double half_x, double half_y) {
  if (nx < 2 || ny < 2 || static_cast<int>(values.size()) != nx * ny)
    throw PreconditionViolated("sampled level set needs nx*ny values");
  auto grid = std::make_shared<std::vector<double>>(std::move(values));
  DomainShape s;
  s.name = "sampled";
  s.level = [grid, nx, ny, half_x, half_y](double x, double y) {
    const double gx =
        std::clamp((x + half_x) / (2 * half_x) * (nx - 1), 0.0, nx - 1.0);
    const double gy =
        std::clamp((y + half_y) / (2 * half_y) * (ny - 1), 0.0, ny - 1.0);
    const int i0 = std::min(static_cast<int>(gx), nx - 2);
    const int j0 = std::min(static_cast<int>(gy), ny - 2);
    const double fx = gx - i0, fy = gy - j0;
    const auto& v = *grid;
    const double v00 = v[j0 * nx + i0], v10 = v[j0 * nx + i0 + 1];
    const double v01 = v[(j0 + 1) * nx + i0], v11 = v[(j0 + 1) * nx + i0 + 1];
    return (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10 +
           (1 - fx) * fy * v01 + fx * fy * v11;
  };
  s.exact_distance = false;
  double deepest = 0;
  for (double v : *grid) deepest = std::min(deepest, v);
  s.r1 = s.incircle = -deepest;
  s.r2 = std::numeric_limits<double>::infinity();
  s.circumradius = std::hypot(half_x, half_y);
  s.bbox_half_x = half_x;
  s.bbox_half_y = half_y;
  return s;
}

namespace {

// Fraction of the segment from an inside point p toward q (level >= 0 at q)
// where the level set crosses zero.
double cut_fraction(const DomainShape& shape, Vec2 p, Vec2 q) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double vx = p.x + mid * (q.x - p.x);
    const double vy = p.y + mid * (q.y - p.y);
    if (shape.level(vx, vy) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return std::max(hi, 1e-10);
}

Vec2 level_gradient(const DomainShape& shape, Vec2 p, double step) {
  const double gx =
      (shape.level(p.x + step, p.y) - shape.level(p.x - step, p.y)) / (2 * step);
  const double gy =
      (shape.level(p.x, p.y + step) - shape.level(p.x, p.y - step)) / (2 * step);
  return {gx, gy};
}

// Curvature of the level line through p: for phi < 0 inside, positive
// curvature means the boundary bends around the domain (convex side).
double level_curvature(const DomainShape& shape, Vec2 p, double step) {
  const auto f = [&](double x, double y) { return shape.level(x, y); };
  const double fx = (f(p.x + step, p.y) - f(p.x - step, p.y)) / (2 * step);
  const double fy = (f(p.x, p.y + step) - f(p.x, p.y - step)) / (2 * step);
  const double fxx =
      (f(p.x + step, p.y) - 2 * f(p.x, p.y) + f(p.x - step, p.y)) / (step * step);
  const double fyy =
      (f(p.x, p.y + step) - 2 * f(p.x, p.y) + f(p.x, p.y - step)) / (step * step);
  const double fxy = (f(p.x + step, p.y + step) - f(p.x + step, p.y - step) -
                      f(p.x - step, p.y + step) + f(p.x - step, p.y - step)) /
                     (4 * step * step);
  const double g2 = fx * fx + fy * fy;
  if (g2 <= 0) return 0;
  return (fxx * fy * fy - 2 * fxy * fx * fy + fyy * fx * fx) / std::pow(g2, 1.5);
}

}  // namespace

int GridDomain::index_of(int i, int j) const {
  if (i < -mx_ || i > mx_ || j < -my_ || j > my_) return -1;
  return index_[(j + my_) * (2 * mx_ + 1) + (i + mx_)];
}

GridDomain GridDomain::build(DomainShape shape, double h) {
  if (!(h > 0)) throw PreconditionViolated("grid spacing must be positive");
  GridDomain dom;
  dom.shape_ = std::move(shape);
  dom.h_ = h;
  dom.mx_ = static_cast<int>(std::ceil((dom.shape_.bbox_half_x + 2 * h) / h));
  dom.my_ = static_cast<int>(std::ceil((dom.shape_.bbox_half_y + 2 * h) / h));

  const int wx = 2 * dom.mx_ + 1, wy = 2 * dom.my_ + 1;
  dom.index_.assign(static_cast<std::size_t>(wx) * wy, -1);

  const auto at = [&](int i, int j) -> int& {
    return dom.index_[(j + dom.my_) * wx + (i + dom.mx_)];
  };
  const auto coord = [&](int i, int j) -> Vec2 {
    return {dom.shape_.center.x + i * h, dom.shape_.center.y + j * h};
  };

  // Inside nodes in row-major order keep the Jacobian band narrow.
  for (int j = -dom.my_; j <= dom.my_; ++j)
    for (int i = -dom.mx_; i <= dom.mx_; ++i) {
      const Vec2 p = coord(i, j);
      if (dom.shape_.level(p.x, p.y) < 0.0) {
        GridNode node;
        node.i = i;
        node.j = j;
        node.x = p.x;
        node.y = p.y;
        at(i, j) = static_cast<int>(dom.nodes_.size());
        dom.nodes_.push_back(node);
      }
    }
  if (dom.nodes_.empty())
    throw PreconditionViolated("no grid nodes inside the domain");

  double min_curv = std::numeric_limits<double>::infinity();
  for (auto& node : dom.nodes_) {
    bool cut_any = false;
    for (int arm = 0; arm < kArmCount; ++arm) {
      const int ni = node.i + kArmDir[arm][0];
      const int nj = node.j + kArmDir[arm][1];
      const int nbr = dom.index_of(ni, nj);
      if (nbr >= 0) {
        node.arms[arm] = Arm{nbr, 1.0};
        continue;
      }
      cut_any = true;
      const Vec2 p{node.x, node.y};
      const Vec2 q = coord(ni, nj);
      const double theta = cut_fraction(dom.shape_, p, q);
      node.arms[arm] = Arm{-1, theta};
      if (arm < 4) {
        BoundaryCut cut;
        cut.point = {p.x + theta * (q.x - p.x), p.y + theta * (q.y - p.y)};
        Vec2 g = level_gradient(dom.shape_, cut.point, h / 64);
        const double gn = std::hypot(g.x, g.y);
        cut.normal_out = gn > 0 ? Vec2{g.x / gn, g.y / gn} : Vec2{0, 0};
        cut.node = static_cast<int>(&node - dom.nodes_.data());
        cut.arm = arm;
        dom.cuts_.push_back(cut);
        min_curv = std::min(
            min_curv, level_curvature(dom.shape_, cut.point, h / 16));
      }
    }
    node.cls = cut_any ? NodeClass::BoundaryAdjacent : NodeClass::Interior;
  }
  dom.min_boundary_curvature_ = dom.cuts_.empty() ? 0.0 : min_curv;

  // Every interior node must see only inside nodes across its stencil.
  for (const auto& node : dom.nodes_)
    if (node.cls == NodeClass::Interior)
      for (const auto& arm : node.arms)
        if (arm.neighbor < 0)
          throw PreconditionViolated("interior node with a cut arm");

  return dom;
}

}  // namespace hcg
