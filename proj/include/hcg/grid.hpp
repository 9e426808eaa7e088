#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

// Embedded-boundary lattice over a planar domain given by a level set
// (negative inside).  Every inside node carries eight arms (E, W, N, S and
// the four diagonals); an arm either reaches another inside node or is cut
// by the boundary at a fractional distance theta in (0, 1].

namespace hcg {

struct Vec2 {
  double x = 0, y = 0;
};

struct DomainShape {
  std::string name;
  std::function<double(double, double)> level;  // < 0 inside
  bool exact_distance = false;
  // Largest radius of interior tangent disks rolling along the boundary.
  double r1 = 0;
  // Radius of exterior tangent disks; infinity for convex domains.
  double r2 = 0;
  double incircle = 0;      // largest centered inscribed disk
  double circumradius = 0;  // smallest centered enclosing disk
  Vec2 center{0, 0};
  double bbox_half_x = 0, bbox_half_y = 0;
};

DomainShape make_disk(double radius);
// Semi-axes a >= b > 0 after normalization; swaps if given in reverse.
DomainShape make_ellipse(double a, double b);
// Capsule: rectangle of length 2L capped by half-disks of radius r.
DomainShape make_stadium(double L, double r);
// Bilinear interpolation of sampled level-set values (row-major, ny rows of
// nx), on [-half_x, half_x] x [-half_y, half_y].  r1/incircle default to the
// deepest sample, circumradius to the widest boundary sample.
DomainShape make_sampled(std::vector<double> values, int nx, int ny,
                         double half_x, double half_y);

enum class NodeClass : std::uint8_t { Exterior = 0, Interior, BoundaryAdjacent };

// Arm order: E, W, N, S, NE, SW, NW, SE.
inline constexpr int kArmCount = 8;
extern const std::array<std::array<int, 2>, kArmCount> kArmDir;

struct Arm {
  int neighbor = -1;   // inside-node index, or -1 when cut by the boundary
  double theta = 1.0;  // fraction of the arm length to the value point
};

struct GridNode {
  int i = 0, j = 0;
  double x = 0, y = 0;
  NodeClass cls = NodeClass::Exterior;
  std::array<Arm, kArmCount> arms;
};

// Boundary intersection of an axis arm, with the outward normal there.
struct BoundaryCut {
  Vec2 point;
  Vec2 normal_out;
  int node = -1;
  int arm = -1;
};

// Node values over the inside nodes of a GridDomain, in node order.
struct ScalarField {
  std::vector<double> values;
  double eps = 0;  // Dirichlet value on the boundary
  bool admissible = false;
  bool converged = false;
};

class GridDomain {
 public:
  static GridDomain build(DomainShape shape, double h);

  double h() const { return h_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const std::vector<GridNode>& nodes() const { return nodes_; }
  const DomainShape& shape() const { return shape_; }
  const std::vector<BoundaryCut>& boundary_cuts() const { return cuts_; }

  // Lattice coordinates are relative to the shape center; -1 when outside.
  int index_of(int i, int j) const;
  int lattice_extent_x() const { return mx_; }
  int lattice_extent_y() const { return my_; }

  // Smallest boundary curvature sampled at the cuts (negative values mean
  // the boundary fails mean-convexity there).
  double min_boundary_curvature() const { return min_boundary_curvature_; }

 private:
  DomainShape shape_;
  double h_ = 0;
  int mx_ = 0, my_ = 0;
  std::vector<int> index_;  // (2mx+1) x (2my+1) lattice -> node index
  std::vector<GridNode> nodes_;
  std::vector<BoundaryCut> cuts_;
  double min_boundary_curvature_ = 0;
};

}  // namespace hcg
