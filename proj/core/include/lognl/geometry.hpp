#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lognl {

/// Coordinates in R^N for N <= 2. Unused trailing components stay zero.
using Point = std::array<double, 2>;

inline Point operator+(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Point operator-(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Point operator*(double s, const Point& a) { return {s * a[0], s * a[1]}; }
inline double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Point& a) { return std::hypot(a[0], a[1]); }

enum class Shape { Interval, Ball, Box };

/// Bounded convex domain in dimension 1 or 2. Intervals are 1-D boxes; balls
/// may be 1-D (then they are intervals centred at `center`).
class Domain {
 public:
  static Domain interval(double a, double b);
  static Domain ball(const Point& center, double radius, int dim);
  static Domain box(const Point& lo, const Point& hi, int dim);

  Shape shape() const { return shape_; }
  int dim() const { return dim_; }
  const Point& center() const { return center_; }
  double radius() const { return radius_; }
  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }

  /// Strict interior membership.
  bool contains(const Point& x) const;
  /// Euclidean distance to the boundary; valid for interior and exterior points.
  double dist_to_boundary(const Point& x) const;
  double diameter() const;
  /// sup over the domain of dist(x, boundary).
  double inradius() const;
  /// Axis-aligned bounding box.
  Point bbox_lo() const;
  Point bbox_hi() const;
  /// Largest uniform exterior-ball radius; std::nullopt means unbounded
  /// (every shipped shape is convex).
  std::optional<double> exterior_ball_radius() const;
  /// A boundary point and the inward unit normal there, used by the
  /// boundary-regularity diagnostics.
  Point boundary_probe() const;
  Point inward_normal() const;

  std::string describe() const;

 private:
  Shape shape_ = Shape::Interval;
  int dim_ = 1;
  Point center_{};
  double radius_ = 0.0;
  Point lo_{};
  Point hi_{};
};

inline double dist_to_boundary(const Domain& domain, const Point& x) {
  return domain.dist_to_boundary(x);
}
inline std::optional<double> exterior_ball_radius(const Domain& domain) {
  return domain.exterior_ball_radius();
}

/// One multilinear-interpolation contribution.
struct StencilEntry {
  int node = -1;
  double weight = 0.0;
};

/// Uniform collocation grid: the lattice hZ^N intersected with the interior
/// of the domain, nodes in lexicographic order.
class Grid {
 public:
  Grid(Domain domain, double h);

  const Domain& domain() const { return domain_; }
  double h() const { return h_; }
  int dim() const { return domain_.dim(); }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Point>& nodes() const { return nodes_; }
  const Point& node(std::size_t i) const { return nodes_[i]; }

  /// Node id at integer lattice coordinates, or -1 when that lattice point is
  /// not a node (outside the domain or outside the lattice window).
  int node_at(long i, long j) const;
  std::array<long, 2> lattice_index(std::size_t node) const { return index_[node]; }

  /// Multilinear stencil of y: at most 2^N entries with weight > 0; lattice
  /// corners that are not nodes carry the zero exterior value and are omitted.
  int stencil(const Point& y, std::array<StencilEntry, 4>& out) const;

  /// Lattice bounds of the window holding all nodes, padded by one cell.
  double window_lo(int axis) const { return static_cast<double>(imin_[axis]) * h_; }
  double window_hi(int axis) const { return static_cast<double>(imax_[axis]) * h_; }

 private:
  Domain domain_;
  double h_;
  std::vector<Point> nodes_;
  std::vector<std::array<long, 2>> index_;
  std::array<long, 2> imin_{};
  std::array<long, 2> imax_{};
  std::vector<int> lookup_;
};

/// Throws a resolution error when h > diam/4 or when no lattice point lies in
/// the interior.
std::shared_ptr<const Grid> build_grid(const Domain& domain, double h);

/// Nodal values on a grid; the function is zero outside the domain by
/// construction (no exterior values are stored).
class GridFunction {
 public:
  GridFunction(std::shared_ptr<const Grid> grid, std::vector<double> values);

  const Grid& grid() const { return *grid_; }
  std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double interpolate(const Point& y) const;

 private:
  std::shared_ptr<const Grid> grid_;
  std::vector<double> values_;
};

inline double interpolate(const GridFunction& u, const Point& y) { return u.interpolate(y); }

}  // namespace lognl
