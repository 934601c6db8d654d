#include "lognl/geometry.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "lognl/error.hpp"

namespace lognl {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::Argument, "geometry", what);
}

}  // namespace

Domain Domain::interval(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a < b, "interval needs a < b");
  Domain d;
  d.shape_ = Shape::Interval;
  d.dim_ = 1;
  d.lo_ = {a, 0.0};
  d.hi_ = {b, 0.0};
  d.center_ = {0.5 * (a + b), 0.0};
  d.radius_ = 0.5 * (b - a);
  return d;
}

Domain Domain::ball(const Point& center, double radius, int dim) {
  require(dim == 1 || dim == 2, "ball dimension must be 1 or 2");
  require(std::isfinite(radius) && radius > 0.0, "ball radius must be positive");
  Domain d;
  d.shape_ = Shape::Ball;
  d.dim_ = dim;
  d.center_ = center;
  if (dim == 1) d.center_[1] = 0.0;
  d.radius_ = radius;
  d.lo_ = {d.center_[0] - radius, dim == 2 ? d.center_[1] - radius : 0.0};
  d.hi_ = {d.center_[0] + radius, dim == 2 ? d.center_[1] + radius : 0.0};
  return d;
}

Domain Domain::box(const Point& lo, const Point& hi, int dim) {
  require(dim == 1 || dim == 2, "box dimension must be 1 or 2");
  for (int a = 0; a < dim; ++a) require(lo[a] < hi[a], "box needs lo < hi on every axis");
  if (dim == 1) return interval(lo[0], hi[0]);
  Domain d;
  d.shape_ = Shape::Box;
  d.dim_ = 2;
  d.lo_ = lo;
  d.hi_ = hi;
  d.center_ = 0.5 * (lo + hi);
  d.radius_ = 0.5 * std::min(hi[0] - lo[0], hi[1] - lo[1]);
  return d;
}

bool Domain::contains(const Point& x) const {
  if (shape_ == Shape::Ball) {
    Point r = x - center_;
    if (dim_ == 1) r[1] = 0.0;
    return norm(r) < radius_;
  }
  for (int a = 0; a < dim_; ++a)
    if (!(x[a] > lo_[a] && x[a] < hi_[a])) return false;
  return true;
}

double Domain::dist_to_boundary(const Point& x) const {
  if (shape_ == Shape::Ball) {
    Point r = x - center_;
    if (dim_ == 1) r[1] = 0.0;
    return std::abs(radius_ - norm(r));
  }
  if (contains(x)) {
    double d = std::numeric_limits<double>::infinity();
    for (int a = 0; a < dim_; ++a) d = std::min({d, x[a] - lo_[a], hi_[a] - x[a]});
    return d;
  }
  double s = 0.0;
  for (int a = 0; a < dim_; ++a) {
    const double e = std::max({lo_[a] - x[a], 0.0, x[a] - hi_[a]});
    s += e * e;
  }
  return std::sqrt(s);
}

double Domain::diameter() const {
  if (shape_ == Shape::Ball) return 2.0 * radius_;
  Point e = hi_ - lo_;
  if (dim_ == 1) e[1] = 0.0;
  return norm(e);
}

double Domain::inradius() const { return radius_; }

Point Domain::bbox_lo() const { return lo_; }
Point Domain::bbox_hi() const { return hi_; }

std::optional<double> Domain::exterior_ball_radius() const { return std::nullopt; }

Point Domain::boundary_probe() const {
  if (shape_ == Shape::Ball) return {center_[0] - radius_, center_[1]};
  return {lo_[0], dim_ == 2 ? center_[1] : 0.0};
}

Point Domain::inward_normal() const { return {1.0, 0.0}; }

std::string Domain::describe() const {
  std::ostringstream os;
  switch (shape_) {
    case Shape::Interval:
      os << "interval(" << lo_[0] << "," << hi_[0] << ")";
      break;
    case Shape::Ball:
      os << "ball(N=" << dim_ << ",center=" << center_[0];
      if (dim_ == 2) os << "," << center_[1];
      os << ",R=" << radius_ << ")";
      break;
    case Shape::Box:
      os << "box([" << lo_[0] << "," << lo_[1] << "],[" << hi_[0] << "," << hi_[1] << "])";
      break;
  }
  return os.str();
}

Grid::Grid(Domain domain, double h) : domain_(std::move(domain)), h_(h) {
  const int n = domain_.dim();
  const Point lo = domain_.bbox_lo();
  const Point hi = domain_.bbox_hi();
  for (int a = 0; a < 2; ++a) {
    if (a < n) {
      imin_[a] = static_cast<long>(std::floor(lo[a] / h_)) - 1;
      imax_[a] = static_cast<long>(std::ceil(hi[a] / h_)) + 1;
    } else {
      imin_[a] = imax_[a] = 0;
    }
  }
  const long nx = imax_[0] - imin_[0] + 1;
  const long ny = imax_[1] - imin_[1] + 1;
  lookup_.assign(static_cast<std::size_t>(nx * ny), -1);
  // Lexicographic order: first coordinate outermost.
  const double margin = 1e-10 * h_;
  for (long i = imin_[0]; i <= imax_[0]; ++i) {
    for (long j = imin_[1]; j <= imax_[1]; ++j) {
      const Point x{static_cast<double>(i) * h_, n == 2 ? static_cast<double>(j) * h_ : 0.0};
      if (!domain_.contains(x) || domain_.dist_to_boundary(x) <= margin) continue;
      lookup_[static_cast<std::size_t>((i - imin_[0]) * ny + (j - imin_[1]))] =
          static_cast<int>(nodes_.size());
      nodes_.push_back(x);
      index_.push_back({i, j});
    }
  }
}

int Grid::node_at(long i, long j) const {
  if (i < imin_[0] || i > imax_[0] || j < imin_[1] || j > imax_[1]) return -1;
  const long ny = imax_[1] - imin_[1] + 1;
  return lookup_[static_cast<std::size_t>((i - imin_[0]) * ny + (j - imin_[1]))];
}

int Grid::stencil(const Point& y, std::array<StencilEntry, 4>& out) const {
  const double tx = y[0] / h_;
  const double fx0 = std::floor(tx);
  if (fx0 < static_cast<double>(imin_[0]) || fx0 > static_cast<double>(imax_[0])) return 0;
  const long i0 = static_cast<long>(fx0);
  const double fx = tx - fx0;
  int count = 0;
  if (dim() == 1) {
    const double w[2] = {1.0 - fx, fx};
    for (int a = 0; a < 2; ++a) {
      if (w[a] <= 0.0) continue;
      const int id = node_at(i0 + a, 0);
      if (id >= 0) out[count++] = {id, w[a]};
    }
    return count;
  }
  const double ty = y[1] / h_;
  const double fy0 = std::floor(ty);
  if (fy0 < static_cast<double>(imin_[1]) || fy0 > static_cast<double>(imax_[1])) return 0;
  const long j0 = static_cast<long>(fy0);
  const double fy = ty - fy0;
  const double wx[2] = {1.0 - fx, fx};
  const double wy[2] = {1.0 - fy, fy};
  for (int a = 0; a < 2; ++a) {
    if (wx[a] <= 0.0) continue;
    for (int b = 0; b < 2; ++b) {
      const double w = wx[a] * wy[b];
      if (w <= 0.0) continue;
      const int id = node_at(i0 + a, j0 + b);
      if (id >= 0) out[count++] = {id, w};
    }
  }
  return count;
}

std::shared_ptr<const Grid> build_grid(const Domain& domain, double h) {
  if (!(h > 0.0) || !std::isfinite(h))
    throw Error(ErrorKind::Argument, "geometry", "grid spacing must be positive");
  if (h > domain.diameter() / 4.0)
    throw Error(ErrorKind::Resolution, "geometry",
                "grid spacing h must not exceed diam/4 for " + domain.describe());
  auto grid = std::make_shared<const Grid>(domain, h);
  if (grid->size() == 0)
    throw Error(ErrorKind::Resolution, "geometry", "no lattice node inside " + domain.describe());
  return grid;
}

GridFunction::GridFunction(std::shared_ptr<const Grid> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_ || values_.size() != grid_->size())
    throw Error(ErrorKind::Argument, "geometry", "grid function needs one value per node");
}

double GridFunction::interpolate(const Point& y) const {
  std::array<StencilEntry, 4> st;
  const int n = grid_->stencil(y, st);
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += st[k].weight * values_[static_cast<std::size_t>(st[k].node)];
  return s;
}

}  // namespace lognl
