#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "lognl/error.hpp"
#include "lognl/geometry.hpp"

namespace lognl {

enum class QuadMode { Fast, Oracle };

/// Controls for the polar, log-graded quadrature of singular integrals.
struct QuadratureConfig {
  /// Gauss-Legendre nodes per radial panel (fast) or a quarter of the Simpson
  /// intervals per panel (oracle). Panels span at most one decade in rho.
  int n_radial = 16;
  /// Uniform angular nodes for N = 2.
  int n_angular = 64;
  /// Inner radial cutoff.
  double r_min = 1e-12;
  QuadMode mode = QuadMode::Fast;

  void validate() const;
};

/// A radius along a ray where the integrand is not smooth. `singular` marks
/// breaks with unbounded derivative; panels are graded geometrically toward
/// them.
struct RayBreak {
  double rho = 0.0;
  bool singular = false;
};

struct RadialNode {
  double rho = 0.0;
  double weight = 0.0;
};

struct Direction {
  Point unit{};
  double weight = 0.0;
};

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Cached Gauss-Legendre rule with n points.
const GaussLegendre& gauss_legendre(int n);

/// Angular rule: N = 1 gives the two unit directions; N = 2 the offset
/// trapezoid rule theta_k = 2 pi (k + 1/2) / n. `half` halves the count.
std::vector<Direction> directions(int dim, const QuadratureConfig& cfg, bool half = false);

/// Nodes and weights approximating int_lo^hi g(rho) d rho. Panels are split at
/// the breaks inside (lo, hi) and at every decade; each panel is integrated in
/// the variable ln rho. `half` selects the half-resolution embedded rule.
void radial_nodes(double lo, double hi, std::span<const RayBreak> breaks,
                  const QuadratureConfig& cfg, bool half, std::vector<RadialNode>& out);

/// Positive rho with |x + rho dir - center| = radius (dir a unit vector).
void sphere_crossings(const Point& x, const Point& dir, const Point& center, double radius,
                      bool singular, std::vector<RayBreak>& out);

struct PolarResult {
  double value = 0.0;
  double err_est = 0.0;
};

/// Evaluates sum over directions of int_{lo}^{hi} F(x + rho dir) d rho / rho,
/// i.e. int over the annulus lo < |y-x| < hi of F(y) / |y-x|^N dy. `breaks`
/// appends ray breaks for a direction; `F(y, rho, dir)` is the integrand.
/// The error estimate is the gap to the half-resolution rule.
template <class Breaks, class Integrand>
PolarResult integrate_polar(const Point& x, int dim, double lo, double hi,
                            const QuadratureConfig& cfg, Breaks&& breaks, Integrand&& F) {
  PolarResult out;
  if (!(hi > lo)) return out;
  std::vector<RayBreak> brk;
  std::vector<RadialNode> nodes;
  double sums[2] = {0.0, 0.0};
  for (int pass = 0; pass < 2; ++pass) {
    const bool half = pass == 1;
    for (const Direction& d : directions(dim, cfg, half)) {
      brk.clear();
      breaks(x, d.unit, brk);
      radial_nodes(lo, hi, brk, cfg, half, nodes);
      double ray = 0.0;
      for (const RadialNode& q : nodes) {
        const Point y = x + q.rho * d.unit;
        const double f = F(y, q.rho, d.unit);
        if (std::isnan(f))
          throw Error(ErrorKind::Numerical, "nonlocal_eval",
                      "integrand is NaN at y = (" + std::to_string(y[0]) + ", " +
                          std::to_string(y[1]) + ")");
        ray += q.weight * f / q.rho;
      }
      sums[pass] += d.weight * ray;
    }
  }
  out.value = sums[0];
  out.err_est = std::abs(sums[0] - sums[1]);
  return out;
}

}  // namespace lognl
