#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "lognl/geometry.hpp"
#include "lognl/kernels.hpp"
#include "lognl/quadrature.hpp"

namespace lognl {

/// A function on R^N that the operators can be applied to.
struct FieldFunction {
  std::string name;
  std::function<double(const Point&)> evaluate;
  /// u vanishes outside B_R(support_center); infinite when not declared.
  double support_radius = std::numeric_limits<double>::infinity();
  Point support_center{};
  /// Optional ray breaks (kinks, jumps, cell edges) seen from x along dir.
  std::function<void(const Point& x, const Point& dir, std::vector<RayBreak>& out)> breaks;
  /// Set for grid-backed fields.
  std::shared_ptr<const GridFunction> grid;

  double operator()(const Point& y) const { return evaluate(y); }
  bool bounded_support() const { return std::isfinite(support_radius); }
  /// Radius of a ball about x that contains the support.
  double reach(const Point& x) const { return norm(x - support_center) + support_radius; }
};

FieldFunction constant_field(double c);
FieldFunction linear_field(double offset, const Point& slope);
/// |y|^2.
FieldFunction quadratic_field();
/// exp(-|y|^2 / (2 sigma^2)); the support is declared at `support` (default
/// 12 sigma) where the value is below 1e-31.
FieldFunction gaussian_field(double sigma, double support = 0.0);
/// l^alpha(|y|), with value 0 at the origin.
FieldFunction ell_profile_field(double alpha);
/// Indicator of the open ball B_R(center).
FieldFunction indicator_ball(const Point& center, double radius);
/// Multilinear interpolant of nodal values, zero outside the domain.
FieldFunction grid_field(std::shared_ptr<const GridFunction> u);

/// Parses "const", "const(c)", "linear", "quadratic", "gaussian(sigma)",
/// "ell_profile(alpha)".
FieldFunction parse_field(const std::string& spec);

/// Radii where the ray x + rho dir crosses a lattice line of the grid window.
void lattice_crossings(const Grid& grid, const Point& x, const Point& dir,
                       std::vector<RayBreak>& out);

struct EvalResult {
  double value = 0.0;
  double err_est = 0.0;
};

/// int_{B_range(x)} (u(x) - u(y)) K(x, y - x) / |y - x|^N dy.
EvalResult eval_LK(const KernelSpec& K, const FieldFunction& u, const Point& x, int N,
                   const QuadratureConfig& cfg);
/// As above; throws an argument error unless x lies in the domain.
EvalResult eval_LK(const KernelSpec& K, const FieldFunction& u, const Point& x,
                   const Domain& domain, const QuadratureConfig& cfg);

/// (J * u)(x) with J = chi_{|z| >= 1} |z|^{-N}.
EvalResult eval_J_conv(const FieldFunction& u, const Point& x, int N, const QuadratureConfig& cfg);

/// Logarithmic Laplacian via c_N L_1 u - c_N J*u + rho_N u.
EvalResult eval_loglap(const FieldFunction& u, const Point& x, int N, const QuadratureConfig& cfg);
/// Logarithmic Laplacian as a single integral
/// c_N int (u(x) chi_{B_1(x)}(y) - u(y)) / |x - y|^N dy + rho_N u(x).
EvalResult eval_loglap_direct(const FieldFunction& u, const Point& x, int N,
                              const QuadratureConfig& cfg);

/// int (u(x) - u(y)) omega(|y - x|) / |y - x|^N dy over |y - x| < max(reach, 40).
EvalResult eval_schrodinger(const FieldFunction& u, const Point& x, int N,
                            const QuadratureConfig& cfg);

/// R_i u(x) = int_{|y| >= 1} (u(x) - u(x + y)) K_i(y) / |y|^N dy.
EvalResult eval_remainder(const MollifiedKernel& Ki, const FieldFunction& u, const Point& x,
                          const QuadratureConfig& cfg);

/// int_{B_r} dy / |y - x|^N with |x| = r + d, requiring 0 < d < r^2, r < 1.
EvalResult sector_integral(double r, double d, int N, const QuadratureConfig& cfg);

}  // namespace lognl
