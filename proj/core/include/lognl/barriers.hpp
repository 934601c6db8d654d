#pragma once

#include <span>
#include <string>
#include <vector>

#include "lognl/kernels.hpp"
#include "lognl/nonlocal_eval.hpp"
#include "lognl/quadrature.hpp"

namespace lognl {

/// Radial profile of the bump: 1 on [0, 1/2], exp(1 - 1/(1 - t^2)) with
/// t = 2s - 1 on (1/2, 1), 0 beyond.
double bump_profile(double s);

/// l^alpha((|x| - r)_+).
FieldFunction boundary_barrier(double r, double alpha);
/// beta(|x| / r).
FieldFunction bump_field(double r);
/// (l^alpha(|x|) - l^alpha(rho))_+.
FieldFunction tail_field(double rho, double alpha);
/// Indicator of the shell a < |x| <= b.
FieldFunction shell_indicator(double a, double b);
/// exp(-alpha x_axis).
FieldFunction exponential_field(double alpha, int axis);
/// sum_k c_k f_k with the union of the breaks.
FieldFunction linear_combination(const std::vector<std::pair<double, FieldFunction>>& terms);

/// mu(dx) = l(|x|) |x|^{-N} dx of the shell a < |x| <= b.
double shell_measure(double a, double b, int N);

struct Shell {
  double inner = 0.0;
  double outer = 0.0;
  double measure = 0.0;
};

/// Outer shell (a, rho] carrying `fraction` of mu(B_rho \ B_{3 rho^2}).
Shell gain_shell(double rho, double fraction, int N);

/// Stable within +-tol: every value lies in [(1-tol)c, (1+tol)c] for some c.
bool stable_within(std::span<const double> values, double tol);

/// Samples per ball or annulus and scale.
inline constexpr int kBarrierSamples = 32;

/// Halton points with |x| in [r_in, r_out); N = 1 uses x > 0.
std::vector<Point> radial_samples(double r_in, double r_out, int count, int N,
                                  bool include_center = false);

struct BoundaryBarrierReport {
  std::vector<double> alphas;
  /// min of L_K phi over the samples, per alpha.
  std::vector<double> delta;
  double alpha_star = 0.0;
  double delta_hat = 0.0;
  bool pass = false;
  std::string diagnostic;
};

BoundaryBarrierReport verify_boundary_barrier(const KernelSpec& K, double r,
                                              std::span<const double> alphas, int N,
                                              const QuadratureConfig& cfg);

/// Constants per scale with their spread.
struct ScaleReport {
  std::vector<double> scales;
  std::vector<double> constants;
  double C_hat = 0.0;
  bool stable = false;
  bool pass = false;
};

/// C(r) = max over x in B_r of L_K beta_r(x) l(r) / Lambda.
ScaleReport verify_bump(const KernelSpec& K, std::span<const double> radii, int N,
                        const QuadratureConfig& cfg);

/// c(rho) = min over x in B_{2 rho^2} of -L_K chi_A(x) l(rho) / (lambda mu(A)).
ScaleReport verify_gain(const KernelSpec& K, std::span<const double> rhos, double fraction, int N,
                        const QuadratureConfig& cfg);

/// C(rho) = -min over x in B_{rho/2} of L_K t_alpha(x) / (Lambda (1 + alpha l^{alpha-1}(rho))).
ScaleReport verify_tail(const KernelSpec& K, std::span<const double> rhos, double alpha, int N,
                        const QuadratureConfig& cfg);

struct ExponentialReport {
  std::vector<double> alphas;
  /// sup over samples of L_K phi(x) e^{alpha x_N}, per alpha.
  std::vector<double> sup_scaled;
  double alpha_star = 0.0;
  double c0_hat = 0.0;
  bool pass = false;
  std::string diagnostic;
};

/// Samples x_N in [-R, R] (other coordinates zero).
ExponentialReport verify_exponential(const KernelSpec& K, std::span<const double> alphas,
                                     double R, int N, const QuadratureConfig& cfg);

struct SectorReport {
  std::vector<double> d;
  std::vector<double> values;
  /// min of value / |ln d|.
  double c_hat = 0.0;
  bool pass = false;
};

SectorReport verify_sector(double r, std::span<const double> d, int N, const QuadratureConfig& cfg);

struct CompositeReport {
  double alpha = 0.0;
  double rho = 0.0;
  /// min over samples of -L_K phi / l^{alpha-1}(rho^2).
  double delta_hat = 0.0;
  /// Reported constant 0.5 delta_hat, rechecked in oracle mode.
  double delta = 0.0;
  double max_scaled = 0.0;
  Shell shell;
  bool pass = false;
  std::string diagnostic;
};

/// phi = (l^a(rho) - l^a(rho^2)) beta_{2 rho^2} + (l^a(rho)/2) chi_A - t_a with
/// A the outer half-measure shell; checks L_K phi <= -delta l^{a-1}(rho^2) on
/// B_{2 rho^2}.
CompositeReport verify_composite(const KernelSpec& K, double rho, double alpha, int N,
                                 const QuadratureConfig& cfg);

FieldFunction composite_barrier(double rho, double alpha, const Shell& A);

}  // namespace lognl
