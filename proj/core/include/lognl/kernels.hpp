#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lognl/geometry.hpp"
#include "lognl/quadrature.hpp"

namespace lognl {

/// Kernel K(x, y) of L_K u(x) = int (u(x) - u(x+y)) K(x, y) / |y|^N dy.
/// `evaluate` is called with offsets |y| < range; K is taken as zero beyond.
struct KernelSpec {
  std::string name;
  std::function<double(const Point& x, const Point& y)> evaluate;
  double lambda = 1.0;
  double Lambda = 1.0;
  bool translation_invariant = true;
  bool differentiable = false;
  /// Support radius of K in y (1 for the operators of finite range).
  double range = 1.0;
  /// |y| values where K is not smooth; used as quadrature breaks.
  std::vector<double> radial_breaks;
  /// Kernels depending on x only through x[0]: jump location, if any.
  std::vector<double> x_jumps;
};

struct LogLapConstants {
  int N = 1;
  double c_N = 0.0;
  double rho_N = 0.0;
};

/// c_N = pi^{-N/2} Gamma(N/2) and rho_N = 2 ln 2 + psi(N/2) - gamma.
LogLapConstants loglap_constants(int N);

/// Weight omega(r) = a_N r^{N/2} K_{N/2}(r) of the logarithmic Schroedinger
/// operator, normalized so omega(0+) = c_N. Supported N: 1, 2, 3.
double schrodinger_weight(double r, int N);

/// Numerical slope omega'(0+) (one-sided finite difference).
double schrodinger_slope_at_zero(int N);

/// Named kernels: unit, loglap (K = c_N), schrodinger (omega on B_1),
/// sinlog (1 + sin(ln|y|)/2), xjump (1 or 2 according to x_1 < 1/2),
/// radial (K(y) = |y|), table:<csv file> (radial values r,K linearly
/// interpolated).
KernelSpec make_kernel(const std::string& name, int N);

KernelSpec unit_kernel();
KernelSpec sinlog_kernel();

struct EllipticityReport {
  double min_seen = 0.0;
  double max_seen = 0.0;
  bool pass = false;
};

/// Samples K on Halton points of domain x B_1. Throws a kernel-defect error
/// on NaN or negative values.
EllipticityReport check_uniform_ellipticity(const KernelSpec& K, int samples,
                                            const Domain& domain);

struct RegularityPair {
  Point z{};
  Point w{};
};

struct OneRegularityReport {
  double Lambda_hat = 0.0;
  /// Relative change of Lambda_hat when the quadrature is doubled.
  double quadrature_drift = 0.0;
  /// Ratio at the smallest |w| over the largest ratio at the other pairs.
  double scale_growth = 0.0;
  std::vector<double> ratios;
  bool pass = false;
  std::string diagnostic;
};

/// Integral of |K(z+w/2, xi+w/2)/|xi+w/2|^N - K(z-w/2, xi-w/2)/|xi-w/2|^N| l(|xi|)
/// over |xi| > 2|w|.
double one_regularity_integral(const KernelSpec& K, const Point& z, const Point& w, int N,
                               const QuadratureConfig& cfg);

/// Lambda_hat = max over pairs of integral / l(|w|). Passes when finite, stable
/// under doubled quadrature (< 10%) and not growing as |w| shrinks (< 10%).
OneRegularityReport check_one_regularity(const KernelSpec& K, std::span<const RegularityPair> pairs,
                                         int N, const QuadratureConfig& cfg);

/// K_i = eta_eps * (K on B_1 extended by zero), eps = 1/(2i), clamped to
/// [0, Lambda] and to >= lambda/2 on B_1. Immutable after construction.
class MollifiedKernel {
 public:
  MollifiedKernel(KernelSpec base, int index, int dim);

  double operator()(const Point& y) const;
  int index() const { return index_; }
  int dim() const { return dim_; }
  double eps() const { return eps_; }
  const KernelSpec& base() const { return base_; }
  /// Outer edge of the support, 1 + 1/(2i).
  double support_radius() const { return 1.0 + eps_; }
  /// Lambda ||grad eta_eps||_{L^1}, a Lipschitz bound before clamping.
  double lipschitz_bound() const { return lipschitz_; }
  /// The mollified kernel as a KernelSpec with range 1 + 1/i.
  KernelSpec as_kernel() const;

 private:
  double raw(const Point& y) const;

  KernelSpec base_;
  int index_;
  int dim_;
  double eps_;
  double norm_;
  double lipschitz_;
};

MollifiedKernel mollify_kernel(const KernelSpec& K, int i, int dim);

}  // namespace lognl
