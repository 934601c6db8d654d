#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lognl/geometry.hpp"

namespace lognl {

/// Truncation radius of the logarithmic modulus.
inline constexpr double kRho0 = 0.1;

/// l^alpha(rho) with l(rho) = 1 / |ln min(rho, 0.1)|. Throws a domain error for
/// rho <= 0. The modulus has a kink at rho = 0.1 and is constant beyond it.
double ell(double rho, double alpha = 1.0);

/// Finite sample of a function on R^N.
struct SampledFunction {
  int dim = 1;
  std::vector<Point> points;
  std::vector<double> values;

  /// Lengths match, points pairwise distinct.
  void validate() const;
};

struct SeminormSpec {
  double alpha = 0.0;
  double beta = 0.0;
  Domain domain = Domain::interval(-1.0, 1.0);
};

/// Result of a supremum over sample pairs. Above kExhaustivePairLimit points
/// a fixed-seed uniform subsample of kSampledPairs pairs is used instead.
struct PairSup {
  double value = 0.0;
  bool exhaustive = true;
  std::size_t pairs = 0;
};

inline constexpr std::size_t kExhaustivePairLimit = 2000;
inline constexpr std::size_t kSampledPairs = 2'000'000;

/// max over pairs of |u(x)-u(y)| / l^alpha(|x-y|).
PairSup seminorm_global(const SampledFunction& u, double alpha);

/// max over pairs of l^{alpha+beta}(d(x,y)) |u(x)-u(y)| / l^alpha(|x-y|), with
/// d(x,y) = min(d(x), d(y)). All points must lie in the domain.
PairSup seminorm_weighted(const SampledFunction& u, const SeminormSpec& spec);

/// sup l^beta(d(x)) |u(x)| + the weighted seminorm.
double weighted_norm(const SampledFunction& u, const SeminormSpec& spec);

/// [u]_{L^alpha} over all samples plus the interior seminorm
/// [u]^{(0)}_{L^{1+alpha}}. Exterior samples in `u_global` must be exactly 0.
double norm_X(const SampledFunction& u_interior, const SampledFunction& u_global, double alpha,
              const Domain& domain);

/// sup |f| + sup l^2(d(x,y)) |f(x)-f(y)| / l(|x-y|).
double norm_Y(const SampledFunction& f, const Domain& domain);

/// OLS slope of ln(osc) against ln l(r). Non-positive oscillations are dropped;
/// radii must lie in (0, 0.1) where l is not constant.
double fit_exponent(std::span<const double> radii, std::span<const double> oscillations);

struct SecondOrderFit {
  enum class Status { Fitted, Smoother, Flat };
  Status status = Status::Fitted;
  /// Reported exponent, capped at kMaxSecondOrderExponent.
  double gamma = 0.0;
  /// Unclamped regression slope (0 when flat).
  double raw_gamma = 0.0;
  std::vector<double> sup_second_difference;
};

/// Exponents above this are reported as "smoother than l^gamma for every
/// tested gamma".
inline constexpr double kMaxSecondOrderExponent = 4.0;

/// Fits gamma with sup |u(x+eps e) + u(x-eps e) - 2u(x)| ~ C l^gamma(eps),
/// the sup taken over lattice axes e and nodes x within eps of `center`.
SecondOrderFit fit_second_order_exponent(const GridFunction& u, const Point& center,
                                         std::span<const double> eps);

struct SemiHomogeneity {
  /// max of l(lambda) l(r) / l(lambda r) on the sample grid.
  double c_hat = 0.0;
  /// max over lambda of l(1/lambda) sup_r l(lambda r) / l(r).
  double c_upper_hat = 0.0;
  bool holds = false;
  /// c_hat^{-1} l(lambda) <= inf_r l(lambda r)/l(r) on every sampled lambda.
  bool lower_display_holds = false;
  bool upper_display_holds = false;
};

SemiHomogeneity check_semi_homogeneity(std::span<const double> lambda_grid,
                                       std::span<const double> r_grid);

struct NormEquivalence {
  double ball_sup = 0.0;
  double norm = 0.0;
  /// ball_sup / norm.
  double lower_ratio = 0.0;
  /// norm / ball_sup.
  double upper_ratio = 0.0;
  std::size_t admissible_balls = 0;
};

/// Compares sup over admissible balls B_r(x) (B_{lam r}(x) inside the domain,
/// r < r0, dyadic r) of l^beta(r)|u|_{L^inf(B_r)} + l^{alpha+beta}(r)[u]_{L^alpha(B_r)}
/// against the weighted norm. Throws a diagnostic error when no ball fits.
NormEquivalence norm_equivalence_check(const SampledFunction& u, const SeminormSpec& spec,
                                       double r0, double lam);

}  // namespace lognl
