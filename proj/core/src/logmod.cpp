#include "lognl/logmod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "lognl/error.hpp"

namespace lognl {

namespace {

constexpr const char* kModule = "logmod";

[[noreturn]] void fail(ErrorKind kind, const std::string& what) { throw Error(kind, kModule, what); }

double distance(const Point& a, const Point& b) { return norm(a - b); }

// Visits pairs (i, j), i < j: all of them below the exhaustive limit, a
// fixed-seed uniform subsample above it.
template <class Visit>
PairSup for_pairs(std::size_t n, Visit&& visit) {
  PairSup out;
  if (n <= kExhaustivePairLimit) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) out.value = std::max(out.value, visit(i, j));
    out.pairs = n * (n - 1) / 2;
    out.exhaustive = true;
    return out;
  }
  std::mt19937_64 rng(0x5eed'1a6b'0dd5ULL);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::size_t done = 0;
  while (done < kSampledPairs) {
    const std::size_t i = pick(rng);
    const std::size_t j = pick(rng);
    if (i == j) continue;
    out.value = std::max(out.value, visit(std::min(i, j), std::max(i, j)));
    ++done;
  }
  out.pairs = done;
  out.exhaustive = false;
  return out;
}

void require_in_domain(const SampledFunction& u, const Domain& domain) {
  for (const auto& p : u.points)
    if (!domain.contains(p)) fail(ErrorKind::Argument, "sample point lies outside the domain");
}

}  // namespace

double ell(double rho, double alpha) {
  if (!(rho > 0.0)) fail(ErrorKind::Domain, "ell requires rho > 0");
  if (alpha == 0.0) return 1.0;
  const double l = 1.0 / std::abs(std::log(std::min(rho, kRho0)));
  return std::pow(l, alpha);
}

void SampledFunction::validate() const {
  if (points.size() != values.size())
    fail(ErrorKind::Argument, "sampled function: points and values differ in length");
  std::vector<Point> sorted = points;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    fail(ErrorKind::Argument, "sampled function: duplicate sample point");
}

PairSup seminorm_global(const SampledFunction& u, double alpha) {
  u.validate();
  if (u.points.size() < 2) fail(ErrorKind::Argument, "seminorm needs at least two samples");
  if (alpha < 0.0) fail(ErrorKind::Argument, "alpha must be nonnegative");
  return for_pairs(u.points.size(), [&](std::size_t i, std::size_t j) {
    const double num = std::abs(u.values[i] - u.values[j]);
    if (num == 0.0) return 0.0;
    return num / ell(distance(u.points[i], u.points[j]), alpha);
  });
}

PairSup seminorm_weighted(const SampledFunction& u, const SeminormSpec& spec) {
  u.validate();
  if (spec.alpha < 0.0 || spec.beta < 0.0)
    fail(ErrorKind::Argument, "alpha and beta must be nonnegative");
  require_in_domain(u, spec.domain);
  std::vector<double> d(u.points.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = spec.domain.dist_to_boundary(u.points[i]);
  if (u.points.size() < 2) return {};
  return for_pairs(u.points.size(), [&](std::size_t i, std::size_t j) {
    const double num = std::abs(u.values[i] - u.values[j]);
    if (num == 0.0) return 0.0;
    const double weight = ell(std::min(d[i], d[j]), spec.alpha + spec.beta);
    return weight * num / ell(distance(u.points[i], u.points[j]), spec.alpha);
  });
}

double weighted_norm(const SampledFunction& u, const SeminormSpec& spec) {
  const double semi = seminorm_weighted(u, spec).value;
  double sup = 0.0;
  for (std::size_t i = 0; i < u.points.size(); ++i)
    sup = std::max(sup, ell(spec.domain.dist_to_boundary(u.points[i]), spec.beta) *
                            std::abs(u.values[i]));
  return sup + semi;
}

double norm_X(const SampledFunction& u_interior, const SampledFunction& u_global, double alpha,
              const Domain& domain) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::Argument, "norm_X needs alpha in (0,1)");
  for (std::size_t i = 0; i < u_global.points.size(); ++i)
    if (!domain.contains(u_global.points[i]) && u_global.values[i] != 0.0)
      throw Error(ErrorKind::Contract, kModule,
                  "exterior sample carries a nonzero value; X functions vanish outside the domain");
  const double global = seminorm_global(u_global, alpha).value;
  const SeminormSpec interior{1.0 + alpha, 0.0, domain};
  return global + seminorm_weighted(u_interior, interior).value;
}

double norm_Y(const SampledFunction& f, const Domain& domain) {
  if (f.points.empty()) fail(ErrorKind::Argument, "norm_Y needs at least one sample");
  f.validate();
  require_in_domain(f, domain);
  double sup = 0.0;
  for (double v : f.values) sup = std::max(sup, std::abs(v));
  if (f.points.size() < 2) return sup;
  std::vector<double> d(f.points.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = domain.dist_to_boundary(f.points[i]);
  const PairSup q = for_pairs(f.points.size(), [&](std::size_t i, std::size_t j) {
    const double num = std::abs(f.values[i] - f.values[j]);
    if (num == 0.0) return 0.0;
    return ell(std::min(d[i], d[j]), 2.0) * num / ell(distance(f.points[i], f.points[j]), 1.0);
  });
  return sup + q.value;
}

double fit_exponent(std::span<const double> radii, std::span<const double> oscillations) {
  if (radii.size() != oscillations.size())
    fail(ErrorKind::Argument, "fit_exponent: radii and oscillations differ in length");
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double r = radii[k];
    if (!(r > 0.0 && r < kRho0))
      fail(ErrorKind::Argument, "fit_exponent: radius outside (0, 0.1) where l is constant");
    if (!(oscillations[k] > 0.0) || !std::isfinite(oscillations[k])) continue;
    xs.push_back(std::log(ell(r, 1.0)));
    ys.push_back(std::log(oscillations[k]));
  }
  if (xs.size() < 3) fail(ErrorKind::Fit, "fit_exponent: fewer than three usable points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  if (!(sxx > 0.0)) fail(ErrorKind::Fit, "fit_exponent: radii do not spread in ln l(r)");
  return sxy / sxx;
}

SecondOrderFit fit_second_order_exponent(const GridFunction& u, const Point& center,
                                         std::span<const double> eps) {
  const Grid& grid = u.grid();
  const Domain& domain = grid.domain();
  const double dc = domain.contains(center) ? domain.dist_to_boundary(center) : 0.0;
  for (double e : eps)
    if (!(e > 0.0) || e >= dc)
      fail(ErrorKind::Argument, "second-order fit: radius exceeds the distance to the boundary");

  SecondOrderFit out;
  double scale = 0.0;
  for (double v : u.values()) scale = std::max(scale, std::abs(v));
  const int n = grid.dim();
  for (double e : eps) {
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Point& x = grid.node(i);
      const double off = norm(x - center);
      if (off > e + 1e-12 * e || off + e >= dc) continue;
      for (int axis = 0; axis < n; ++axis) {
        Point step{};
        step[axis] = e;
        const double d2 = u.interpolate(x + step) + u.interpolate(x - step) - 2.0 * u[i];
        sup = std::max(sup, std::abs(d2));
      }
    }
    out.sup_second_difference.push_back(sup);
  }
  const double biggest =
      *std::max_element(out.sup_second_difference.begin(), out.sup_second_difference.end());
  if (biggest <= 1e-13 * std::max(1.0, scale)) {
    out.status = SecondOrderFit::Status::Flat;
    return out;
  }
  out.raw_gamma = fit_exponent(eps, out.sup_second_difference);
  if (out.raw_gamma > kMaxSecondOrderExponent) {
    out.status = SecondOrderFit::Status::Smoother;
    out.gamma = kMaxSecondOrderExponent;
  } else {
    out.gamma = out.raw_gamma;
  }
  return out;
}

SemiHomogeneity check_semi_homogeneity(std::span<const double> lambda_grid,
                                       std::span<const double> r_grid) {
  if (lambda_grid.empty() || r_grid.empty())
    fail(ErrorKind::Argument, "semi-homogeneity grids must be nonempty");
  for (double v : lambda_grid)
    if (!(v > 0.0)) fail(ErrorKind::Argument, "semi-homogeneity grid entries must be positive");
  for (double v : r_grid)
    if (!(v > 0.0)) fail(ErrorKind::Argument, "semi-homogeneity grid entries must be positive");

  SemiHomogeneity out;
  std::vector<double> inf_ratio(lambda_grid.size(), std::numeric_limits<double>::infinity());
  std::vector<double> sup_ratio(lambda_grid.size(), 0.0);
  for (std::size_t a = 0; a < lambda_grid.size(); ++a) {
    const double lam = lambda_grid[a];
    for (double r : r_grid) {
      const double ratio = ell(lam * r) / ell(r);
      out.c_hat = std::max(out.c_hat, ell(lam) / ratio);
      inf_ratio[a] = std::min(inf_ratio[a], ratio);
      sup_ratio[a] = std::max(sup_ratio[a], ratio);
    }
    out.c_upper_hat = std::max(out.c_upper_hat, ell(1.0 / lam) * sup_ratio[a]);
  }
  out.holds = std::isfinite(out.c_hat);
  const double c = std::max(out.c_hat, out.c_upper_hat);
  out.lower_display_holds = true;
  out.upper_display_holds = true;
  constexpr double slack = 1e-12;
  for (std::size_t a = 0; a < lambda_grid.size(); ++a) {
    const double lam = lambda_grid[a];
    if (ell(lam) / c > inf_ratio[a] * (1.0 + slack)) out.lower_display_holds = false;
    if (sup_ratio[a] > c / ell(1.0 / lam) * (1.0 + slack)) out.upper_display_holds = false;
  }
  return out;
}

NormEquivalence norm_equivalence_check(const SampledFunction& u, const SeminormSpec& spec,
                                       double r0, double lam) {
  if (!(lam > 1.0) || !(r0 > 0.0))
    fail(ErrorKind::Argument, "norm equivalence needs lam > 1 and r0 > 0");
  u.validate();
  require_in_domain(u, spec.domain);
  const std::size_t n = u.points.size();
  double min_spacing = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      min_spacing = std::min(min_spacing, distance(u.points[i], u.points[j]));

  NormEquivalence out;
  std::vector<std::size_t> inside;
  for (std::size_t c = 0; c < n; ++c) {
    const double dc = spec.domain.dist_to_boundary(u.points[c]);
    // Dyadic radii strictly below r0, down to the sample spacing.
    for (double r = 0.5 * r0; r >= min_spacing; r *= 0.5) {
      if (lam * r > dc) continue;
      ++out.admissible_balls;
      inside.clear();
      for (std::size_t i = 0; i < n; ++i)
        if (distance(u.points[i], u.points[c]) < r) inside.push_back(i);
      double sup = 0.0, semi = 0.0;
      for (std::size_t a = 0; a < inside.size(); ++a) {
        sup = std::max(sup, std::abs(u.values[inside[a]]));
        for (std::size_t b = a + 1; b < inside.size(); ++b) {
          const double num = std::abs(u.values[inside[a]] - u.values[inside[b]]);
          if (num == 0.0) continue;
          semi = std::max(semi,
                          num / ell(distance(u.points[inside[a]], u.points[inside[b]]), spec.alpha));
        }
      }
      out.ball_sup = std::max(out.ball_sup, ell(r, spec.beta) * sup +
                                                ell(r, spec.alpha + spec.beta) * semi);
    }
  }
  if (out.admissible_balls == 0)
    throw Error(ErrorKind::Diagnostic, kModule,
                "norm equivalence: no ball B_{lam r}(x) with r < r0 fits inside the domain");
  out.norm = weighted_norm(u, spec);
  out.lower_ratio = out.norm > 0.0 ? out.ball_sup / out.norm : 1.0;
  out.upper_ratio = out.ball_sup > 0.0 ? out.norm / out.ball_sup : 1.0;
  return out;
}

}  // namespace lognl
