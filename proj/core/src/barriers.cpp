#include "lognl/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "lognl/error.hpp"
#include "lognl/logmod.hpp"
#include "lognl/solver.hpp"
#include "lognl/special.hpp"

namespace lognl {

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, "barriers", what);
}

double halton(std::uint64_t index, std::uint64_t base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

double sphere_area(int N) { return N == 1 ? 2.0 : 2.0 * special::kPi; }

// Evaluates f on every sample, in parallel, preserving order.
template <class F>
std::vector<double> evaluate_all(const std::vector<Point>& xs, F&& f) {
  std::vector<double> out(xs.size());
  const unsigned threads =
      std::max(1u, std::min<unsigned>(worker_threads(), static_cast<unsigned>(xs.size())));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned t) {
    try {
      for (std::size_t i = t; i < xs.size(); i += threads) out[i] = f(xs[i]);
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

void add_sphere_breaks(FieldFunction& f, std::vector<std::pair<double, bool>> radii) {
  f.breaks = [radii = std::move(radii)](const Point& x, const Point& dir,
                                        std::vector<RayBreak>& out) {
    for (const auto& [r, singular] : radii) sphere_crossings(x, dir, Point{}, r, singular, out);
  };
}

void check_radius(double r, const char* what) {
  if (!(r > 0.0 && r < 1.0)) fail(ErrorKind::Argument, std::string(what) + " must lie in (0, 1)");
}

}  // namespace

double bump_profile(double s) {
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  const double t = 2.0 * s - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

FieldFunction boundary_barrier(double r, double alpha) {
  check_radius(r, "barrier radius");
  FieldFunction f;
  f.name = "boundary_barrier";
  f.evaluate = [r, alpha](const Point& y) {
    const double s = norm(y) - r;
    return s > 0.0 ? ell(s, alpha) : 0.0;
  };
  add_sphere_breaks(f, {{r, true}, {r + kRho0, false}});
  return f;
}

FieldFunction bump_field(double r) {
  if (!(r > 0.0)) fail(ErrorKind::Argument, "bump radius must be positive");
  FieldFunction f;
  f.name = "bump";
  f.support_radius = r;
  f.evaluate = [r](const Point& y) { return bump_profile(norm(y) / r); };
  add_sphere_breaks(f, {{0.5 * r, false}, {r, false}});
  return f;
}

FieldFunction tail_field(double rho, double alpha) {
  check_radius(rho, "tail radius");
  FieldFunction f;
  f.name = "tail";
  const double base = ell(rho, alpha);
  f.evaluate = [rho, alpha, base](const Point& y) {
    const double s = norm(y);
    return s > rho ? std::max(0.0, ell(s, alpha) - base) : 0.0;
  };
  add_sphere_breaks(f, {{rho, false}, {kRho0, false}});
  return f;
}

FieldFunction shell_indicator(double a, double b) {
  FieldFunction f;
  f.name = "shell";
  f.support_radius = std::max(b, 0.0);
  f.evaluate = [a, b](const Point& y) {
    const double s = norm(y);
    return s > a && s <= b ? 1.0 : 0.0;
  };
  add_sphere_breaks(f, {{a, false}, {b, false}});
  return f;
}

FieldFunction exponential_field(double alpha, int axis) {
  if (axis < 0 || axis > 1) fail(ErrorKind::Argument, "axis must be 0 or 1");
  FieldFunction f;
  f.name = "exponential";
  f.evaluate = [alpha, axis](const Point& y) { return std::exp(-alpha * y[axis]); };
  return f;
}

FieldFunction linear_combination(const std::vector<std::pair<double, FieldFunction>>& terms) {
  FieldFunction f;
  f.name = "combination";
  bool bounded = true;
  double reach = 0.0;
  for (const auto& [c, g] : terms) {
    bounded = bounded && g.bounded_support();
    reach = std::max(reach, norm(g.support_center) + g.support_radius);
  }
  f.support_radius = bounded ? reach : std::numeric_limits<double>::infinity();
  f.evaluate = [terms](const Point& y) {
    double v = 0.0;
    for (const auto& [c, g] : terms) v += c * g(y);
    return v;
  };
  f.breaks = [terms](const Point& x, const Point& dir, std::vector<RayBreak>& out) {
    for (const auto& term : terms)
      if (term.second.breaks) term.second.breaks(x, dir, out);
  };
  return f;
}

double shell_measure(double a, double b, int N) {
  if (!(a > 0.0) || !(b > a)) return 0.0;
  // l(t)/t integrates to ln|ln t| below 0.1 and to ln t / ln 10 above.
  double m = 0.0;
  const double lo = std::min(a, kRho0), hi = std::min(b, kRho0);
  if (hi > lo) m += std::log(std::abs(std::log(lo))) - std::log(std::abs(std::log(hi)));
  const double lo2 = std::max(a, kRho0), hi2 = std::max(b, kRho0);
  if (hi2 > lo2) m += std::log(hi2 / lo2) / std::log(10.0);
  return sphere_area(N) * m;
}

Shell gain_shell(double rho, double fraction, int N) {
  if (!(rho > 0.0 && rho < 1.0 / 3.0)) fail(ErrorKind::Argument, "gain needs rho in (0, 1/3)");
  if (!(fraction > 0.0 && fraction <= 1.0))
    fail(ErrorKind::Argument, "gain set is empty: fraction must lie in (0, 1]");
  const double inner = 3.0 * rho * rho;
  const double target = fraction * shell_measure(inner, rho, N);
  double lo = inner, hi = rho;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (shell_measure(mid, rho, N) > target ? lo : hi) = mid;
  }
  Shell s;
  s.inner = fraction == 1.0 ? inner : 0.5 * (lo + hi);
  s.outer = rho;
  s.measure = shell_measure(s.inner, s.outer, N);
  return s;
}

bool stable_within(std::span<const double> values, double tol) {
  if (values.empty()) return false;
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  if (!(*mn > 0.0) || !std::isfinite(*mx)) return false;
  return *mx / *mn <= (1.0 + tol) / (1.0 - tol);
}

std::vector<Point> radial_samples(double r_in, double r_out, int count, int N,
                                  bool include_center) {
  std::vector<Point> xs;
  if (include_center) xs.push_back({});
  for (int k = 1; static_cast<int>(xs.size()) < count; ++k) {
    const double s = r_in + (r_out - r_in) * halton(static_cast<std::uint64_t>(k), 2);
    if (N == 1) {
      xs.push_back({s, 0.0});
    } else {
      const double th = 2.0 * special::kPi * halton(static_cast<std::uint64_t>(k), 3);
      xs.push_back({s * std::cos(th), s * std::sin(th)});
    }
  }
  return xs;
}

BoundaryBarrierReport verify_boundary_barrier(const KernelSpec& K, double r,
                                              std::span<const double> alphas, int N,
                                              const QuadratureConfig& cfg) {
  if (!(r > 0.0 && r <= kRho0)) fail(ErrorKind::Argument, "boundary barrier needs r in (0, 0.1]");
  if (alphas.empty()) fail(ErrorKind::Argument, "empty alpha list");
  BoundaryBarrierReport rep;
  const auto xs = radial_samples(r + 1e-3 * r * r, r + r * r, kBarrierSamples, N);
  for (double a : alphas) {
    const FieldFunction phi = boundary_barrier(r, a);
    const auto v = evaluate_all(xs, [&](const Point& x) { return eval_LK(K, phi, x, N, cfg).value; });
    const double mn = *std::min_element(v.begin(), v.end());
    rep.alphas.push_back(a);
    rep.delta.push_back(mn);
    if (mn > 0.0 && a >= rep.alpha_star) {
      rep.alpha_star = a;
      rep.delta_hat = mn;
      rep.pass = true;
    }
  }
  if (!rep.pass) {
    const auto [lo, hi] = std::minmax_element(alphas.begin(), alphas.end());
    rep.diagnostic = "barrier failure: no alpha in [" + std::to_string(*lo) + ", " +
                     std::to_string(*hi) + "] gives a positive minimum";
  }
  return rep;
}

ScaleReport verify_bump(const KernelSpec& K, std::span<const double> radii, int N,
                        const QuadratureConfig& cfg) {
  ScaleReport rep;
  for (double r : radii) {
    if (!(r > 0.0 && r < kRho0)) fail(ErrorKind::Argument, "bump radii must lie in (0, 0.1)");
    const FieldFunction beta = bump_field(r);
    const auto xs = radial_samples(0.0, r, kBarrierSamples, N, true);
    const auto v = evaluate_all(xs, [&](const Point& x) { return eval_LK(K, beta, x, N, cfg).value; });
    rep.scales.push_back(r);
    rep.constants.push_back(*std::max_element(v.begin(), v.end()) * ell(r) / K.Lambda);
  }
  rep.C_hat = *std::max_element(rep.constants.begin(), rep.constants.end());
  rep.stable = stable_within(rep.constants, 0.25);
  rep.pass = std::isfinite(rep.C_hat) && rep.stable;
  return rep;
}

ScaleReport verify_gain(const KernelSpec& K, std::span<const double> rhos, double fraction, int N,
                        const QuadratureConfig& cfg) {
  ScaleReport rep;
  for (double rho : rhos) {
    const Shell A = gain_shell(rho, fraction, N);
    if (!(A.measure > 0.0)) fail(ErrorKind::Argument, "gain set is empty");
    const FieldFunction chi = shell_indicator(A.inner, A.outer);
    const auto xs = radial_samples(0.0, 2.0 * rho * rho, kBarrierSamples, N, true);
    const auto v = evaluate_all(xs, [&](const Point& x) { return eval_LK(K, chi, x, N, cfg).value; });
    double c = std::numeric_limits<double>::infinity();
    for (double val : v) c = std::min(c, -val * ell(rho) / (K.lambda * A.measure));
    rep.scales.push_back(rho);
    rep.constants.push_back(c);
  }
  rep.C_hat = *std::min_element(rep.constants.begin(), rep.constants.end());
  rep.stable = stable_within(rep.constants, 0.25);
  rep.pass = rep.C_hat > 0.0 && rep.stable;
  return rep;
}

ScaleReport verify_tail(const KernelSpec& K, std::span<const double> rhos, double alpha, int N,
                        const QuadratureConfig& cfg) {
  if (!(alpha > 0.0 && alpha < 0.5)) fail(ErrorKind::Argument, "tail needs alpha in (0, 1/2)");
  ScaleReport rep;
  for (double rho : rhos) {
    const FieldFunction t = tail_field(rho, alpha);
    const auto xs = radial_samples(0.0, 0.5 * rho, kBarrierSamples, N, true);
    const auto v = evaluate_all(xs, [&](const Point& x) { return eval_LK(K, t, x, N, cfg).value; });
    const double mn = *std::min_element(v.begin(), v.end());
    rep.scales.push_back(rho);
    rep.constants.push_back(-mn / (K.Lambda * (1.0 + alpha * ell(rho, alpha - 1.0))));
  }
  rep.C_hat = *std::max_element(rep.constants.begin(), rep.constants.end());
  rep.stable = stable_within(rep.constants, 0.25);
  rep.pass = std::isfinite(rep.C_hat) && rep.stable;
  return rep;
}

ExponentialReport verify_exponential(const KernelSpec& K, std::span<const double> alphas,
                                     double R, int N, const QuadratureConfig& cfg) {
  if (!(R > 0.0)) fail(ErrorKind::Argument, "strip half-width must be positive");
  if (alphas.empty()) fail(ErrorKind::Argument, "empty alpha list");
  ExponentialReport rep;
  std::vector<Point> xs;
  for (int k = 0; k < kBarrierSamples; ++k) {
    Point x{};
    x[N - 1] = -R + 2.0 * R * halton(static_cast<std::uint64_t>(k + 1), 2);
    xs.push_back(x);
  }
  bool found = false;
  for (double a : alphas) {
    const FieldFunction phi = exponential_field(a, N - 1);
    const auto v = evaluate_all(
        xs, [&](const Point& x) { return eval_LK(K, phi, x, N, cfg).value * std::exp(a * x[N - 1]); });
    const double sup = *std::max_element(v.begin(), v.end());
    rep.alphas.push_back(a);
    rep.sup_scaled.push_back(sup);
    if (!found && sup < 0.0) {
      found = true;
      rep.alpha_star = a;
      rep.c0_hat = -sup;
    }
  }
  rep.pass = found;
  if (!found) rep.diagnostic = "no alpha in the list gives a negative bound; enlarge the alpha range";
  return rep;
}

SectorReport verify_sector(double r, std::span<const double> d, int N, const QuadratureConfig& cfg) {
  SectorReport rep;
  rep.c_hat = std::numeric_limits<double>::infinity();
  for (double di : d) {
    const double v = sector_integral(r, di, N, cfg).value;
    rep.d.push_back(di);
    rep.values.push_back(v);
    rep.c_hat = std::min(rep.c_hat, v / std::abs(std::log(di)));
  }
  if (d.empty()) fail(ErrorKind::Argument, "empty d list");
  rep.pass = rep.c_hat > 0.0;
  return rep;
}

FieldFunction composite_barrier(double rho, double alpha, const Shell& A) {
  const double top = ell(rho, alpha);
  return linear_combination({{top - ell(rho * rho, alpha), bump_field(2.0 * rho * rho)},
                             {0.5 * top, shell_indicator(A.inner, A.outer)},
                             {-1.0, tail_field(rho, alpha)}});
}

CompositeReport verify_composite(const KernelSpec& K, double rho, double alpha, int N,
                                 const QuadratureConfig& cfg) {
  CompositeReport rep;
  rep.alpha = alpha;
  rep.rho = rho;
  rep.shell = gain_shell(rho, 0.5, N);
  const FieldFunction phi = composite_barrier(rho, alpha, rep.shell);
  const double scale = ell(rho * rho, alpha - 1.0);
  const auto xs = radial_samples(0.0, 2.0 * rho * rho, kBarrierSamples, N, true);
  const auto v = evaluate_all(xs, [&](const Point& x) { return eval_LK(K, phi, x, N, cfg).value; });
  rep.max_scaled = *std::max_element(v.begin(), v.end()) / scale;
  rep.delta_hat = -rep.max_scaled;
  if (!(rep.delta_hat > 0.0)) {
    rep.diagnostic = "composite barrier is not negative at every sample";
    return rep;
  }
  rep.delta = 0.5 * rep.delta_hat;
  QuadratureConfig oracle = cfg;
  oracle.mode = QuadMode::Oracle;
  const auto w =
      evaluate_all(xs, [&](const Point& x) { return eval_LK(K, phi, x, N, oracle).value; });
  rep.pass = std::all_of(w.begin(), w.end(), [&](double val) { return val <= -rep.delta * scale; });
  if (!rep.pass) rep.diagnostic = "oracle recheck exceeds -delta l^{alpha-1}(rho^2)";
  return rep;
}

}  // namespace lognl
