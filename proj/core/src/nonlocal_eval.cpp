#include "lognl/nonlocal_eval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <regex>

#include "lognl/error.hpp"
#include "lognl/logmod.hpp"

namespace lognl {

namespace {

void radial_field_breaks(const Point& center, std::vector<double> radii, bool singular_center,
                         FieldFunction& f) {
  f.breaks = [center, radii = std::move(radii), singular_center](
                 const Point& x, const Point& dir, std::vector<RayBreak>& out) {
    for (double r : radii) sphere_crossings(x, dir, center, r, false, out);
    if (singular_center) {
      // The ray meets the centre only when it is collinear with it.
      const Point d = center - x;
      const double along = dot(d, dir);
      const Point perp = d - along * dir;
      if (along > 0.0 && norm(perp) <= 1e-14 * (1.0 + along)) out.push_back({along, true});
    }
  };
}

void append_field_breaks(const FieldFunction& u, const Point& x, const Point& dir,
                         std::vector<RayBreak>& out) {
  if (u.breaks) u.breaks(x, dir, out);
}

double value_at(const FieldFunction& u, const Point& x) {
  const double v = u(x);
  if (std::isnan(v))
    throw Error(ErrorKind::Numerical, "nonlocal_eval", "field '" + u.name + "' is NaN at x");
  return v;
}

double parse_arg(const std::string& spec, const std::string& body, double fallback) {
  if (body.empty()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(body, &used);
    if (used != body.size()) throw std::invalid_argument(body);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Argument, "nonlocal_eval", "bad argument in field '" + spec + "'");
  }
}

}  // namespace

FieldFunction constant_field(double c) {
  FieldFunction f;
  f.name = "const";
  f.evaluate = [c](const Point&) { return c; };
  if (c == 0.0) f.support_radius = 0.0;
  return f;
}

FieldFunction linear_field(double offset, const Point& slope) {
  FieldFunction f;
  f.name = "linear";
  f.evaluate = [offset, slope](const Point& y) { return offset + dot(slope, y); };
  return f;
}

FieldFunction quadratic_field() {
  FieldFunction f;
  f.name = "quadratic";
  f.evaluate = [](const Point& y) { return dot(y, y); };
  return f;
}

FieldFunction gaussian_field(double sigma, double support) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::Argument, "nonlocal_eval", "sigma must be positive");
  FieldFunction f;
  f.name = "gaussian";
  const double s2 = 2.0 * sigma * sigma;
  f.support_radius = support > 0.0 ? support : 12.0 * sigma;
  const double R = f.support_radius;
  f.evaluate = [s2, R](const Point& y) {
    const double r2 = dot(y, y);
    return r2 < R * R ? std::exp(-r2 / s2) : 0.0;
  };
  radial_field_breaks({}, {R}, false, f);
  return f;
}

FieldFunction ell_profile_field(double alpha) {
  FieldFunction f;
  f.name = "ell_profile";
  f.evaluate = [alpha](const Point& y) {
    const double r = norm(y);
    return r > 0.0 ? ell(r, alpha) : 0.0;
  };
  radial_field_breaks({}, {kRho0}, true, f);
  return f;
}

FieldFunction indicator_ball(const Point& center, double radius) {
  FieldFunction f;
  f.name = "indicator";
  f.support_center = center;
  f.support_radius = std::max(radius, 0.0);
  f.evaluate = [center, radius](const Point& y) { return norm(y - center) < radius ? 1.0 : 0.0; };
  radial_field_breaks(center, {radius}, false, f);
  return f;
}

void lattice_crossings(const Grid& grid, const Point& x, const Point& dir,
                       std::vector<RayBreak>& out) {
  const double h = grid.h();
  const int N = grid.dim();
  for (int a = 0; a < N; ++a) {
    if (std::abs(dir[a]) < 1e-15) continue;
    const double lo = grid.window_lo(a), hi = grid.window_hi(a);
    const long kmin = std::lround(lo / h), kmax = std::lround(hi / h);
    for (long k = kmin; k <= kmax; ++k) {
      const double rho = (static_cast<double>(k) * h - x[a]) / dir[a];
      if (!(rho > 0.0)) continue;
      if (N == 2) {
        const int b = 1 - a;
        const double c = x[b] + rho * dir[b];
        if (c < grid.window_lo(b) - 1e-12 || c > grid.window_hi(b) + 1e-12) continue;
      }
      out.push_back({rho, false});
    }
  }
}

FieldFunction grid_field(std::shared_ptr<const GridFunction> u) {
  if (!u) throw Error(ErrorKind::Argument, "nonlocal_eval", "null grid function");
  FieldFunction f;
  f.name = "grid";
  f.grid = u;
  const Grid& g = u->grid();
  Point lo{g.window_lo(0), g.dim() == 2 ? g.window_lo(1) : 0.0};
  Point hi{g.window_hi(0), g.dim() == 2 ? g.window_hi(1) : 0.0};
  f.support_center = 0.5 * (lo + hi);
  f.support_radius = 0.5 * norm(hi - lo);
  f.evaluate = [u](const Point& y) { return u->interpolate(y); };
  f.breaks = [u](const Point& x, const Point& dir, std::vector<RayBreak>& out) {
    lattice_crossings(u->grid(), x, dir, out);
  };
  return f;
}

FieldFunction parse_field(const std::string& spec) {
  static const std::regex pattern(R"(^\s*([a-z_]+)\s*(?:\(\s*([^)]*?)\s*\))?\s*$)");
  std::smatch m;
  if (!std::regex_match(spec, m, pattern))
    throw Error(ErrorKind::Argument, "nonlocal_eval", "cannot parse field '" + spec + "'");
  const std::string name = m[1];
  const std::string arg = m[2];
  if (name == "const") return constant_field(parse_arg(spec, arg, 1.0));
  if (name == "linear") {
    const double s = parse_arg(spec, arg, 1.0);
    return linear_field(0.0, {s, 0.0});
  }
  if (name == "quadratic") return quadratic_field();
  if (name == "gaussian") return gaussian_field(parse_arg(spec, arg, 1.0));
  if (name == "ell_profile") return ell_profile_field(parse_arg(spec, arg, 0.5));
  throw Error(ErrorKind::Argument, "nonlocal_eval", "unknown field '" + name + "'");
}

EvalResult eval_LK(const KernelSpec& K, const FieldFunction& u, const Point& x, int N,
                   const QuadratureConfig& cfg) {
  cfg.validate();
  const double ux = value_at(u, x);
  auto breaks = [&](const Point& p, const Point& dir, std::vector<RayBreak>& out) {
    append_field_breaks(u, p, dir, out);
    for (double b : K.radial_breaks) out.push_back({b, false});
  };
  auto integrand = [&](const Point& y, double, const Point&) {
    const double diff = ux - u(y);
    return diff == 0.0 ? 0.0 : diff * K.evaluate(x, y - x);
  };
  const PolarResult r = integrate_polar(x, N, cfg.r_min, K.range, cfg, breaks, integrand);
  return {r.value, r.err_est};
}

EvalResult eval_LK(const KernelSpec& K, const FieldFunction& u, const Point& x,
                   const Domain& domain, const QuadratureConfig& cfg) {
  if (!domain.contains(x))
    throw Error(ErrorKind::Argument, "nonlocal_eval", "evaluation point outside " + domain.describe());
  return eval_LK(K, u, x, domain.dim(), cfg);
}

EvalResult eval_J_conv(const FieldFunction& u, const Point& x, int N, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!u.bounded_support())
    throw Error(ErrorKind::Argument, "nonlocal_eval", "J * u needs a field with bounded support");
  const double hi = u.reach(x);
  if (hi <= 1.0) return {};
  auto breaks = [&](const Point& p, const Point& dir, std::vector<RayBreak>& out) {
    append_field_breaks(u, p, dir, out);
  };
  auto integrand = [&](const Point& y, double, const Point&) { return u(y); };
  const PolarResult r = integrate_polar(x, N, 1.0, hi, cfg, breaks, integrand);
  return {r.value, r.err_est};
}

EvalResult eval_loglap(const FieldFunction& u, const Point& x, int N, const QuadratureConfig& cfg) {
  if (!u.bounded_support())
    throw Error(ErrorKind::Argument, "nonlocal_eval", "logarithmic Laplacian needs bounded support");
  const LogLapConstants c = loglap_constants(N);
  const EvalResult local = eval_LK(unit_kernel(), u, x, N, cfg);
  const EvalResult far = eval_J_conv(u, x, N, cfg);
  return {c.c_N * local.value - c.c_N * far.value + c.rho_N * value_at(u, x),
          c.c_N * (local.err_est + far.err_est)};
}

EvalResult eval_loglap_direct(const FieldFunction& u, const Point& x, int N,
                              const QuadratureConfig& cfg) {
  cfg.validate();
  if (!u.bounded_support())
    throw Error(ErrorKind::Argument, "nonlocal_eval", "logarithmic Laplacian needs bounded support");
  const LogLapConstants c = loglap_constants(N);
  const double ux = value_at(u, x);
  const double hi = std::max(1.0, u.reach(x));
  auto breaks = [&](const Point& p, const Point& dir, std::vector<RayBreak>& out) {
    append_field_breaks(u, p, dir, out);
    out.push_back({1.0, false});
  };
  auto integrand = [&](const Point& y, double rho, const Point&) {
    return (rho < 1.0 ? ux : 0.0) - u(y);
  };
  const PolarResult r = integrate_polar(x, N, cfg.r_min, hi, cfg, breaks, integrand);
  return {c.c_N * r.value + c.rho_N * ux, c.c_N * r.err_est};
}

EvalResult eval_schrodinger(const FieldFunction& u, const Point& x, int N,
                            const QuadratureConfig& cfg) {
  cfg.validate();
  schrodinger_weight(1.0, N);
  const double ux = value_at(u, x);
  const double hi = u.bounded_support() ? std::max(40.0, u.reach(x)) : 40.0;
  auto breaks = [&](const Point& p, const Point& dir, std::vector<RayBreak>& out) {
    append_field_breaks(u, p, dir, out);
  };
  auto integrand = [&](const Point& y, double rho, const Point&) {
    const double diff = ux - u(y);
    return diff == 0.0 ? 0.0 : diff * schrodinger_weight(rho, N);
  };
  const PolarResult r = integrate_polar(x, N, cfg.r_min, hi, cfg, breaks, integrand);
  return {r.value, r.err_est};
}

EvalResult eval_remainder(const MollifiedKernel& Ki, const FieldFunction& u, const Point& x,
                          const QuadratureConfig& cfg) {
  cfg.validate();
  const double ux = value_at(u, x);
  auto breaks = [&](const Point& p, const Point& dir, std::vector<RayBreak>& out) {
    append_field_breaks(u, p, dir, out);
  };
  auto integrand = [&](const Point& y, double, const Point&) {
    const double diff = ux - u(y);
    return diff == 0.0 ? 0.0 : diff * Ki(y - x);
  };
  const PolarResult r =
      integrate_polar(x, Ki.dim(), 1.0, Ki.support_radius(), cfg, breaks, integrand);
  return {r.value, r.err_est};
}

EvalResult sector_integral(double r, double d, int N, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::Argument, "nonlocal_eval", "r must lie in (0,1)");
  if (!(d > 0.0 && d < r * r))
    throw Error(ErrorKind::Argument, "nonlocal_eval", "d must lie in (0, r^2)");
  const Point x{r + d, 0.0};
  if (N == 2) {
    // B_r is seen from x inside |theta - pi| < a. With theta = pi + a sin(u)
    // the square-root decay of the chord length at the window edge becomes
    // smooth in u.
    const double X = r + d, a = std::asin(r / X);
    std::vector<RadialNode> nodes;
    auto chord = [&](double u, bool half) {
      const double t = a * std::sin(u);
      const double c = std::cos(t), s = std::sin(t);
      const double disc = std::sqrt(std::max(0.0, r * r - X * X * s * s));
      const double lo = X * c - disc, hi = X * c + disc;
      if (!(hi > lo)) return 0.0;
      radial_nodes(lo, hi, {}, cfg, half, nodes);
      double ray = 0.0;
      for (const RadialNode& q : nodes) ray += q.weight / q.rho;
      return ray * a * std::cos(u);
    };
    double sums[2] = {0.0, 0.0};
    for (int pass = 0; pass < 2; ++pass) {
      const bool half = pass == 1;
      const int n = std::max(4, half ? cfg.n_angular / 2 : cfg.n_angular);
      const double lo = -0.5 * std::numbers::pi, hw = 0.5 * std::numbers::pi;
      if (cfg.mode == QuadMode::Fast) {
        const GaussLegendre& gl = gauss_legendre(n);
        for (std::size_t q = 0; q < gl.nodes.size(); ++q)
          sums[pass] += hw * gl.weights[q] * chord(hw * gl.nodes[q], half);
      } else {
        const int m = 4 * n;
        const double step = 2.0 * hw / m;
        for (int k = 0; k <= m; ++k) {
          const double w = (k == 0 || k == m) ? 1.0 : (k % 2 ? 4.0 : 2.0);
          sums[pass] += w * step / 3.0 * chord(lo + k * step, half);
        }
      }
    }
    return {sums[0], std::abs(sums[0] - sums[1])};
  }
  const FieldFunction ball = indicator_ball({}, r);
  auto breaks = [&](const Point& p, const Point& dir, std::vector<RayBreak>& out) {
    append_field_breaks(ball, p, dir, out);
  };
  auto integrand = [&](const Point& y, double, const Point&) { return ball(y); };
  const PolarResult res = integrate_polar(x, N, cfg.r_min, 2.0 * r + d, cfg, breaks, integrand);
  return {res.value, res.err_est};
}

}  // namespace lognl
