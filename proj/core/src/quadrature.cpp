#include "lognl/quadrature.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "lognl/special.hpp"

namespace lognl {

namespace {

// Geometric grading toward singular breaks: panel edges at distance
// (b - a) 4^{-j} from the break, j = 1..kGradingLevels.
constexpr int kGradingLevels = 20;

GaussLegendre make_gauss_legendre(int n) {
  GaussLegendre gl;
  gl.nodes.resize(static_cast<std::size_t>(n));
  gl.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(special::kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    gl.nodes[lo] = -z;
    gl.nodes[hi] = z;
    gl.weights[lo] = w;
    gl.weights[hi] = w;
  }
  if (n % 2 == 1) gl.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return gl;
}

void panel_rule(double a, double b, const QuadratureConfig& cfg, bool half,
                std::vector<RadialNode>& out) {
  const double ta = std::log(a), tb = std::log(b);
  if (cfg.mode == QuadMode::Fast) {
    const int n = half ? std::max(2, cfg.n_radial / 2) : cfg.n_radial;
    const GaussLegendre& gl = gauss_legendre(n);
    const double mid = 0.5 * (ta + tb), hw = 0.5 * (tb - ta);
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
      const double rho = std::exp(mid + hw * gl.nodes[k]);
      out.push_back({rho, hw * gl.weights[k] * rho});
    }
    return;
  }
  const int m = (half ? 2 : 4) * cfg.n_radial;
  const double dt = (tb - ta) / m;
  for (int k = 0; k <= m; ++k) {
    const double c = (k == 0 || k == m) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    // Endpoints sit on breaks; sample them just inside the panel so that
    // jumps are seen from the correct side.
    const double rho = k == 0 ? a * (1.0 + 1e-13) : k == m ? b * (1.0 - 1e-13) : std::exp(ta + dt * k);
    out.push_back({rho, c * dt / 3.0 * rho});
  }
}

void decade_panels(double a, double b, const QuadratureConfig& cfg, bool half,
                   std::vector<RadialNode>& out) {
  const double decades = std::log10(b / a);
  const int pieces = std::max(1, static_cast<int>(std::ceil(decades - 1e-9)));
  const double ratio = std::pow(b / a, 1.0 / pieces);
  double p = a;
  for (int k = 0; k < pieces; ++k) {
    const double q = k + 1 == pieces ? b : p * ratio;
    panel_rule(p, q, cfg, half, out);
    p = q;
  }
}

}  // namespace

void QuadratureConfig::validate() const {
  if (n_radial < 8) throw Error(ErrorKind::Argument, "nonlocal_eval", "n_radial must be >= 8");
  if (n_angular < 8) throw Error(ErrorKind::Argument, "nonlocal_eval", "n_angular must be >= 8");
  if (!(r_min > 0.0 && r_min < 0.1))
    throw Error(ErrorKind::Argument, "nonlocal_eval", "r_min must lie in (0, 0.1)");
}

const GaussLegendre& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendre>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussLegendre>(make_gauss_legendre(n));
  return *slot;
}

std::vector<Direction> directions(int dim, const QuadratureConfig& cfg, bool half) {
  if (dim == 1) return {{{1.0, 0.0}, 1.0}, {{-1.0, 0.0}, 1.0}};
  if (dim != 2)
    throw Error(ErrorKind::Unsupported, "nonlocal_eval", "quadrature supports N = 1, 2 only");
  const int n = half ? cfg.n_angular / 2 : cfg.n_angular;
  std::vector<Direction> dirs;
  dirs.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * special::kPi * (k + 0.5) / n;
    dirs.push_back({{std::cos(th), std::sin(th)}, 2.0 * special::kPi / n});
  }
  return dirs;
}

void radial_nodes(double lo, double hi, std::span<const RayBreak> breaks,
                  const QuadratureConfig& cfg, bool half, std::vector<RadialNode>& out) {
  out.clear();
  if (!(hi > lo) || !(lo > 0.0)) return;
  std::vector<RayBreak> pts;
  pts.reserve(breaks.size() + 2);
  pts.push_back({lo, false});
  for (const RayBreak& b : breaks)
    if (b.rho > lo && b.rho < hi) pts.push_back(b);
  pts.push_back({hi, false});
  std::sort(pts.begin(), pts.end(),
            [](const RayBreak& a, const RayBreak& b) { return a.rho < b.rho; });
  std::vector<RayBreak> merged;
  merged.reserve(pts.size());
  for (const RayBreak& p : pts) {
    if (!merged.empty() && p.rho - merged.back().rho <= 1e-13 * p.rho) {
      merged.back().singular = merged.back().singular || p.singular;
      continue;
    }
    merged.push_back(p);
  }
  // Endpoints of the integration range keep their position even when merged.
  merged.front().rho = lo;
  merged.back().rho = hi;

  std::vector<double> edges;
  for (std::size_t s = 0; s + 1 < merged.size(); ++s) {
    const double a = merged[s].rho, b = merged[s + 1].rho;
    const bool sa = merged[s].singular, sb = merged[s + 1].singular;
    edges.clear();
    edges.push_back(a);
    if (sa && sb) {
      const double m = 0.5 * (a + b);
      for (int j = kGradingLevels; j >= 1; --j) edges.push_back(a + (m - a) * std::pow(0.25, j));
      edges.push_back(m);
      for (int j = 1; j <= kGradingLevels; ++j) edges.push_back(b - (b - m) * std::pow(0.25, j));
    } else if (sa) {
      for (int j = kGradingLevels; j >= 1; --j) edges.push_back(a + (b - a) * std::pow(0.25, j));
    } else if (sb) {
      for (int j = 1; j <= kGradingLevels; ++j) edges.push_back(b - (b - a) * std::pow(0.25, j));
    }
    edges.push_back(b);
    for (std::size_t k = 0; k + 1 < edges.size(); ++k)
      if (edges[k + 1] > edges[k]) decade_panels(edges[k], edges[k + 1], cfg, half, out);
  }
}

void sphere_crossings(const Point& x, const Point& dir, const Point& center, double radius,
                      bool singular, std::vector<RayBreak>& out) {
  const Point d = x - center;
  const double b = dot(dir, d);
  const double c = dot(d, d) - radius * radius;
  const double disc = b * b - c;
  if (disc <= 0.0) return;
  const double s = std::sqrt(disc);
  const double r1 = -b - s, r2 = -b + s;
  if (r1 > 0.0) out.push_back({r1, singular});
  if (r2 > 0.0) out.push_back({r2, singular});
}

}  // namespace lognl
