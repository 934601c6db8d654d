#include "lognl/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "lognl/error.hpp"
#include "lognl/logmod.hpp"
#include "lognl/special.hpp"

namespace lognl {

namespace {

double halton(std::uint64_t index, std::uint64_t base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

double bump_profile(double s) { return s < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }

double bump_derivative(double s) {
  if (s >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  return -2.0 * s / (q * q) * std::exp(-1.0 / q);
}

// int_0^1 g(s) ds on 64 Gauss-Legendre panels.
template <class G>
double unit_integral(G&& g) {
  const GaussLegendre& gl = gauss_legendre(16);
  constexpr int panels = 64;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = static_cast<double>(p) / panels, hw = 0.5 / panels;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k)
      sum += hw * gl.weights[k] * g(a + hw * (1.0 + gl.nodes[k]));
  }
  return sum;
}

KernelSpec radial_kernel(std::string name, std::function<double(double)> profile, double lambda,
                         double Lambda) {
  KernelSpec k;
  k.name = std::move(name);
  k.evaluate = [profile = std::move(profile)](const Point&, const Point& y) {
    return profile(norm(y));
  };
  k.lambda = lambda;
  k.Lambda = Lambda;
  return k;
}

KernelSpec table_kernel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Argument, "kernels", "cannot open kernel table " + path);
  std::vector<double> r, v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a = 0.0, b = 0.0;
    if (!(row >> a >> b)) {
      if (r.empty()) continue;  // header
      throw Error(ErrorKind::Argument, "kernels", "malformed row in " + path + ": " + line);
    }
    if (!r.empty() && a <= r.back())
      throw Error(ErrorKind::Argument, "kernels", "table radii must increase in " + path);
    if (!(b >= 0.0)) throw Error(ErrorKind::KernelDefect, "kernels", "negative table value");
    r.push_back(a);
    v.push_back(b);
  }
  if (r.size() < 2) throw Error(ErrorKind::Argument, "kernels", "kernel table needs >= 2 rows");
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  KernelSpec k = radial_kernel(
      "table:" + path,
      [r, v](double s) {
        if (s <= r.front()) return v.front();
        if (s >= r.back()) return v.back();
        const auto it = std::upper_bound(r.begin(), r.end(), s);
        const std::size_t j = static_cast<std::size_t>(it - r.begin());
        const double t = (s - r[j - 1]) / (r[j] - r[j - 1]);
        return (1.0 - t) * v[j - 1] + t * v[j];
      },
      *mn, *mx);
  for (double x : r)
    if (x > 0.0 && x < 1.0) k.radial_breaks.push_back(x);
  return k;
}

}  // namespace

LogLapConstants loglap_constants(int N) {
  if (N <= 0) throw Error(ErrorKind::Argument, "kernels", "dimension must be positive");
  const double half = 0.5 * N;
  LogLapConstants c;
  c.N = N;
  c.c_N = std::pow(special::kPi, -half) * special::gamma(half);
  c.rho_N = 2.0 * std::log(2.0) + special::digamma(half) - special::kEulerGamma;
  return c;
}

double schrodinger_weight(double r, int N) {
  if (!(r > 0.0)) throw Error(ErrorKind::Domain, "kernels", "schrodinger_weight requires r > 0");
  switch (N) {
    case 1:
      return std::exp(-r);
    case 2: {
      const double k1 = r < 2.0 ? special::bessel_k1_series(r) : special::bessel_k(1.0, r);
      return r * k1 / special::kPi;
    }
    case 3:
      return (1.0 + r) * std::exp(-r) / (2.0 * special::kPi);
    default:
      throw Error(ErrorKind::Unsupported, "kernels",
                  "schrodinger weight supports N = 1, 2, 3, got " + std::to_string(N));
  }
}

double schrodinger_slope_at_zero(int N) {
  const double h = 1e-6;
  return (schrodinger_weight(h, N) - loglap_constants(N).c_N) / h;
}

KernelSpec unit_kernel() { return radial_kernel("unit", [](double) { return 1.0; }, 1.0, 1.0); }

KernelSpec sinlog_kernel() {
  return radial_kernel(
      "sinlog", [](double s) { return s > 0.0 ? 1.0 + 0.5 * std::sin(std::log(s)) : 1.0; }, 0.5,
      1.5);
}

KernelSpec make_kernel(const std::string& name, int N) {
  if (name == "unit") return unit_kernel();
  if (name == "sinlog") return sinlog_kernel();
  if (name == "loglap") {
    const double c = loglap_constants(N).c_N;
    return radial_kernel("loglap", [c](double) { return c; }, c, c);
  }
  if (name == "schrodinger") {
    const double c = loglap_constants(N).c_N;
    schrodinger_weight(1.0, N);
    KernelSpec k = radial_kernel(
        "schrodinger", [c, N](double s) { return s > 0.0 ? schrodinger_weight(s, N) : c; },
        schrodinger_weight(1.0, N), c);
    k.differentiable = true;
    return k;
  }
  if (name == "xjump") {
    KernelSpec k;
    k.name = "xjump";
    k.evaluate = [](const Point& x, const Point&) { return x[0] < 0.5 ? 1.0 : 2.0; };
    k.lambda = 1.0;
    k.Lambda = 2.0;
    k.translation_invariant = false;
    k.x_jumps = {0.5};
    return k;
  }
  if (name == "radial") return radial_kernel("radial", [](double s) { return s; }, 0.5, 1.0);
  if (name.rfind("table:", 0) == 0) return table_kernel(name.substr(6));
  throw Error(ErrorKind::Argument, "kernels", "unknown kernel '" + name + "'");
}

EllipticityReport check_uniform_ellipticity(const KernelSpec& K, int samples,
                                            const Domain& domain) {
  if (samples < 1) throw Error(ErrorKind::Argument, "kernels", "samples must be >= 1");
  const int N = domain.dim();
  const Point lo = domain.bbox_lo(), hi = domain.bbox_hi();
  EllipticityReport rep;
  rep.min_seen = std::numeric_limits<double>::infinity();
  rep.max_seen = -std::numeric_limits<double>::infinity();
  int taken = 0;
  for (std::uint64_t idx = 1; taken < samples && idx < 64ULL * static_cast<std::uint64_t>(samples) + 64;
       ++idx) {
    Point x{lo[0] + (hi[0] - lo[0]) * halton(idx, 2), 0.0};
    if (N == 2) x[1] = lo[1] + (hi[1] - lo[1]) * halton(idx, 3);
    if (!domain.contains(x)) continue;
    Point y{};
    if (N == 1) {
      y[0] = 2.0 * halton(idx, 5) - 1.0;
    } else {
      const double r = std::sqrt(halton(idx, 5)), th = 2.0 * special::kPi * halton(idx, 7);
      y = {r * std::cos(th), r * std::sin(th)};
    }
    if (norm(y) == 0.0 || norm(y) >= 1.0) continue;
    const double v = K.evaluate(x, y);
    if (std::isnan(v) || v < 0.0)
      throw Error(ErrorKind::KernelDefect, "kernels",
                  "kernel '" + K.name + "' returned " + std::to_string(v) + " at |y| = " +
                      std::to_string(norm(y)));
    rep.min_seen = std::min(rep.min_seen, v);
    rep.max_seen = std::max(rep.max_seen, v);
    ++taken;
  }
  if (taken == 0) throw Error(ErrorKind::Diagnostic, "kernels", "no sample fell inside the domain");
  constexpr double eps = 1e-12;
  rep.pass = K.lambda - eps <= rep.min_seen && rep.max_seen <= K.Lambda + eps;
  return rep;
}

double one_regularity_integral(const KernelSpec& K, const Point& z, const Point& w, int N,
                               const QuadratureConfig& cfg) {
  const double wn = norm(w);
  if (!(wn > 0.0)) throw Error(ErrorKind::Argument, "kernels", "|w| must be positive");
  const Point hw = 0.5 * w;
  const Point xp = z + hw, xm = z - hw;
  const Point mhw = -1.0 * hw;
  const double outer = K.range + 0.5 * wn;
  auto term = [&](const Point& x, const Point& v) {
    const double r = norm(v);
    if (r >= K.range) return 0.0;
    return K.evaluate(x, v) / std::pow(r, N);
  };
  const Point origin{};
  auto breaks = [&](const Point&, const Point& dir, std::vector<RayBreak>& out) {
    out.push_back({kRho0, false});
    for (const Point& c : {mhw, hw}) {
      sphere_crossings(origin, dir, c, K.range, false, out);
      for (double b : K.radial_breaks) sphere_crossings(origin, dir, c, b, false, out);
    }
  };
  auto integrand = [&](const Point& xi, double rho, const Point&) {
    const double diff = std::abs(term(xp, xi + hw) - term(xm, xi - hw));
    return diff * ell(rho) * std::pow(rho, N);
  };
  return integrate_polar(origin, N, 2.0 * wn, outer, cfg, breaks, integrand).value;
}

OneRegularityReport check_one_regularity(const KernelSpec& K, std::span<const RegularityPair> pairs,
                                         int N, const QuadratureConfig& cfg) {
  if (pairs.empty()) throw Error(ErrorKind::Argument, "kernels", "no (z, w) pairs given");
  QuadratureConfig fine = cfg;
  fine.n_radial *= 2;
  fine.n_angular *= 2;
  OneRegularityReport rep;
  double hat_fine = 0.0;
  std::vector<std::pair<double, double>> by_scale;
  for (const RegularityPair& p : pairs) {
    const double wn = norm(p.w);
    if (!(wn > 0.0)) throw Error(ErrorKind::Argument, "kernels", "|w| must be positive");
    const double lw = ell(wn);
    const double ratio = one_regularity_integral(K, p.z, p.w, N, cfg) / lw;
    const double ratio_fine = one_regularity_integral(K, p.z, p.w, N, fine) / lw;
    rep.ratios.push_back(ratio);
    rep.Lambda_hat = std::max(rep.Lambda_hat, ratio);
    hat_fine = std::max(hat_fine, ratio_fine);
    by_scale.emplace_back(wn, ratio);
  }
  rep.quadrature_drift =
      rep.Lambda_hat > 0.0 ? std::abs(hat_fine - rep.Lambda_hat) / rep.Lambda_hat : 0.0;
  std::sort(by_scale.begin(), by_scale.end());
  rep.scale_growth = 1.0;
  if (by_scale.size() > 1) {
    double others = 0.0;
    for (std::size_t k = 1; k < by_scale.size(); ++k) others = std::max(others, by_scale[k].second);
    rep.scale_growth = others > 0.0 ? by_scale.front().second / others : 1.0;
  }
  const bool finite = std::isfinite(rep.Lambda_hat);
  rep.pass = finite && rep.quadrature_drift < 0.1 && rep.scale_growth <= 1.1;
  if (!finite)
    rep.diagnostic = "not 1-regular: integral is not finite";
  else if (rep.quadrature_drift >= 0.1)
    rep.diagnostic = "not 1-regular: estimate drifts under quadrature refinement";
  else if (rep.scale_growth > 1.1)
    rep.diagnostic = "not 1-regular: ratio grows as |w| -> 0";
  return rep;
}

MollifiedKernel::MollifiedKernel(KernelSpec base, int index, int dim)
    : base_(std::move(base)), index_(index), dim_(dim) {
  if (index < 1) throw Error(ErrorKind::Argument, "kernels", "mollifier index must be >= 1");
  if (!base_.translation_invariant)
    throw Error(ErrorKind::Unsupported, "kernels", "mollification needs a translation-invariant K");
  if (dim != 1 && dim != 2) throw Error(ErrorKind::Unsupported, "kernels", "N must be 1 or 2");
  eps_ = 0.5 / index;
  double grad = 0.0;
  if (dim == 1) {
    norm_ = 2.0 * unit_integral(bump_profile);
    grad = 2.0 * bump_profile(0.0);
  } else {
    norm_ = 2.0 * special::kPi * unit_integral([](double s) { return bump_profile(s) * s; });
    grad = 2.0 * special::kPi *
           unit_integral([](double s) { return std::abs(bump_derivative(s)) * s; });
  }
  lipschitz_ = base_.Lambda * grad / (norm_ * eps_);
}

double MollifiedKernel::raw(const Point& y) const {
  auto base = [&](const Point& u) {
    const double r = norm(u);
    return r < 1.0 ? base_.evaluate(Point{}, u) : 0.0;
  };
  const GaussLegendre& gl = gauss_legendre(24);
  std::vector<double> cuts;
  if (dim_ == 1) {
    // z in (-eps, eps); base(y - z) changes at y - z in {0, +-1, +-b}.
    cuts = {-eps_, eps_, y[0], y[0] - 1.0, y[0] + 1.0};
    for (double b : base_.radial_breaks) {
      cuts.push_back(y[0] - b);
      cuts.push_back(y[0] + b);
    }
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double a = std::max(cuts[k], -eps_), b = std::min(cuts[k + 1], eps_);
      if (!(b > a)) continue;
      const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
      for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
        const double z = mid + hw * gl.nodes[q];
        sum += hw * gl.weights[q] * bump_profile(std::abs(z) / eps_) * base({y[0] - z, 0.0});
      }
    }
    return sum / (norm_ * eps_);
  }
  QuadratureConfig ang;
  ang.n_angular = 64;
  std::vector<RayBreak> brk;
  double sum = 0.0;
  for (const Direction& d : directions(2, ang)) {
    const Point back = -1.0 * d.unit;
    brk.clear();
    sphere_crossings(y, back, Point{}, 1.0, false, brk);
    for (double b : base_.radial_breaks) sphere_crossings(y, back, Point{}, b, false, brk);
    cuts = {0.0, eps_};
    for (const RayBreak& b : brk)
      if (b.rho < eps_) cuts.push_back(b.rho);
    std::sort(cuts.begin(), cuts.end());
    double ray = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double a = cuts[k], b = cuts[k + 1];
      if (!(b > a)) continue;
      const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
      for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
        const double r = mid + hw * gl.nodes[q];
        ray += hw * gl.weights[q] * r * bump_profile(r / eps_) * base(y - r * d.unit);
      }
    }
    sum += d.weight * ray;
  }
  return sum / (norm_ * eps_ * eps_);
}

double MollifiedKernel::operator()(const Point& y) const {
  const double r = norm(y);
  if (r >= 1.0 + eps_) return 0.0;
  double v = std::clamp(raw(y), 0.0, base_.Lambda);
  if (r < 1.0) v = std::max(v, 0.5 * base_.lambda);
  return v;
}

KernelSpec MollifiedKernel::as_kernel() const {
  auto self = std::make_shared<const MollifiedKernel>(*this);
  KernelSpec k;
  k.name = base_.name + "_mollified_" + std::to_string(index_);
  k.evaluate = [self](const Point&, const Point& y) { return (*self)(y); };
  k.lambda = 0.5 * base_.lambda;
  k.Lambda = base_.Lambda;
  k.differentiable = true;
  k.range = 1.0 + 1.0 / index_;
  k.radial_breaks = {1.0 - eps_, 1.0, 1.0 + eps_};
  return k;
}

MollifiedKernel mollify_kernel(const KernelSpec& K, int i, int dim) {
  return MollifiedKernel(K, i, dim);
}

}  // namespace lognl
