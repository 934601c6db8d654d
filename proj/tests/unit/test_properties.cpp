// Randomized invariants across modules. Every case draws from a fixed seed.

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "lognl/barriers.hpp"
#include "lognl/logmod.hpp"
#include "lognl/solver.hpp"
#include "oracles.hpp"

using namespace lognl;

namespace {

std::mt19937_64& rng() {
  static std::mt19937_64 g(20240611);
  return g;
}

double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

Domain random_domain() {
  switch (std::uniform_int_distribution<int>(0, 3)(rng())) {
    case 0: {
      const double a = uniform(-0.3, -0.1);
      return Domain::interval(a, a + uniform(0.2, 0.5));
    }
    case 1: return Domain::ball({uniform(-0.1, 0.1), 0.0}, uniform(0.1, 0.25), 1);
    case 2: return Domain::ball({uniform(-0.1, 0.1), uniform(-0.1, 0.1)}, uniform(0.15, 0.25), 2);
    default: return Domain::box({-uniform(0.1, 0.2), -uniform(0.1, 0.2)}, {uniform(0.1, 0.2), uniform(0.1, 0.2)}, 2);
  }
}

FieldFunction random_smooth_field() {
  const double a = uniform(-1.0, 1.0), b = uniform(-1.0, 1.0), s = uniform(0.1, 0.6);
  const Point c{uniform(-0.2, 0.2), uniform(-0.2, 0.2)};
  FieldFunction f;
  f.name = "random";
  f.evaluate = [=](const Point& y) {
    const Point z = y - c;
    return a * std::exp(-dot(z, z) / (2.0 * s * s)) + b * std::sin(3.0 * y[0] + y[1]);
  };
  return f;
}

}  // namespace

TEST_CASE("modulus: monotone, subadditive, semi-homogeneous upper bound") {
  for (int k = 0; k < 5000; ++k) {
    const double a = std::exp(uniform(-40.0, 1.0)), b = std::exp(uniform(-40.0, 1.0));
    CHECK(ell(std::max(a, b)) >= ell(std::min(a, b)));
    CHECK(ell(a + b) <= ell(a) + ell(b) + 1e-15);
    const double lam = std::exp(uniform(-30.0, 0.0));
    // l(lambda r) <= l(r) for lambda <= 1.
    CHECK(ell(lam * a) <= ell(a) + 1e-15);
  }
}

TEST_CASE("seminorm: triangle inequality and scaling") {
  for (int trial = 0; trial < 20; ++trial) {
    SampledFunction u, v, w;
    u.dim = v.dim = w.dim = 2;
    const int n = 120;
    for (int k = 0; k < n; ++k) {
      const Point p{uniform(-0.5, 0.5), uniform(-0.5, 0.5)};
      const double a = std::sin(7.0 * p[0]) * p[1], b = std::abs(p[0]) - p[1] * p[1];
      u.points.push_back(p);
      v.points.push_back(p);
      w.points.push_back(p);
      u.values.push_back(a);
      v.values.push_back(b);
      w.values.push_back(a + b);
    }
    const double alpha = uniform(0.0, 1.5);
    const double su = seminorm_global(u, alpha).value, sv = seminorm_global(v, alpha).value;
    CHECK(seminorm_global(w, alpha).value <= su + sv + 1e-12);
    SampledFunction s3 = u;
    for (double& x : s3.values) x *= -3.0;
    CHECK(seminorm_global(s3, alpha).value == doctest::Approx(3.0 * su).epsilon(1e-13));
  }
}

TEST_CASE("interpolation stays within the stencil range") {
  for (int trial = 0; trial < 20; ++trial) {
    const Domain d = random_domain();
    const auto g = build_grid(d, d.diameter() / 12.0);
    std::vector<double> v;
    for (std::size_t i = 0; i < g->size(); ++i) v.push_back(uniform(-1.0, 1.0));
    const GridFunction u(g, v);
    std::array<StencilEntry, 4> st{};
    for (int k = 0; k < 200; ++k) {
      const Point y{uniform(-0.5, 0.5), d.dim() == 2 ? uniform(-0.5, 0.5) : 0.0};
      const int n = g->stencil(y, st);
      double lo = 0.0, hi = 0.0, wsum = 0.0;
      for (int e = 0; e < n; ++e) {
        lo = std::min(lo, v[static_cast<std::size_t>(st[e].node)]);
        hi = std::max(hi, v[static_cast<std::size_t>(st[e].node)]);
        wsum += st[e].weight;
      }
      CHECK(wsum <= 1.0 + 1e-12);
      const double val = u.interpolate(y);
      CHECK(val >= lo - 1e-12);
      CHECK(val <= hi + 1e-12);
    }
  }
}

TEST_CASE("L_K is linear and annihilates constants for random kernels and points") {
  const QuadratureConfig cfg;
  for (int trial = 0; trial < 30; ++trial) {
    const int N = trial % 2 + 1;
    const KernelSpec K = make_kernel(trial % 3 == 0 ? "unit" : (trial % 3 == 1 ? "sinlog" : "schrodinger"), N);
    const FieldFunction f = random_smooth_field(), g = random_smooth_field();
    const double a = uniform(-2.0, 2.0);
    FieldFunction h;
    h.name = "combo";
    h.evaluate = [&](const Point& y) { return f(y) + a * g(y) + 5.0; };
    const Point x{uniform(-0.3, 0.3), N == 2 ? uniform(-0.3, 0.3) : 0.0};
    const double lhs = eval_LK(K, h, x, N, cfg).value;
    const double rhs = eval_LK(K, f, x, N, cfg).value + a * eval_LK(K, g, x, N, cfg).value;
    CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("discrete maximum principle on random domains and nonnegative data") {
  const QuadratureConfig cfg;
  for (int trial = 0; trial < 8; ++trial) {
    const Domain d = random_domain();
    const double h = d.diameter() / (d.dim() == 1 ? 40.0 : 10.0);
    const double s = uniform(0.05, 0.3);
    FieldFunction f;
    f.name = "bump-rhs";
    f.evaluate = [=](const Point& y) { return std::exp(-dot(y, y) / (2.0 * s * s)); };
    const ProblemSpec p = ProblemSpec::generic(trial % 2 ? sinlog_kernel() : unit_kernel(), d, f);
    const Solution sol = solve_dirichlet(p, build_grid(d, h), cfg);
    REQUIRE(sol.report.alternative == Alternative::UniqueSolution);
    CHECK(sol.report.mp_audit.applicable);
    CHECK(sol.report.mp_audit.pass);
    for (double v : sol.u->values()) CHECK(v >= -sol.report.mp_audit.tolerance);
  }
}

TEST_CASE("solve inverts assemble on random nodal vectors") {
  const QuadratureConfig cfg;
  for (int trial = 0; trial < 6; ++trial) {
    const Domain d = random_domain();
    const auto g = build_grid(d, d.diameter() / (d.dim() == 1 ? 30.0 : 8.0));
    ProblemSpec p = ProblemSpec::generic(sinlog_kernel(), d, constant_field(1.0));
    if (trial % 3 == 1 && d.shape() != Shape::Box) p = ProblemSpec::schrodinger(d, constant_field(1.0));
    const StiffnessMatrix A = assemble(p, g, cfg);
    Eigen::VectorXd v(static_cast<Eigen::Index>(g->size()));
    for (auto& x : v) x = uniform(-1.0, 1.0);
    const Eigen::VectorXd f = A.A * v;
    const Solution s = solve_system(A, std::span<const double>(f.data(), static_cast<std::size_t>(f.size())));
    for (std::size_t i = 0; i < g->size(); ++i)
      CHECK(std::abs((*s.u)[i] - v[static_cast<Eigen::Index>(i)]) <= 1e-9);
  }
}

TEST_CASE("mollified kernels are bounded for random indices") {
  for (int trial = 0; trial < 10; ++trial) {
    const int i = std::uniform_int_distribution<int>(1, 60)(rng());
    const int dim = trial % 2 + 1;
    const MollifiedKernel Ki = mollify_kernel(sinlog_kernel(), i, dim);
    for (int k = 0; k < 100; ++k) {
      const double r = uniform(0.0, 1.2), t = uniform(0.0, 2.0 * oracle::kPi);
      const Point y = dim == 1 ? Point{r, 0.0} : Point{r * std::cos(t), r * std::sin(t)};
      const double v = Ki(y);
      CHECK(v >= 0.0);
      CHECK(v <= 1.5 + 1e-12);
      if (r < 1.0) CHECK(v >= 0.25 - 1e-12);
      if (r > Ki.support_radius()) CHECK(v == 0.0);
    }
  }
}

TEST_CASE("stability band is scale invariant") {
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(3);
    for (double& x : v) x = uniform(0.5, 2.0);
    const double tol = uniform(0.05, 0.5);
    const bool base = stable_within(v, tol);
    std::vector<double> w = v;
    const double c = std::exp(uniform(-5.0, 5.0));
    for (double& x : w) x *= c;
    CHECK(stable_within(w, tol) == base);
  }
}
