#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "lognl/error.hpp"
#include "lognl/logmod.hpp"
#include "oracles.hpp"

using namespace lognl;

namespace {

SampledFunction line_samples(const std::vector<double>& xs, double (*f)(double)) {
  SampledFunction s;
  for (double x : xs) {
    s.points.push_back({x, 0.0});
    s.values.push_back(f(x));
  }
  return s;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k) v.push_back(a + (b - a) * k / (n - 1));
  return v;
}

double brute_weighted(const SampledFunction& u, double alpha, double beta, const Domain& dom) {
  double best = 0.0;
  for (std::size_t i = 0; i < u.points.size(); ++i)
    for (std::size_t j = i + 1; j < u.points.size(); ++j) {
      const double d = std::min(dom.dist_to_boundary(u.points[i]), dom.dist_to_boundary(u.points[j]));
      const double r = norm(u.points[i] - u.points[j]);
      best = std::max(best, std::pow(oracle::ell(d), alpha + beta) *
                                std::abs(u.values[i] - u.values[j]) /
                                std::pow(oracle::ell(r), alpha));
    }
  return best;
}

}  // namespace

TEST_CASE("ell at reference points") {
  CHECK(ell(0.1, 1.0) == doctest::Approx(1.0 / std::log(10.0)).epsilon(1e-15));
  CHECK(ell(0.5, 1.0) == doctest::Approx(0.4342945).epsilon(1e-7));
  CHECK(ell(std::exp(-10.0), 1.0) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(ell(0.01, 2.0) == doctest::Approx(0.0471529).epsilon(1e-6));
  CHECK(ell(0.3, 0.0) == 1.0);
  CHECK(ell(1e-300, 0.0) == 1.0);
}

TEST_CASE("ell rejects nonpositive radii") {
  CHECK_THROWS_AS(ell(0.0), Error);
  try {
    ell(-1.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
}

TEST_CASE("ell is monotone, flat beyond the cutoff and tends to zero") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lg(-30.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    double a = std::pow(10.0, lg(rng)), b = std::pow(10.0, lg(rng));
    if (a > b) std::swap(a, b);
    for (double alpha : {0.0, 0.3, 1.0, 2.5}) CHECK(ell(a, alpha) <= ell(b, alpha));
    const double top = ell(0.1);
    CHECK(ell(a) > 0.0);
    CHECK(ell(a) <= top);
    if (b >= 0.1) CHECK(ell(b, 0.7) == ell(0.1, 0.7));
  }
  CHECK(ell(1e-300) < 0.0015);
}

TEST_CASE("ell is concave and subadditive on samples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lg(-12.0, 0.5);
  for (int k = 0; k < 2000; ++k) {
    const double a = std::pow(10.0, lg(rng)), b = std::pow(10.0, lg(rng));
    CHECK(ell(0.5 * (a + b)) >= 0.5 * (ell(a) + ell(b)) - 1e-15);
    for (double alpha : {0.25, 0.5, 1.0})
      CHECK(ell(a + b, alpha) <= ell(a, alpha) + ell(b, alpha) + 1e-15);
  }
}

TEST_CASE("Dini integral of l^{1+alpha}") {
  for (double r : {0.09, 0.01, 1e-4}) {
    for (double alpha : {0.25, 0.5, 1.0}) {
      // rho = exp(-e^tau), so d rho / rho = -e^tau d tau; the range beyond
      // s = e^tau = 700 is added in closed form.
      const double s0 = std::abs(std::log(r)), s1 = 700.0;
      const double body = oracle::simpson(
          [&](double tau) { return std::exp(tau) * ell(std::exp(-std::exp(tau)), 1.0 + alpha); },
          std::log(s0), std::log(s1), 20000);
      const double tail = std::pow(s1, -alpha) / alpha;
      CHECK(body + tail == doctest::Approx(ell(r, alpha) / alpha).epsilon(1e-6));
    }
  }
}

TEST_CASE("global seminorm examples") {
  SampledFunction c;
  for (double x : {0.0, 0.1, 0.5}) {
    c.points.push_back({x, 0.0});
    c.values.push_back(2.0);
  }
  CHECK(seminorm_global(c, 0.5).value == 0.0);

  SampledFunction s;
  s.points = {{0.0, 0.0}, {0.3, 0.0}, {0.7, 0.0}};
  s.values = {1.0, 4.0, 2.0};
  CHECK(seminorm_global(s, 0.0).value == doctest::Approx(3.0));

  const auto xs = linspace(-0.5, 0.5, 201);
  const auto u = line_samples(xs, [](double x) { return x == 0.0 ? 0.0 : std::sqrt(oracle::ell(std::abs(x))); });
  double brute = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      brute = std::max(brute, std::abs(u.values[i] - u.values[j]) /
                                  std::sqrt(oracle::ell(std::abs(xs[i] - xs[j]))));
  const PairSup g = seminorm_global(u, 0.5);
  CHECK(g.exhaustive);
  CHECK(g.value == doctest::Approx(brute).epsilon(1e-14));
  CHECK(g.value == doctest::Approx(1.0).epsilon(1e-12));

  SampledFunction one;
  one.points = {{0.0, 0.0}};
  one.values = {1.0};
  CHECK_THROWS_AS(seminorm_global(one, 0.5), Error);
}

TEST_CASE("global seminorm switches to subsampling above the pair limit") {
  SampledFunction u;
  for (std::size_t k = 0; k < kExhaustivePairLimit + 10; ++k) {
    const double x = -1.0 + 2.0 * static_cast<double>(k) / (kExhaustivePairLimit + 9);
    u.points.push_back({x, 0.0});
    u.values.push_back(x);
  }
  const PairSup a = seminorm_global(u, 0.0);
  const PairSup b = seminorm_global(u, 0.0);
  CHECK_FALSE(a.exhaustive);
  CHECK(a.pairs == kSampledPairs);
  CHECK(a.value == b.value);
  CHECK(a.value <= 2.0);
  CHECK(a.value > 1.9);
}

TEST_CASE("seminorm triangle inequality") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    SampledFunction u, v, w;
    for (int k = 0; k < 40; ++k) {
      const Point p{U(rng), 0.0};
      const double a = U(rng), b = U(rng);
      u.points.push_back(p);
      v.points.push_back(p);
      w.points.push_back(p);
      u.values.push_back(a);
      v.values.push_back(b);
      w.values.push_back(a + b);
    }
    CHECK(seminorm_global(w, 0.5).value <=
          seminorm_global(u, 0.5).value + seminorm_global(v, 0.5).value + 1e-14);
  }
}

TEST_CASE("weighted seminorm examples") {
  const Domain dom = Domain::interval(-1.0, 1.0);
  const auto xs = linspace(-0.95, 0.95, 39);
  const auto u = line_samples(xs, [](double x) { return std::sin(3.0 * x); });
  const SeminormSpec s0{0.5, 0.0, dom};
  const double w0 = seminorm_weighted(u, s0).value;
  CHECK(w0 <= seminorm_global(u, 0.5).value + 1e-14);
  CHECK(w0 == doctest::Approx(brute_weighted(u, 0.5, 0.0, dom)).epsilon(1e-14));

  SampledFunction c = u;
  for (double& v : c.values) v = 5.0;
  CHECK(seminorm_weighted(c, {0.3, 1.0, dom}).value == 0.0);

  const double beta = 0.7;
  SampledFunction g;
  for (double x : xs) {
    g.points.push_back({x, 0.0});
    g.values.push_back(std::pow(oracle::ell(dom.dist_to_boundary({x, 0.0})), -beta));
  }
  CHECK(seminorm_weighted(g, {0.0, beta, dom}).value ==
        doctest::Approx(brute_weighted(g, 0.0, beta, dom)).epsilon(1e-14));

  SampledFunction out = u;
  out.points[0] = {1.5, 0.0};
  CHECK_THROWS_AS(seminorm_weighted(out, s0), Error);
}

TEST_CASE("norm_X") {
  const Domain dom = Domain::interval(-0.5, 0.5);
  const double alpha = 0.5;
  SampledFunction inner, global;
  for (double x : linspace(-0.45, 0.45, 19)) {
    const double v = std::sqrt(oracle::ell(dom.dist_to_boundary({x, 0.0})));
    inner.points.push_back({x, 0.0});
    inner.values.push_back(v);
    global.points.push_back({x, 0.0});
    global.values.push_back(v);
  }
  for (double x : {-0.9, -0.6, 0.6, 0.9}) {
    global.points.push_back({x, 0.0});
    global.values.push_back(0.0);
  }
  const double nx = norm_X(inner, global, alpha, dom);
  const double expect = seminorm_global(global, alpha).value +
                        brute_weighted(inner, 1.0 + alpha, 0.0, dom);
  CHECK(std::isfinite(nx));
  CHECK(nx == doctest::Approx(expect).epsilon(1e-13));

  SampledFunction zi = inner, zg = global;
  for (double& v : zi.values) v = 0.0;
  for (double& v : zg.values) v = 0.0;
  CHECK(norm_X(zi, zg, alpha, dom) == 0.0);

  global.values.back() = 1e-3;
  try {
    norm_X(inner, global, alpha, dom);
    FAIL("nonzero exterior value accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Contract);
  }
}

TEST_CASE("norm_Y") {
  const Domain dom = Domain::interval(-1.0, 1.0);
  const auto xs = linspace(-0.9, 0.9, 19);
  CHECK(norm_Y(line_samples(xs, [](double) { return 1.0; }), dom) == doctest::Approx(1.0));
  CHECK(norm_Y(line_samples(xs, [](double) { return 0.0; }), dom) == 0.0);
  const auto f = line_samples(xs, [](double x) { return x; });
  double q = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const double d = std::min(1.0 - std::abs(xs[i]), 1.0 - std::abs(xs[j]));
      q = std::max(q, oracle::ell(d) * oracle::ell(d) * std::abs(xs[i] - xs[j]) /
                          oracle::ell(std::abs(xs[i] - xs[j])));
    }
  CHECK(norm_Y(f, dom) == doctest::Approx(0.9 + q).epsilon(1e-13));
  CHECK_THROWS_AS(norm_Y(SampledFunction{}, dom), Error);
}

TEST_CASE("fit_exponent recovers generators") {
  std::vector<double> r;
  for (double x = 0.05; x > 1e-12; x *= 0.1) r.push_back(x);
  for (double g : {0.25, 0.5, 1.0, 1.5}) {
    std::vector<double> osc;
    for (double x : r) osc.push_back(std::pow(oracle::ell(x), g));
    CHECK(fit_exponent(r, osc) == doctest::Approx(g).epsilon(1e-9));
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> osc;
    for (double x : r) osc.push_back(std::sqrt(oracle::ell(x)) * (1.0 + 0.05 * noise(rng)));
    CHECK(std::abs(fit_exponent(r, osc) - 0.5) <= 0.05);
  }
}

TEST_CASE("fit_exponent filtering and errors") {
  const std::vector<double> r{0.05, 0.01, 1e-3, 1e-4};
  std::vector<double> osc;
  for (double x : r) osc.push_back(oracle::ell(x));
  osc[1] = 0.0;
  CHECK(fit_exponent(r, osc) == doctest::Approx(1.0).epsilon(1e-9));
  osc[2] = -1.0;
  try {
    fit_exponent(r, osc);
    FAIL("fit with two points accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Fit);
  }
  const std::vector<double> bad{0.5, 0.01, 1e-3};
  CHECK_THROWS_AS(fit_exponent(bad, std::vector<double>{1.0, 0.5, 0.3}), Error);
}

TEST_CASE("second-order exponent") {
  const Point c{0.0, 0.0};
  std::vector<double> eps;
  const double h = 1.0 / 4096;
  for (double e = h; e < 0.05; e *= 2.0) eps.push_back(e);
  const auto grid = build_grid(Domain::interval(-0.5, 0.5), h);

  auto sample = [&](auto f) {
    std::vector<double> v;
    for (const Point& p : grid->nodes()) v.push_back(f(p[0]));
    return GridFunction(grid, v);
  };

  const auto quad = fit_second_order_exponent(sample([](double x) { return 3.0 * x * x + x; }), c, eps);
  CHECK(quad.status == SecondOrderFit::Status::Smoother);
  CHECK(quad.gamma == kMaxSecondOrderExponent);
  for (std::size_t k = 0; k < eps.size(); ++k)
    CHECK(quad.sup_second_difference[k] == doctest::Approx(6.0 * eps[k] * eps[k]).epsilon(1e-6));

  const auto flat = fit_second_order_exponent(sample([](double) { return 2.0; }), c, eps);
  CHECK(flat.status == SecondOrderFit::Status::Flat);

  const auto prof = fit_second_order_exponent(
      sample([](double x) { return x == 0.0 ? 0.0 : std::pow(oracle::ell(std::abs(x)), 1.3); }), c,
      eps);
  CHECK(prof.status == SecondOrderFit::Status::Fitted);
  CHECK(prof.gamma == doctest::Approx(1.3).epsilon(0.1 / 1.3));

  const std::vector<double> too_big{0.01, 0.1, 0.6};
  CHECK_THROWS_AS(fit_second_order_exponent(sample([](double x) { return x; }), c, too_big), Error);
}

TEST_CASE("semi-homogeneity") {
  std::vector<double> rs;
  for (int k = 0; k <= 12; ++k) rs.push_back(std::pow(10.0, -k));
  const std::vector<double> one{1.0};
  const auto row = check_semi_homogeneity(one, rs);
  CHECK(row.c_hat == doctest::Approx(1.0 / std::log(10.0)).epsilon(1e-14));

  for (double r : {0.05, 1e-3, 1e-6}) {
    const std::vector<double> lr{r};
    const auto d = check_semi_homogeneity(lr, lr);
    CHECK(d.c_hat == doctest::Approx(2.0 * oracle::ell(r)).epsilon(1e-12));
  }

  const auto full = check_semi_homogeneity(rs, rs);
  double brute = 0.0;
  for (double a : rs)
    for (double r : rs) brute = std::max(brute, oracle::ell(a) * oracle::ell(r) / oracle::ell(a * r));
  CHECK(full.holds);
  CHECK(full.c_hat == doctest::Approx(brute).epsilon(1e-13));
  CHECK(full.lower_display_holds);
  CHECK(full.upper_display_holds);

  const std::vector<double> bad{1.0, 0.0};
  CHECK_THROWS_AS(check_semi_homogeneity(bad, rs), Error);
}

TEST_CASE("norm equivalence over balls") {
  const Domain dom = Domain::interval(-0.5, 0.5);
  const SeminormSpec spec{0.5, 0.5, dom};
  auto profile = [&](int n) {
    SampledFunction u;
    for (double x : linspace(-0.49, 0.49, n)) {
      u.points.push_back({x, 0.0});
      u.values.push_back(std::sqrt(oracle::ell(dom.dist_to_boundary({x, 0.0}))));
    }
    return u;
  };
  SampledFunction c = profile(50);
  for (double& v : c.values) v = 1.0;
  const auto rc = norm_equivalence_check(c, spec, 0.2, 2.0);
  CHECK(std::isfinite(rc.lower_ratio));
  CHECK(rc.lower_ratio > 0.0);
  CHECK(std::isfinite(rc.upper_ratio));

  const auto coarse = norm_equivalence_check(profile(99), spec, 0.2, 2.0);
  const auto fine = norm_equivalence_check(profile(197), spec, 0.2, 2.0);
  for (const auto& r : {coarse, fine}) {
    CHECK(r.lower_ratio > 0.1);
    CHECK(r.upper_ratio > 0.1);
    CHECK(r.upper_ratio < 10.0);
  }
  CHECK(fine.lower_ratio / coarse.lower_ratio == doctest::Approx(1.0).epsilon(0.25));

  try {
    norm_equivalence_check(profile(20), spec, 0.01, 2.0);
    FAIL("sample spacing larger than every admissible ball accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Diagnostic);
  }
}
