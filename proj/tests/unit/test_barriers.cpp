#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "lognl/barriers.hpp"
#include "lognl/error.hpp"
#include "oracles.hpp"

using namespace lognl;

namespace {

QuadratureConfig oracle_cfg() {
  QuadratureConfig c;
  c.mode = QuadMode::Oracle;
  return c;
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

std::vector<Point> dense_points(double R, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-R, R);
  std::vector<Point> p;
  for (int k = 0; k < count; ++k) p.push_back({U(rng), U(rng)});
  return p;
}

}  // namespace

TEST_CASE("bump profile") {
  CHECK(bump_profile(0.0) == 1.0);
  CHECK(bump_profile(0.5) == 1.0);
  CHECK(bump_profile(1.0) == 0.0);
  CHECK(bump_profile(1.5) == 0.0);
  double prev = 1.0;
  for (double s = 0.5; s < 1.0; s += 0.001) {
    const double v = bump_profile(s);
    CHECK(v <= prev);
    CHECK(v > 0.0);
    prev = v;
  }
}

TEST_CASE("barrier fields satisfy their structural invariants") {
  const double r = 0.05, rho = 0.05, a = 0.3;
  const FieldFunction phi = boundary_barrier(r, a);
  const FieldFunction beta = bump_field(r);
  const FieldFunction t = tail_field(rho, a);
  const FieldFunction chi = shell_indicator(0.01, 0.03);
  for (const Point& x : dense_points(0.2, 4000, 1)) {
    const double n = norm(x);
    if (n <= r) CHECK(phi(x) == 0.0);
    else CHECK(phi(x) == doctest::Approx(std::pow(oracle::ell(n - r), a)));
    CHECK(beta(x) >= 0.0);
    CHECK(beta(x) <= 1.0);
    if (n <= 0.5 * r) CHECK(beta(x) == 1.0);
    if (n >= r) CHECK(beta(x) == 0.0);
    CHECK(t(x) >= 0.0);
    if (n <= rho) CHECK(t(x) == 0.0);
    CHECK(chi(x) == ((n > 0.01 && n <= 0.03) ? 1.0 : 0.0));
  }
  CHECK(beta.support_radius <= r);
  const FieldFunction e = exponential_field(0.7, 1);
  CHECK(e({0.3, -0.5}) == doctest::Approx(std::exp(0.35)));
}

TEST_CASE("linear combination of fields") {
  const FieldFunction c = linear_combination({{2.0, bump_field(0.1)}, {-1.0, shell_indicator(0.2, 0.3)}});
  CHECK(c({0.0, 0.0}) == 2.0);
  CHECK(c({0.25, 0.0}) == -1.0);
  CHECK(c({0.5, 0.0}) == 0.0);
}

TEST_CASE("shell measure") {
  // mu(dx) = l(|x|) |x|^{-N} dx; for b <= 0.1 the radial primitive is -omega_N ln|ln t|.
  for (int N : {1, 2}) {
    const double omega = N == 1 ? 2.0 : 2.0 * oracle::kPi;
    const double a = 0.0075, b = 0.05;
    const double exact = omega * std::log(std::log(1.0 / a) / std::log(1.0 / b));
    CHECK(shell_measure(a, b, N) == doctest::Approx(exact).epsilon(1e-10));
    const double brute = omega * oracle::simpson([](double s) { return oracle::ell(std::exp(s)); },
                                                 std::log(a), std::log(b), 2000);
    CHECK(shell_measure(a, b, N) == doctest::Approx(brute).epsilon(1e-9));
  }
  // Across the plateau of l at 0.1.
  const double m = shell_measure(0.05, 0.5, 1);
  const double brute = 2.0 * oracle::simpson([](double s) { return oracle::ell(std::exp(s)); },
                                             std::log(0.05), std::log(0.1), 2000) +
                       2.0 * oracle::simpson([](double s) { return oracle::ell(std::exp(s)); },
                                             std::log(0.1), std::log(0.5), 2000);
  CHECK(m == doctest::Approx(brute).epsilon(1e-9));
}

TEST_CASE("half-measure gain shell") {
  const double rho = 0.05;
  for (int N : {1, 2}) {
    const double omega = N == 1 ? 2.0 : 2.0 * oracle::kPi;
    const double full = shell_measure(3.0 * rho * rho, rho, N);
    const Shell A = gain_shell(rho, 0.5, N);
    CHECK(A.outer == rho);
    CHECK(A.inner > 3.0 * rho * rho);
    CHECK(A.measure == doctest::Approx(0.5 * full).epsilon(1e-10));
    CHECK(shell_measure(A.inner, A.outer, N) == doctest::Approx(A.measure).epsilon(1e-10));
    // The half measure, (omega/2) ln(|ln 3 rho^2| / |ln rho|), stays below omega ln2 / 2
    // for every rho < 1/3 and increases toward it as rho -> 0.
    const double limit = 0.5 * omega * std::log(2.0);
    double prev = 0.0;
    for (double r : {0.05, 5e-3, 5e-5, 5e-9, 5e-17}) {
      const double half = 0.5 * shell_measure(3.0 * r * r, r, N);
      CHECK(half == doctest::Approx(0.5 * omega * std::log(std::log(1.0 / (3.0 * r * r)) / std::log(1.0 / r))).epsilon(1e-9));
      CHECK(half < limit);
      CHECK(half > prev);
      prev = half;
    }
    CHECK(prev > 0.97 * limit);
  }
  CHECK(gain_shell(0.05, 1.0, 1).inner == doctest::Approx(3.0 * 0.05 * 0.05));
  CHECK_THROWS_AS(gain_shell(0.05, 0.0, 1), Error);
  CHECK_THROWS_AS(gain_shell(0.5, 0.5, 1), Error);
}

TEST_CASE("stability band") {
  const std::vector<double> ok{1.0, 1.3, 1.6};
  CHECK(stable_within(ok, 0.25));
  const std::vector<double> bad{1.0, 1.7};
  CHECK_FALSE(stable_within(bad, 0.25));
  const std::vector<double> neg{-1.0, 1.0};
  CHECK_FALSE(stable_within(neg, 0.25));
}

TEST_CASE("radial samples") {
  const auto pts = radial_samples(0.1, 0.2, kBarrierSamples, 2);
  CHECK(pts.size() == static_cast<std::size_t>(kBarrierSamples));
  for (const Point& p : pts) {
    CHECK(norm(p) >= 0.1);
    CHECK(norm(p) < 0.2);
  }
  for (const Point& p : radial_samples(0.0, 0.2, 16, 1, true)) {
    CHECK(p[0] >= 0.0);
    CHECK(p[1] == 0.0);
  }
  CHECK(radial_samples(0.0, 0.2, 16, 1, true).front() == Point{0.0, 0.0});
  const auto again = radial_samples(0.1, 0.2, kBarrierSamples, 2);
  CHECK(again == pts);
}

TEST_CASE("boundary barrier") {
  const QuadratureConfig cfg;
  const std::vector<double> alphas{0.05, 0.1, 0.2};
  const auto rep = verify_boundary_barrier(unit_kernel(), 0.05, alphas, 1, cfg);
  CHECK(rep.pass);
  CHECK(rep.alpha_star > 0.0);
  CHECK(rep.delta_hat > 0.0);
  for (std::size_t k = 1; k < rep.delta.size(); ++k) CHECK(rep.delta[k] <= rep.delta[k - 1]);
  const auto orc = verify_boundary_barrier(unit_kernel(), 0.05, alphas, 1, oracle_cfg());
  for (std::size_t k = 0; k < rep.delta.size(); ++k) CHECK(close_rel(rep.delta[k], orc.delta[k], 1e-4));

  const std::vector<double> steep{0.999};
  const auto fail = verify_boundary_barrier(unit_kernel(), 0.001, steep, 1, cfg);
  CHECK_FALSE(fail.pass);
  CHECK(fail.delta[0] <= 0.0);
  CHECK_FALSE(fail.diagnostic.empty());

  CHECK(verify_boundary_barrier(sinlog_kernel(), 0.05, alphas, 2, cfg).pass);
  CHECK_THROWS_AS(verify_boundary_barrier(unit_kernel(), 0.2, alphas, 1, cfg), Error);
}

TEST_CASE("bump") {
  const QuadratureConfig cfg;
  const std::vector<double> radii{0.05, 0.005, 0.0005};
  const auto rep = verify_bump(unit_kernel(), radii, 1, cfg);
  CHECK(rep.pass);
  CHECK(rep.stable);
  CHECK(std::isfinite(rep.C_hat));
  const auto orc = verify_bump(unit_kernel(), radii, 1, oracle_cfg());
  for (std::size_t k = 0; k < radii.size(); ++k) CHECK(close_rel(rep.constants[k], orc.constants[k], 1e-4));

  // Centre value is positive and grows like |ln r|.
  std::vector<double> centre;
  for (double r : radii) {
    const double v = eval_LK(unit_kernel(), bump_field(r), {0.0, 0.0}, 1, cfg).value;
    CHECK(v > 0.0);
    centre.push_back(v * oracle::ell(r));
  }
  CHECK(stable_within(centre, 0.25));
  CHECK(verify_bump(sinlog_kernel(), radii, 2, cfg).stable);
}

TEST_CASE("gain") {
  const QuadratureConfig cfg;
  const std::vector<double> rhos{0.05, 0.005};
  const auto rep = verify_gain(unit_kernel(), rhos, 1.0, 1, cfg);
  CHECK(rep.pass);
  for (double c : rep.constants) CHECK(c > 0.0);
  const auto orc = verify_gain(unit_kernel(), rhos, 1.0, 1, oracle_cfg());
  for (std::size_t k = 0; k < rhos.size(); ++k) CHECK(close_rel(rep.constants[k], orc.constants[k], 1e-4));
  CHECK(verify_gain(sinlog_kernel(), rhos, 0.5, 2, cfg).pass);
  CHECK(eval_LK(unit_kernel(), shell_indicator(0.2, 0.2), {0.0, 0.0}, 1, cfg).value == 0.0);
  CHECK_THROWS_AS(verify_gain(unit_kernel(), rhos, 0.0, 1, cfg), Error);
}

TEST_CASE("tail") {
  const QuadratureConfig cfg;
  const std::vector<double> rhos{0.05, 0.02};
  const auto rep = verify_tail(unit_kernel(), rhos, 0.25, 1, cfg);
  for (double c : rep.constants) {
    CHECK(std::isfinite(c));
    CHECK(c > 0.0);
  }
  const auto orc = verify_tail(unit_kernel(), rhos, 0.25, 1, oracle_cfg());
  for (std::size_t k = 0; k < rhos.size(); ++k) CHECK(close_rel(rep.constants[k], orc.constants[k], 1e-4));
  // Touching the zero function from below inside B_rho.
  for (const Point& x : radial_samples(0.0, 0.05, 16, 1, true))
    CHECK(eval_LK(unit_kernel(), tail_field(0.05, 0.25), x, 1, cfg).value <= 0.0);
  CHECK_THROWS_AS(verify_tail(unit_kernel(), rhos, 0.6, 1, cfg), Error);
}

TEST_CASE("exponential barrier") {
  const QuadratureConfig cfg;
  const std::vector<double> alphas{0.0, 0.5, 1.0, 2.0};
  const auto rep = verify_exponential(unit_kernel(), alphas, 1.0, 1, cfg);
  CHECK(rep.sup_scaled[0] == 0.0);
  CHECK(rep.sup_scaled[2] == doctest::Approx(oracle::exponential_barrier_unit()).epsilon(1e-8));
  CHECK(oracle::exponential_barrier_unit() == doctest::Approx(-0.5213025).epsilon(1e-7));
  for (std::size_t k = 1; k < alphas.size(); ++k) CHECK(rep.sup_scaled[k] < rep.sup_scaled[k - 1]);
  CHECK(rep.pass);
  CHECK(rep.alpha_star == 0.5);
  CHECK(rep.c0_hat == doctest::Approx(-rep.sup_scaled[1]));
  const auto orc = verify_exponential(unit_kernel(), alphas, 1.0, 1, oracle_cfg());
  for (std::size_t k = 1; k < alphas.size(); ++k) CHECK(close_rel(rep.sup_scaled[k], orc.sup_scaled[k], 1e-4));

  const std::vector<double> zero{0.0};
  const auto none = verify_exponential(unit_kernel(), zero, 1.0, 1, cfg);
  CHECK_FALSE(none.pass);
  CHECK_FALSE(none.diagnostic.empty());
}

TEST_CASE("sector bound") {
  const QuadratureConfig cfg;
  const std::vector<double> d{0.005, 0.001, 0.0001};
  const auto one = verify_sector(0.1, d, 1, cfg);
  CHECK(one.pass);
  CHECK(one.values[0] == doctest::Approx(std::log(41.0)).epsilon(1e-10));
  const auto two = verify_sector(0.1, d, 2, cfg);
  CHECK(two.pass);
  CHECK(two.c_hat >= 0.1);
  const auto orc = verify_sector(0.1, d, 2, oracle_cfg());
  for (std::size_t k = 0; k < d.size(); ++k) CHECK(close_rel(two.values[k], orc.values[k], 1e-4));
}

TEST_CASE("composite barrier") {
  const QuadratureConfig cfg;
  const auto rep = verify_composite(unit_kernel(), 0.05, 0.05, 1, cfg);
  CHECK(rep.pass);
  CHECK(rep.delta_hat > 0.0);
  CHECK(rep.delta == doctest::Approx(0.5 * rep.delta_hat));
  CHECK(rep.max_scaled <= -rep.delta);
  CHECK(rep.shell.outer == 0.05);
  const FieldFunction phi = composite_barrier(0.05, 0.05, rep.shell);
  // At the centre only the bump term survives.
  const double top = std::pow(oracle::ell(0.05), 0.05) - std::pow(oracle::ell(0.0025), 0.05);
  CHECK(phi({0.0, 0.0}) == doctest::Approx(top).epsilon(1e-12));
  CHECK(verify_composite(sinlog_kernel(), 0.05, 0.05, 2, cfg).pass);
}
