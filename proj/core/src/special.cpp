#include "lognl/special.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "lognl/error.hpp"

namespace lognl::special {

namespace {

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

double gamma(double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::Domain, "special", "gamma implemented for x > 0");
  if (x < 0.5) return kPi / (std::sin(kPi * x) * gamma(1.0 - x));
  x -= 1.0;
  double a = kLanczos[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[static_cast<std::size_t>(i)] / (x + i);
  return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double digamma(double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::Domain, "special", "digamma implemented for x > 0");
  double shift = 0.0;
  while (x < 6.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  // Bernoulli terms B_2k / (2k x^2k), k = 1..7.
  const double tail =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 -
                                      inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12))))));
  return shift + std::log(x) - 0.5 / x - tail;
}

double bessel_k(double nu, double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::Domain, "special", "bessel_k requires x > 0");
  nu = std::abs(nu);
  // Truncate where exp(-x (cosh t - 1)) cosh(nu t) drops below ~1e-19.
  double t_max = 1.0;
  for (int it = 0; it < 4; ++it) t_max = std::acosh(1.0 + (44.0 + nu * t_max) / x);
  const double h = std::min(0.1, 0.5 / std::sqrt(x));
  double sum = 0.5;  // t = 0 term, scaled by exp(x)
  for (double t = h; t <= t_max + h; t += h)
    sum += std::exp(-x * (std::cosh(t) - 1.0)) * std::cosh(nu * t);
  return h * sum * std::exp(-x);
}

double bessel_k1_series(double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::Domain, "special", "bessel_k1_series requires x > 0");
  const double q = 0.25 * x * x;
  double term = 1.0;  // (x^2/4)^k / (k! (k+1)!)
  double harmonic_k = 0.0, harmonic_k1 = 1.0;
  double i1_sum = 0.0, psi_sum = 0.0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      term *= q / (static_cast<double>(k) * static_cast<double>(k + 1));
      harmonic_k += 1.0 / k;
      harmonic_k1 += 1.0 / (k + 1);
    }
    i1_sum += term;
    psi_sum += (harmonic_k + harmonic_k1 - 2.0 * kEulerGamma) * term;
    if (term < 1e-18 * i1_sum) break;
  }
  const double i1 = 0.5 * x * i1_sum;
  return 1.0 / x + std::log(0.5 * x) * i1 - 0.25 * x * psi_sum;
}

}  // namespace lognl::special
