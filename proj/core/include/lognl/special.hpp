#pragma once

namespace lognl::special {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Gamma function for x > 0 (Lanczos approximation, g = 7).
double gamma(double x);

/// Digamma psi = Gamma'/Gamma for x > 0: upward recurrence to x > 6, then the
/// asymptotic series in 1/x^2.
double digamma(double x);

/// Modified Bessel function of the second kind K_nu(x), x > 0, from
/// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt with the trapezoid rule
/// (spectrally accurate for this integrand).
double bessel_k(double nu, double x);

/// K_1 by its small-argument series, accurate for 0 < x <= 2.
double bessel_k1_series(double x);

}  // namespace lognl::special
