#ifndef BESSELRULES_ORACLES_HPP_
#define BESSELRULES_ORACLES_HPP_

// Quadrature ground truth for tests. Nothing in the library proper calls
// these; they share no code path with the recurrences and series.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "besselrules/errors.hpp"

namespace besselrules {

namespace detail {

// Composite 30-point Gauss-Legendre on `panels` equal panels.
template <class F>
double composite_gauss(const F& f, double a, double b, int panels) {
  using Rule = boost::math::quadrature::gauss<double, 30>;
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) sum += Rule::integrate(f, a + i * h, a + (i + 1) * h);
  return sum;
}

// Integrates with `panels` and twice as many; the difference is the error
// estimate. Panel counts double until the estimate meets abs_tol.
template <class F>
double checked_integral(const F& f, double a, double b, int panels, double abs_tol,
                        const char* who) {
  double coarse = composite_gauss(f, a, b, panels);
  for (int round = 0; round < 6; ++round) {
    panels *= 2;
    const double fine = composite_gauss(f, a, b, panels);
    if (std::isfinite(fine) && std::abs(fine - coarse) <= abs_tol) return fine;
    coarse = fine;
  }
  throw OracleFailure(std::string(who) + ": quadrature did not settle to " +
                      std::to_string(abs_tol));
}

}  // namespace detail

// (1/pi) int_0^pi cos(n t - y sin t) dt, |n| <= 200, |y| <= 100.
inline double bessel_j_quadrature_oracle(int n, double y) {
  if (std::abs(n) > 200 || !(std::abs(y) <= 100.0))
    throw InvalidArgument("bessel_j_quadrature_oracle: needs |n| <= 200, |y| <= 100");
  const auto integrand = [n, y](double t) { return std::cos(n * t - y * std::sin(t)); };
  constexpr double pi = std::numbers::pi;
  const int panels = 2 + static_cast<int>((std::abs(n) + std::abs(y)) / 8.0);
  return detail::checked_integral(integrand, 0.0, pi, panels, 1e-14 * pi,
                                  "bessel_j_quadrature_oracle") / pi;
}

// n-th Fourier coefficient (1/2pi) int_0^{2pi} exp(i phase(t)) exp(-i n t) dt of
// a real phase function. `bandwidth` roughly bounds the harmonic content of
// exp(i phase) and only sets the starting panel count.
template <class Phase>
std::complex<double> fourier_coefficient_oracle(Phase phase, int n, double bandwidth = 16.0) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const auto re = [&](double t) { return std::cos(phase(t) - n * t); };
  const auto im = [&](double t) { return std::sin(phase(t) - n * t); };
  const double tol = 1e-14 * two_pi;
  const int panels = 2 + static_cast<int>((std::abs(n) + bandwidth) / 4.0);
  return {detail::checked_integral(re, 0.0, two_pi, panels, tol, "fourier_coefficient_oracle") / two_pi,
          detail::checked_integral(im, 0.0, two_pi, panels, tol, "fourier_coefficient_oracle") / two_pi};
}

}  // namespace besselrules

#endif  // BESSELRULES_ORACLES_HPP_
