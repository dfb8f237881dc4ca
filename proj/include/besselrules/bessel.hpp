#ifndef BESSELRULES_BESSEL_HPP_
#define BESSELRULES_BESSEL_HPP_

// Bessel functions of the first kind for integer order (real argument) and
// complex order (non-negative real argument), plus complex log-Gamma.
//
// Integer orders use the series for |y| <= 2 and Miller's downward
// recurrence, normalized with J_0 + 2 sum_{m>=1} J_{2m} = 1, elsewhere.
// Complex orders use the ascending series with term-ratio updates.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "besselrules/errors.hpp"

namespace besselrules {

using Complex = std::complex<double>;

inline constexpr double kMaxBesselArgument = 1e6;

// Smallest N with |J_n(y)| < tol for every |n| >= N.
//
// N = ceil(|y| + c |y|^{1/3} + g) where g = max(10, ceil(-log10 tol)) covers
// the small-argument regime and c = (1.5 ln(1/tol))^{2/3} / 2^{1/3} places N
// far enough into the Airy transition zone n ~ y + t (y/2)^{1/3} that
// Ai(t) ~ exp(-2/3 t^{3/2}) has dropped below tol.
inline int truncation_bound(double y, double tol) {
  if (!std::isfinite(y))
    throw InvalidArgument("truncation_bound: argument must be finite");
  if (!(tol > 0.0 && tol < 1.0))
    throw InvalidArgument("truncation_bound: tolerance must lie in (0, 1)");
  const double a = std::abs(y);
  const double transition =
      std::pow(1.5 * std::log(1.0 / tol), 2.0 / 3.0) / std::cbrt(2.0);
  const double tail = std::max(10.0, std::ceil(-std::log10(tol)));
  return static_cast<int>(std::ceil(a + transition * std::cbrt(a) + tail));
}

// J_0 .. J_{order_max} at one argument.
struct BesselRow {
  int order_max = 0;
  double argument = 0.0;
  std::vector<double> values;

  // J_n for any integer n (parity for n < 0); zero beyond order_max, so
  // callers size the row with truncation_bound.
  double operator()(long long n) const {
    const long long m = n < 0 ? -n : n;
    if (m > order_max) return 0.0;
    const double v = values[static_cast<std::size_t>(m)];
    return (n < 0 && (m & 1)) ? -v : v;
  }
};

namespace detail {

inline void check_bessel_argument(double y, const char* who) {
  if (!std::isfinite(y))
    throw InvalidArgument(std::string(who) + ": argument must be finite");
  if (std::abs(y) > kMaxBesselArgument)
    throw InvalidArgument(std::string(who) + ": |argument| exceeds 1e6");
}

// Upper bound (y/2)^n / n! on |J_n(y)|, as a natural log.
inline double log_series_leading_term(long long n, double y) {
  return static_cast<double>(n) * std::log(y / 2.0) -
         std::lgamma(static_cast<double>(n) + 1.0);
}

// Ascending series, n >= 0, y > 0. Terms alternate and shrink once
// (k+1)(n+k+1) > y^2/4, so the loss is bounded by I_n(y)/|J_n(y)| for y <= 2.
inline double series_j(long long n, double y) {
  const double half = y / 2.0;
  double term;
  if (n <= 150) {
    term = 1.0;
    for (long long k = 1; k <= n; ++k) term *= half / static_cast<double>(k);
  } else {
    const double lt = log_series_leading_term(n, y);
    if (lt < -745.0) return 0.0;
    term = std::exp(lt);
  }
  const double q = half * half;
  double sum = term;
  for (long long k = 0; k < 1000; ++k) {
    term *= -q / (static_cast<double>(k + 1) * static_cast<double>(n + k + 1));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Miller downward recurrence for y > 0; returns J_0 .. J_order_max.
inline std::vector<double> miller_row(int order_max, double y) {
  constexpr double kBig = 1e250;
  constexpr double kRescale = 1e-250;
  int start = std::max(order_max + 32, truncation_bound(y, 1e-17) + 8);
  start += start & 1;

  std::vector<double> row(static_cast<std::size_t>(order_max) + 1, 0.0);
  const double two_over_y = 2.0 / y;
  double upper = 0.0;     // J_{n+1}
  double current = 1e-30; // J_n, arbitrary seed at n = start
  double even_sum = 2.0 * current;  // start is even

  for (int n = start; n > 0; --n) {
    const double lower = static_cast<double>(n) * two_over_y * current - upper;
    upper = current;
    current = lower;
    const int m = n - 1;
    if (m <= order_max) row[static_cast<std::size_t>(m)] = current;
    if ((m & 1) == 0) even_sum += (m == 0 ? 1.0 : 2.0) * current;
    if (std::abs(current) > kBig) {
      current *= kRescale;
      upper *= kRescale;
      even_sum *= kRescale;
      for (int i = m; i <= order_max; ++i)
        row[static_cast<std::size_t>(i)] *= kRescale;
    }
  }
  const double scale = 1.0 / even_sum;
  for (double& v : row) v *= scale;
  return row;
}

// Hankel's expansion for y >> n^2, n >= 0:
//   J_n(y) = sqrt(2/(pi y)) (P cos chi - Q sin chi),  chi = y - (n/2 + 1/4) pi.
// cos chi and sin chi are expanded around cos y, sin y so that the phase
// shift is applied exactly.
inline bool hankel_applies(long long n, double y) {
  return y >= 1000.0 && static_cast<double>(n) * static_cast<double>(n) <= y / 4.0;
}

inline double hankel_j(long long n, double y) {
  const double mu = 4.0 * static_cast<double>(n) * static_cast<double>(n);
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * y);
    const double mag = std::abs(term);
    if (mag > previous) break;  // asymptotic: stop at the smallest term
    previous = mag;
    // a_k / y^k enters P for even k, Q for odd k, with signs (-1)^{floor(k/2)}
    const double signed_term = ((k / 2) % 2 == 0) ? term : -term;
    if (k % 2 == 0) p += signed_term; else q += signed_term;
    if (mag < 1e-17) break;
  }
  // alpha = (2n + 1) pi / 4, reduced exactly to a multiple of pi/4
  static constexpr double h = std::numbers::sqrt2 / 2.0;
  static constexpr double cos_table[8] = {1, h, 0, -h, -1, -h, 0, h};
  static constexpr double sin_table[8] = {0, h, 1, h, 0, -h, -1, -h};
  const int idx = static_cast<int>((2 * n + 1) % 8);
  const double ca = cos_table[idx], sa = sin_table[idx];
  const double cy = std::cos(y), sy = std::sin(y);
  const double cos_chi = cy * ca + sy * sa;
  const double sin_chi = sy * ca - cy * sa;
  return std::sqrt(2.0 / (std::numbers::pi * y)) * (p * cos_chi - q * sin_chi);
}

}  // namespace detail

// J_n(y) for integer n and real y, |y| <= 1e6.
inline double bessel_j_int(long long n, double y) {
  detail::check_bessel_argument(y, "bessel_j_int");
  double sign = 1.0;
  if (n < 0) {
    n = -n;
    if (n & 1) sign = -sign;
  }
  if (y < 0.0) {
    y = -y;
    if (n & 1) sign = -sign;
  }
  if (y == 0.0) return n == 0 ? 1.0 : 0.0;
  // |J_n(y)| <= (y/2)^n / n!
  if (n > 0 && detail::log_series_leading_term(n, y) < -700.0) return 0.0;
  if (y <= 2.0) return sign * detail::series_j(n, y);
  if (detail::hankel_applies(n, y)) return sign * detail::hankel_j(n, y);
  const std::vector<double> row = detail::miller_row(static_cast<int>(n), y);
  return sign * row.back();
}

// All of J_0 .. J_{order_max}(y) in one downward sweep.
inline BesselRow bessel_j_row(int order_max, double y) {
  if (order_max < 0)
    throw InvalidArgument("bessel_j_row: order_max must be non-negative");
  detail::check_bessel_argument(y, "bessel_j_row");
  BesselRow row{order_max, y, {}};
  const double a = std::abs(y);
  if (a == 0.0) {
    row.values.assign(static_cast<std::size_t>(order_max) + 1, 0.0);
    row.values[0] = 1.0;
    return row;
  }
  if (a < 1e-20) {
    // 2n/y would overflow the recurrence; the series is a single term here.
    row.values.resize(static_cast<std::size_t>(order_max) + 1);
    for (int n = 0; n <= order_max; ++n)
      row.values[static_cast<std::size_t>(n)] = detail::series_j(n, a);
  } else {
    row.values = detail::miller_row(order_max, a);
    // Far out, the long downward sweep accumulates rounding; the low orders
    // come from the asymptotic expansion instead.
    for (int n = 0; n <= order_max && detail::hankel_applies(n, a); ++n)
      row.values[static_cast<std::size_t>(n)] = detail::hankel_j(n, a);
  }
  if (y < 0.0)
    for (int n = 1; n <= order_max; n += 2)
      row.values[static_cast<std::size_t>(n)] = -row.values[static_cast<std::size_t>(n)];
  return row;
}

// Row sized so every omitted |J_n(y)| is below tol, with an optional margin.
inline BesselRow bessel_j_row_for(double y, double tol, int margin = 0) {
  return bessel_j_row(truncation_bound(y, tol) + margin, y);
}

// ---------------------------------------------------------------------------
// Complex log-Gamma (Lanczos, g = 7, nine coefficients).

inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

namespace detail {

// Principal log of sin(pi z), stable for large |Im z|.
inline Complex log_sin_pi(Complex z) {
  constexpr double pi = std::numbers::pi;
  // Reduce Re z into (-1, 1]; sin(pi z) is 2-periodic.
  const double x = z.real() - 2.0 * std::round(z.real() / 2.0);
  const double y = z.imag();
  if (std::abs(pi * y) < 300.0) {
    const Complex s(std::sin(pi * x) * std::cosh(pi * y),
                    std::cos(pi * x) * std::sinh(pi * y));
    return std::log(s);
  }
  // sin(pi z) = (i/2) e^{pi |y|} e^{-i pi x sgn y} (1 - e^{2 pi i x sgn y - 2 pi |y|})
  const double sg = y > 0.0 ? 1.0 : -1.0;
  const Complex w = std::exp(Complex(-2.0 * pi * std::abs(y), 2.0 * pi * x * sg));
  Complex l(pi * std::abs(y) - std::numbers::ln2, sg * (pi / 2.0 - pi * x));
  l += std::log(1.0 - w);
  // Wrap the imaginary part into (-pi, pi].
  double im = std::remainder(l.imag(), 2.0 * pi);
  if (im <= -pi) im += 2.0 * pi;
  return {l.real(), im};
}

inline Complex ln_gamma_right(Complex z) {
  z -= 1.0;
  Complex x = kLanczosCoefficients[0];
  for (std::size_t i = 1; i < kLanczosCoefficients.size(); ++i)
    x += kLanczosCoefficients[i] / (z + static_cast<double>(i));
  const Complex t = z + kLanczosG + 0.5;
  constexpr double half_log_two_pi = 0.91893853320467274178;
  return half_log_two_pi + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace detail

// Principal branch of ln Gamma(z).
inline Complex ln_gamma_complex(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw InvalidArgument("ln_gamma_complex: argument must be finite");
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw PoleError("ln_gamma_complex: pole at non-positive integer " +
                    std::to_string(z.real()));
  if (z.real() >= 0.5) return detail::ln_gamma_right(z);
  constexpr double pi = std::numbers::pi;
  const double branch = 2.0 * pi * std::copysign(1.0, z.imag()) *
                        std::floor(0.5 * z.real() + 0.25);
  return Complex(std::log(pi), branch) - detail::log_sin_pi(z) -
         detail::ln_gamma_right(1.0 - z);
}

// ---------------------------------------------------------------------------
// Complex order.

inline constexpr double kMaxComplexOrderImag = 50.0;

// Ascending series of J_nu(z) / (z/2)^nu split as exp(log_scale) * sum, with
// log_scale = -ln Gamma(nu + 1) and
// sum = sum_k (-z^2/4)^k / (k! (nu+1)_k).
struct ComplexOrderSeries {
  Complex log_scale;
  Complex sum;
  int terms = 0;
};

namespace detail {

inline ComplexOrderSeries complex_order_series(Complex nu, double z) {
  ComplexOrderSeries out;
  out.log_scale = -ln_gamma_complex(nu + 1.0);
  const double q = -0.25 * z * z;
  Complex term = 1.0;
  Complex sum = 1.0;
  int small_run = 0;
  for (int k = 0; k < 500; ++k) {
    term *= q / (static_cast<double>(k + 1) * (nu + static_cast<double>(k + 1)));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) {
      if (++small_run == 3) {
        out.sum = sum;
        out.terms = k + 2;
        return out;
      }
    } else {
      small_run = 0;
    }
  }
  throw ConvergenceError("bessel_j_complex_order: series did not converge in 500 terms");
}

inline bool is_negative_integer(Complex nu) {
  return nu.imag() == 0.0 && nu.real() < 0.0 && nu.real() == std::floor(nu.real());
}

inline void check_complex_order(Complex nu, double z, const char* who) {
  if (!std::isfinite(z) || z < 0.0)
    throw InvalidArgument(std::string(who) + ": argument must be finite and >= 0");
  if (!std::isfinite(nu.real()) || !std::isfinite(nu.imag()) ||
      std::abs(nu.imag()) > kMaxComplexOrderImag)
    throw InvalidArgument(std::string(who) + ": order needs |Im nu| <= 50");
}

}  // namespace detail

// J_nu(z) / (z/2)^nu, which stays finite at z = 0 for every order.
inline ComplexOrderSeries bessel_j_complex_order_scaled(Complex nu, double z) {
  detail::check_complex_order(nu, z, "bessel_j_complex_order_scaled");
  if (detail::is_negative_integer(nu))
    throw PoleError("bessel_j_complex_order_scaled: negative integer order");
  return detail::complex_order_series(nu, z);
}

// J_nu(z) for complex order and real z >= 0.
inline Complex bessel_j_complex_order(Complex nu, double z) {
  detail::check_complex_order(nu, z, "bessel_j_complex_order");
  if (detail::is_negative_integer(nu)) {
    // J_{-n} = (-1)^n J_n; the series has Gamma poles in its leading terms.
    return bessel_j_int(static_cast<long long>(nu.real()), z);
  }
  if (z == 0.0) {
    if (nu == Complex(0.0, 0.0)) return 1.0;
    if (nu.real() > 0.0) return 0.0;
    throw InvalidArgument("bessel_j_complex_order: J_nu(0) undefined for Re nu <= 0, nu != 0");
  }
  const ComplexOrderSeries s = detail::complex_order_series(nu, z);
  return std::exp(nu * std::log(z / 2.0) + s.log_scale) * s.sum;
}

}  // namespace besselrules

#endif  // BESSELRULES_BESSEL_HPP_
