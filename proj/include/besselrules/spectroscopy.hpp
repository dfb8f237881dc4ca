#ifndef BESSELRULES_SPECTROSCOPY_HPP_
#define BESSELRULES_SPECTROSCOPY_HPP_

// Absorption of a phase-modulated drive by a damped oscillator
//
//   z'' + gamma z' + omega0^2 z = f cos(omega t + phi(t)),  omega = omega0 + delta,
//
// and the sideband sums A_s = sum_n J_n(M) J_{n-s}(M) / (gamma + i n Omega).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "besselrules/bessel.hpp"
#include "besselrules/coefficients.hpp"
#include "besselrules/errors.hpp"
#include "besselrules/sum_rules.hpp"

namespace besselrules {

// Sidebands weaker than this are ignored when judging perturbative validity.
inline constexpr double kSidebandWeightFloor = 1e-6;

// Largest |n| with |J_n(M)| >= floor; 0 when M = 0.
inline int sideband_extent(double M, double floor = kSidebandWeightFloor) {
  const int cut = truncation_bound(std::abs(M), floor);
  const BesselRow row = bessel_j_row(cut, M);
  for (int n = cut; n > 0; --n)
    if (std::abs(row(n)) >= floor) return n;
  return 0;
}

struct OscillatorParams {
  double omega0 = 1.0;
  double gamma = 1.0;
  double force = 1.0;
  double delta = 0.0;
  double Omega = 1.0;
  double M = 0.0;

  double Delta() const { return 2.0 * delta / gamma; }
  double eta() const { return Omega / gamma; }
  Complex epsilon() const { return Complex(0.0, -2.0 * Omega / gamma) / Complex(1.0, Delta()); }
  int n_max() const { return sideband_extent(M); }
  bool perturbative_valid() const { return 2.0 * n_max() * Omega / gamma < 1.0; }
  // f^2 / (2 gamma), the resonant unmodulated power.
  double power_scale() const { return force * force / (2.0 * gamma); }

  void validate() const {
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!(finite(omega0) && omega0 > 0.0)) throw InvalidArgument("omega0 must be positive");
    if (!(finite(gamma) && gamma > 0.0)) throw InvalidArgument("gamma must be positive");
    if (!finite(force)) throw InvalidArgument("force must be finite");
    if (!finite(delta)) throw InvalidArgument("delta must be finite");
    if (!(finite(Omega) && Omega > 0.0)) throw InvalidArgument("Omega must be positive");
    if (!(finite(M) && M >= 0.0)) throw InvalidArgument("M must be non-negative");
  }
};

struct HarmonicDecomposition {
  double dc = 0.0;
  std::vector<double> cos_amps;  // harmonics 1, 2, ...
  std::vector<double> sin_amps;
  bool domain_warning = false;
  int truncation_order = 0;

  double cos_amp(int h) const {
    return h >= 1 && h <= static_cast<int>(cos_amps.size()) ? cos_amps[static_cast<std::size_t>(h - 1)] : 0.0;
  }
  double sin_amp(int h) const {
    return h >= 1 && h <= static_cast<int>(sin_amps.size()) ? sin_amps[static_cast<std::size_t>(h - 1)] : 0.0;
  }
  // dc + sum_h (cos_h cos(h W t) + sin_h sin(h W t))
  double evaluate(double omega_t) const {
    double v = dc;
    for (std::size_t h = 0; h < cos_amps.size(); ++h) v += cos_amps[h] * std::cos((h + 1.0) * omega_t);
    for (std::size_t h = 0; h < sin_amps.size(); ++h) v += sin_amps[h] * std::sin((h + 1.0) * omega_t);
    return v;
  }
};

// z(t) = amplitude * exp(i omega t) for an unmodulated drive f exp(i omega t).
inline Complex steady_state_amplitude(const OscillatorParams& p, double omega) {
  p.validate();
  return p.force / Complex(p.omega0 * p.omega0 - omega * omega, p.gamma * omega);
}

// Time-averaged absorbed power for an unmodulated drive f cos(omega t).
inline double average_power_unmodulated(const OscillatorParams& p, double omega) {
  p.validate();
  const double w2 = omega * omega;
  const double detune = (omega - p.omega0) * (omega + p.omega0);  // no cancellation near resonance
  const double denom = detune * detune + w2 * p.gamma * p.gamma;
  if (denom == 0.0) return 0.0;
  return 0.5 * p.force * p.force * w2 * p.gamma / denom;
}

// ---------------------------------------------------------------------------
// A_s

namespace detail {

inline void check_a_s_args(double M, double gamma, double Omega, const char* who) {
  if (!std::isfinite(M)) throw InvalidArgument(std::string(who) + ": M must be finite");
  if (!(std::isfinite(gamma) && gamma > 0.0))
    throw InvalidArgument(std::string(who) + ": gamma must be positive");
  if (!std::isfinite(Omega)) throw InvalidArgument(std::string(who) + ": Omega must be finite");
}

inline double log_sinh(double x) {
  if (x < 1.0) return std::log(std::sinh(x));
  return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2;
}

inline Complex reflect_negative_s(int s, Complex value) {
  const Complex c = std::conj(value);
  return (s % 2 == 0) ? c : -c;
}

}  // namespace detail

// sum_n J_n(M) J_{n-s}(M) / (gamma + i n Omega), truncated where |J_n| < tol.
inline Complex a_s_direct(int s, double M, double gamma, double Omega, double tol = 1e-16) {
  detail::check_a_s_args(M, gamma, Omega, "a_s_direct");
  if (!(tol > 0.0 && tol < 1.0)) throw InvalidArgument("a_s_direct: tol must lie in (0, 1)");
  const int n_cut = truncation_bound(std::abs(M), tol) + 8;
  const BesselRow row = bessel_j_row(n_cut + std::abs(s), M);
  Complex sum = 0.0;
  for (int n = -n_cut; n <= n_cut; ++n) {
    const double num = row(n) * row(n - s);
    if (num != 0.0) sum += num / Complex(gamma, n * Omega);
  }
  return sum;
}

inline constexpr double kNewbergerMaxExponent = 700.0;

// ((-1)^s / gamma) (pi c / sinh(pi c)) J_{s - i c}(M) J_{i c}(M), c = gamma / Omega.
// Assembled in log space so the sinh and the two Gamma normalizations cancel
// before exponentiation. Negative s uses A_{-s} = (-1)^s conj(A_s).
inline Complex a_s_newberger(int s, double M, double gamma, double Omega) {
  detail::check_a_s_args(M, gamma, Omega, "a_s_newberger");
  if (!(Omega > 0.0)) throw InvalidArgument("a_s_newberger: Omega must be positive");
  if (M < 0.0) throw InvalidArgument("a_s_newberger: M must be non-negative");
  if (s < 0) return detail::reflect_negative_s(s, a_s_newberger(-s, M, gamma, Omega));
  const double c = gamma / Omega;
  const double x = std::numbers::pi * c;
  if (x > kNewbergerMaxExponent)
    throw RangeError("a_s_newberger: pi gamma/Omega = " + std::to_string(x) +
                     " exceeds 700; use a_s_series or a_s_direct");
  if (M == 0.0) return s == 0 ? Complex(1.0 / gamma) : Complex(0.0);

  const auto first = detail::complex_order_series(Complex(s, -c), M);
  const auto second = detail::complex_order_series(Complex(0.0, c), M);
  // (M/2)^{s - ic} (M/2)^{ic} = (M/2)^s
  const Complex log_mag = std::log(x) - detail::log_sinh(x) + first.log_scale + second.log_scale +
                          static_cast<double>(s) * std::log(M / 2.0);
  const Complex value = std::exp(log_mag) * first.sum * second.sum / gamma;
  return (s % 2 == 0) ? value : -value;
}

struct SeriesResult {
  Complex value;
  double last_term = 0.0;  // magnitude of the last included term, same units as value
  int terms = 0;
};

// Partial sum through k_max of
//   ((-1)^s / gamma)(M/2)^s sum_k (-M^2/4)^k (s+2k)! / ((s+k)! k!)
//       * prod_{p=1}^{s} 1/(k+p-ic) * prod_{p=1}^{k} 1/(p^2+c^2).
inline SeriesResult a_s_series(int s, double M, double gamma, double Omega, int k_max = 40) {
  detail::check_a_s_args(M, gamma, Omega, "a_s_series");
  if (!(Omega > 0.0)) throw InvalidArgument("a_s_series: Omega must be positive");
  if (k_max < 0 || k_max > 60) throw InvalidArgument("a_s_series: k_max must lie in [0, 60]");
  if (s < 0) {
    SeriesResult r = a_s_series(-s, M, gamma, Omega, k_max);
    r.value = detail::reflect_negative_s(s, r.value);
    return r;
  }
  const double c = gamma / Omega;
  const double q = -M * M / 4.0;
  Complex term = 1.0;
  for (int p = 1; p <= s; ++p) term /= Complex(p, -c);
  Complex sum = term;
  for (int k = 0; k < k_max; ++k) {
    const double kk = k;
    term *= q * (s + 2 * kk + 1) * (s + 2 * kk + 2) / ((s + kk + 1) * (kk + 1));
    term *= Complex(kk + 1, -c) / Complex(kk + s + 1, -c);
    term /= (kk + 1) * (kk + 1) + c * c;
    sum += term;
  }
  double prefactor = std::pow(M / 2.0, s) / gamma;
  if (s % 2 != 0) prefactor = -prefactor;
  return {prefactor * sum, std::abs(prefactor * term), k_max + 1};
}

struct GeometricResult {
  Complex value;
  bool domain_warning = false;
};

// (1/gamma) sum_{k=0}^{order} (-i eta)^k D_{k,s}(M), the expansion of
// 1/(1 + i n eta) inside A_s. Valid while n_max * eta < 1.
inline GeometricResult a_s_geometric(const CoeffTable& table, int s, double M, double gamma,
                                     double Omega, int order) {
  detail::check_a_s_args(M, gamma, Omega, "a_s_geometric");
  if (order < 0 || order > table.k_max())
    throw InvalidArgument("a_s_geometric: order must lie in [0, table k_max]");
  const double eta = Omega / gamma;
  Complex weight = 1.0;
  Complex sum = 0.0;
  for (int k = 0; k <= order; ++k) {
    if (std::abs(s) <= k) sum += weight * eval_coeff(table, k, s, M);
    weight *= Complex(0.0, -eta);
  }
  GeometricResult r;
  r.value = sum / gamma;
  r.domain_warning = !(sideband_extent(M) * std::abs(eta) < 1.0);
  return r;
}

inline GeometricResult a_s_geometric(int s, double M, double gamma, double Omega, int order) {
  if (order < 0 || order > kMaxTableOrder)
    throw InvalidArgument("a_s_geometric: order must lie in [0, 64]");
  return a_s_geometric(build_coeff_table(order), s, M, gamma, Omega, order);
}

// gamma A_s = sum_k phase_k * coefficient_k(M) * eta^k, exactly.
struct EtaTerm {
  int power = 0;
  UnitPhase phase;
  DyadicPoly coefficient;
};

inline std::vector<EtaTerm> geometric_expansion_terms(const CoeffTable& table, int s, int order) {
  if (order < 0 || order > table.k_max())
    throw InvalidArgument("geometric_expansion_terms: order must lie in [0, table k_max]");
  std::vector<EtaTerm> out;
  for (int k = 0; k <= order; ++k) {
    const DyadicPoly& d = table.entry(k, s);
    if (!d.is_zero()) out.push_back({k, UnitPhase(-k), d});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Modulated absorption.

namespace detail {

// S_s = sum_n w_n J_n J_{n-s} / (omega0^2 - w_n^2 + i gamma w_n), w_n = omega0 + delta + n Omega.
// The real part of the denominator is formed as -(delta + n Omega)(2 omega0 + delta + n Omega)
// to avoid cancelling omega0^2 against w_n^2.
inline std::vector<Complex> sideband_response_sums(const OscillatorParams& p, int s_max, int n_cut) {
  const BesselRow row = bessel_j_row(n_cut + s_max, p.M);
  std::vector<Complex> sums(static_cast<std::size_t>(2 * s_max + 1));
  for (int n = -n_cut; n <= n_cut; ++n) {
    const double shift = p.delta + n * p.Omega;
    const double w = p.omega0 + shift;
    if (!(w > 0.0))
      throw InvalidRegime("modulated_power_exact: sideband n=" + std::to_string(n) +
                          " has non-positive frequency omega0 + delta + n Omega = " + std::to_string(w));
    const Complex response = w / Complex(-shift * (2.0 * p.omega0 + shift), p.gamma * w);
    for (int s = -s_max; s <= s_max; ++s) {
      const double jj = row(n) * row(n - s);
      if (jj != 0.0) sums[static_cast<std::size_t>(s + s_max)] += jj * response;
    }
  }
  return sums;
}

}  // namespace detail

// Absorbed power -(f^2/2) Im sum_s S_s exp(i s Omega t), as real harmonics up
// to s_max, with no expansion in 1/omega0 or Omega/gamma.
inline HarmonicDecomposition modulated_power_exact(const OscillatorParams& p, int s_max = 2) {
  p.validate();
  if (s_max < 0) throw InvalidArgument("modulated_power_exact: s_max must be non-negative");
  const int n_cut = truncation_bound(p.M, kBruteTolerance) + 8;
  const auto sums = detail::sideband_response_sums(p, s_max, n_cut);
  const auto at = [&](int s) { return sums[static_cast<std::size_t>(s + s_max)]; };
  const double scale = -0.5 * p.force * p.force;
  HarmonicDecomposition h;
  h.truncation_order = n_cut;
  h.dc = scale * at(0).imag();
  for (int s = 1; s <= s_max; ++s) {
    // Im(S_s e^{ix} + S_{-s} e^{-ix}) = (Im S_s + Im S_{-s}) cos x + (Re S_s - Re S_{-s}) sin x
    h.cos_amps.push_back(scale * (at(s).imag() + at(-s).imag()));
    h.sin_amps.push_back(scale * (at(s).real() - at(-s).real()));
  }
  h.domain_warning = !p.perturbative_valid();
  return h;
}

// Leading terms in eps = 2 M Omega / gamma, in units of f^2/(2 gamma):
//   1/(1+D^2) - eps 2D/(1+D^2)^2 cos + (eps^2/M) D(D^2-3)/(1+D^2)^3 sin
//   + (eps^2/2)(3D^2-1)/(1+D^2)^3 (1 + cos 2)
inline HarmonicDecomposition modulated_power_perturbative(const OscillatorParams& p) {
  p.validate();
  const double d = p.Delta();
  const double l = 1.0 + d * d;
  const double e = 2.0 * p.M * p.Omega / p.gamma;
  const double sc = p.power_scale();
  const double second = 0.5 * e * e * (3.0 * d * d - 1.0) / (l * l * l);
  // (1/M) e^2 written without the division so M = 0 is harmless.
  const double sine_weight = 4.0 * p.M * p.Omega * p.Omega / (p.gamma * p.gamma);
  HarmonicDecomposition h;
  h.dc = sc * (1.0 / l + second);
  h.cos_amps = {sc * e * (-2.0 * d) / (l * l), sc * second};
  h.sin_amps = {sc * sine_weight * d * (d * d - 3.0) / (l * l * l), 0.0};
  h.domain_warning = !p.perturbative_valid();
  return h;
}

// Leading-order instantaneous power for an arbitrary slow phase modulation,
// through the instantaneous frequency phi'(t).
inline double general_modulation_power(const OscillatorParams& p, const GeneralModulation& mod, double t) {
  p.validate();
  const double d = p.Delta();
  const double l = 1.0 + d * d;
  return p.power_scale() * (1.0 / l + (2.0 / p.gamma) * (-2.0 * d / (l * l)) * mod.phase_derivative(t));
}

}  // namespace besselrules

#endif  // BESSELRULES_SPECTROSCOPY_HPP_
