#ifndef BESSELRULES_TIME_DOMAIN_HPP_
#define BESSELRULES_TIME_DOMAIN_HPP_

// Direct integration of z'' + gamma z' + omega0^2 z = f cos(omega t + phi(t))
// as an independent check on the sideband sums.
//
// The complex form of the equation splits into two decoupled modes
// u_+- with rates lambda_+- = -gamma/2 +- i omega_d, z = u_+ + u_-. In the frame
// rotating at omega = omega0 + delta each mode obeys
//
//   v' = (lambda - i omega) v +- f exp(i phi(t)) / (lambda_+ - lambda_-),
//
// a linear equation whose homogeneous part is propagated exactly. The slowly
// varying forcing is interpolated on Chebyshev nodes inside each step and
// integrated against the exponential in closed form, so the optical
// oscillation never has to be resolved by the step size.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "besselrules/errors.hpp"
#include "besselrules/fourier.hpp"
#include "besselrules/oracles.hpp"
#include "besselrules/spectroscopy.hpp"
#include "besselrules/sum_rules.hpp"

namespace besselrules {

struct TimeDomainOptions {
  int periods = 2;                 // modulation periods analysed
  int samples_per_period = 64;     // averaged power samples per modulation period
  int harmonics = 2;
  double settle_gammas = 40.0;     // settling time in units of 1/gamma, at least 10
  int window_optical_periods = 20;
  int samples_per_optical_period = 16;
  int poly_degree = 8;
  double max_phase_step = 0.25;    // bound on the forcing phase change per step, rad
  double tolerance = 1e-9;         // step-halving agreement, relative to f^2/(2 gamma)
  bool check_step_halving = true;
};

namespace detail {

using LongComplex = std::complex<long double>;

// Chebyshev points of the first kind mapped to [0, 1].
inline std::vector<double> unit_chebyshev_nodes(int degree) {
  std::vector<double> s(static_cast<std::size_t>(degree) + 1);
  for (int j = 0; j <= degree; ++j)
    s[static_cast<std::size_t>(j)] = 0.5 * (1.0 - std::cos(std::numbers::pi * (j + 0.5) / (degree + 1)));
  return s;
}

inline double lagrange_basis(const std::vector<double>& nodes, std::size_t j, double s) {
  double v = 1.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (i != j) v *= (s - nodes[i]) / (nodes[j] - nodes[i]);
  return v;
}

// Monomial coefficients of each Lagrange basis polynomial.
inline std::vector<std::vector<long double>> lagrange_monomials(const std::vector<double>& nodes) {
  const std::size_t n = nodes.size();
  std::vector<std::vector<long double>> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<long double> c{1.0L};
    long double denom = 1.0L;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      std::vector<long double> next(c.size() + 1, 0.0L);
      for (std::size_t m = 0; m < c.size(); ++m) {
        next[m + 1] += c[m];
        next[m] -= c[m] * static_cast<long double>(nodes[i]);
      }
      c = std::move(next);
      denom *= static_cast<long double>(nodes[j]) - static_cast<long double>(nodes[i]);
    }
    for (auto& v : c) v /= denom;
    out[j] = std::move(c);
  }
  return out;
}

// One exponential step of length tau for the rate L:
//   v(t + tau) = propagator v(t) + tau sum_j weights_j g(t + nodes_j tau),
// weights_j = int_0^1 exp(L tau (1 - s)) l_j(s) ds.
struct ExpStep {
  Complex propagator;
  std::vector<Complex> weights;
};

inline ExpStep make_exp_step(Complex rate, double tau, const std::vector<double>& nodes) {
  const Complex z = rate * tau;
  ExpStep st;
  st.propagator = std::exp(z);
  st.weights.resize(nodes.size());
  if (std::abs(z) <= 40.0) {
    const int panels = 2 + static_cast<int>(std::abs(z) / 4.0);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const auto re = [&](double s) { return (std::exp(z * (1.0 - s)) * lagrange_basis(nodes, j, s)).real(); };
      const auto im = [&](double s) { return (std::exp(z * (1.0 - s)) * lagrange_basis(nodes, j, s)).imag(); };
      st.weights[j] = {composite_gauss(re, 0.0, 1.0, panels), composite_gauss(im, 0.0, 1.0, panels)};
    }
    return st;
  }
  // I_m = int_0^1 exp(z (1 - s)) s^m ds obeys I_m = (m I_{m-1} - 1) / z, which
  // is stable once |z| exceeds the degree.
  const LongComplex zl(z.real(), z.imag());
  const LongComplex ez(st.propagator.real(), st.propagator.imag());
  std::vector<LongComplex> moments(nodes.size());
  moments[0] = (ez - 1.0L) / zl;
  for (std::size_t m = 1; m < nodes.size(); ++m)
    moments[m] = (static_cast<long double>(m) * moments[m - 1] - 1.0L) / zl;
  const auto basis = lagrange_monomials(nodes);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    LongComplex w = 0.0L;
    for (std::size_t m = 0; m < basis[j].size(); ++m) w += basis[j][m] * moments[m];
    st.weights[j] = Complex(static_cast<double>(w.real()), static_cast<double>(w.imag()));
  }
  return st;
}

struct TimeDomainRun {
  RealHarmonics harmonics;
  int grid_steps_per_period = 0;
};

inline TimeDomainRun integrate_modes(const OscillatorParams& p, const GeneralModulation& mod,
                                     const TimeDomainOptions& opt, int steps_per_period) {
  const double omega = p.omega0 + p.delta;
  const double half_gamma = 0.5 * p.gamma;
  const double omega_d = std::sqrt(p.omega0 * p.omega0 - half_gamma * half_gamma);
  // omega_d - omega without cancelling omega0 against omega_d
  const double slow_freq = -(half_gamma * half_gamma) / (omega_d + p.omega0) - p.delta;
  const Complex rate_plus(-half_gamma, slow_freq);
  const Complex rate_minus(-half_gamma, -(omega_d + omega));
  const Complex lambda_plus(-half_gamma, omega_d);
  const Complex lambda_minus(-half_gamma, -omega_d);
  const Complex drive = p.force / Complex(0.0, 2.0 * omega_d);  // f / (lambda_+ - lambda_-)

  const double mod_period = 2.0 * std::numbers::pi / mod.fundamental();
  const double h = mod_period / steps_per_period;
  const double dt = 2.0 * std::numbers::pi / (omega * opt.samples_per_optical_period);
  const int window_samples = opt.window_optical_periods * opt.samples_per_optical_period;
  const double lead = (window_samples / 2 - 0.5) * dt;  // window centre to first sample
  if (!(h > lead + dt))
    throw InvalidArgument("time_domain_oracle: optical window does not fit in one step; needs omega0 >> Omega");

  const auto nodes = unit_chebyshev_nodes(opt.poly_degree);
  const ExpStep big_plus = make_exp_step(rate_plus, h, nodes);
  const ExpStep big_minus = make_exp_step(rate_minus, h, nodes);
  const ExpStep lead_plus = make_exp_step(rate_plus, h - lead, nodes);
  const ExpStep lead_minus = make_exp_step(rate_minus, h - lead, nodes);
  const ExpStep fine_plus = make_exp_step(rate_plus, dt, nodes);
  const ExpStep fine_minus = make_exp_step(rate_minus, dt, nodes);

  std::vector<Complex> forcing(nodes.size());
  const auto sample_forcing = [&](double t0, double tau) {
    for (std::size_t j = 0; j < nodes.size(); ++j)
      forcing[j] = std::polar(1.0, mod.phase(t0 + nodes[j] * tau));
  };
  const auto advance = [&](Complex& vp, Complex& vm, const ExpStep& sp, const ExpStep& sm, double tau) {
    Complex ip = 0.0, im = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      ip += sp.weights[j] * forcing[j];
      im += sm.weights[j] * forcing[j];
    }
    vp = sp.propagator * vp + tau * drive * ip;
    vm = sm.propagator * vm - tau * drive * im;
  };

  const int settle_periods = std::max(1, static_cast<int>(std::ceil(opt.settle_gammas / p.gamma / mod_period)));
  const int total_steps = (settle_periods + opt.periods) * steps_per_period;
  const int stride = steps_per_period / opt.samples_per_period;
  const long double two_pi_l = 2.0L * std::numbers::pi_v<long double>;
  const double theta_step = 2.0 * std::numbers::pi / opt.samples_per_optical_period;

  std::vector<double> averaged;
  averaged.reserve(static_cast<std::size_t>(opt.periods * opt.samples_per_period));
  Complex vp = 0.0, vm = 0.0;
  for (int k = 1; k <= total_steps; ++k) {
    const double t_prev = (k - 1) * h;
    sample_forcing(t_prev, h);
    const int analysed = k - settle_periods * steps_per_period;
    if (analysed >= 0 && analysed < opt.periods * steps_per_period && analysed % stride == 0) {
      // Window of optical-period samples centred on t_k, integrated from t_{k-1}.
      Complex wp = vp, wm = vm;
      sample_forcing(t_prev, h - lead);
      advance(wp, wm, lead_plus, lead_minus, h - lead);
      const double t_center = k * h;
      const long double theta_center =
          std::fmod(static_cast<long double>(omega) * static_cast<long double>(k) * static_cast<long double>(h), two_pi_l);
      double acc = 0.0;
      for (int m = 0; m < window_samples; ++m) {
        const double offset = (m + 0.5 - window_samples / 2);
        const double t = t_center + offset * dt;
        if (m > 0) {
          sample_forcing(t - dt, dt);
          advance(wp, wm, fine_plus, fine_minus, dt);
        }
        const double theta = static_cast<double>(theta_center) + offset * theta_step;
        const Complex zdot = std::polar(1.0, theta) * (lambda_plus * wp + lambda_minus * wm);
        acc += p.force * std::cos(theta + mod.phase(t)) * zdot.real();
      }
      averaged.push_back(acc / window_samples);
      sample_forcing(t_prev, h);
    }
    advance(vp, vm, big_plus, big_minus, h);
  }
  return {real_harmonics(averaged, opt.periods, opt.harmonics), steps_per_period};
}

}  // namespace detail

// Absorbed power from direct integration, averaged over a window of optical
// periods and decomposed into harmonics of the modulation frequency.
inline HarmonicDecomposition time_domain_oracle(const OscillatorParams& p, const GeneralModulation& mod,
                                                const TimeDomainOptions& opt) {
  p.validate();
  if (opt.periods < 1 || opt.samples_per_period < 2 * opt.harmonics + 2 || opt.harmonics < 0)
    throw InvalidArgument("time_domain_oracle: need periods >= 1 and samples_per_period > 2 harmonics");
  if (!(opt.settle_gammas >= 10.0))
    throw InvalidArgument("time_domain_oracle: settling time must be at least 10/gamma");
  if (opt.poly_degree < 1 || opt.poly_degree > 16 || opt.samples_per_optical_period < 4 ||
      opt.window_optical_periods < 1)
    throw InvalidArgument("time_domain_oracle: invalid integration options");
  if (!(p.omega0 > p.gamma / 2.0))
    throw InvalidArgument("time_domain_oracle: oscillator must be underdamped");

  // Bound the forcing phase change per step by max |phi'| * h.
  double max_rate = 0.0;
  for (const auto& [n, c] : mod.coefficients())
    if (n > 0) max_rate += 2.0 * n * mod.fundamental() * std::abs(c);
  const double mod_period = 2.0 * std::numbers::pi / mod.fundamental();
  int steps = opt.samples_per_period;
  while (max_rate * mod_period / steps > opt.max_phase_step || mod_period / steps > 1.0 / p.gamma) steps *= 2;

  const auto run = detail::integrate_modes(p, mod, opt, steps);
  HarmonicDecomposition out;
  out.dc = run.harmonics.dc;
  out.cos_amps = run.harmonics.cos_amps;
  out.sin_amps = run.harmonics.sin_amps;
  out.truncation_order = steps;

  if (opt.check_step_halving) {
    const auto fine = detail::integrate_modes(p, mod, opt, 2 * steps);
    double diff = std::abs(fine.harmonics.dc - out.dc);
    for (int h = 0; h < opt.harmonics; ++h) {
      diff = std::max(diff, std::abs(fine.harmonics.cos_amps[h] - out.cos_amps[h]));
      diff = std::max(diff, std::abs(fine.harmonics.sin_amps[h] - out.sin_amps[h]));
    }
    if (diff > opt.tolerance * p.power_scale())
      throw OracleFailure("time_domain_oracle: step halving changed the harmonics by " + std::to_string(diff));
  }
  return out;
}

inline HarmonicDecomposition time_domain_oracle(const OscillatorParams& p, const GeneralModulation& mod,
                                                int periods, int samples_per_period) {
  TimeDomainOptions opt;
  opt.periods = periods;
  opt.samples_per_period = samples_per_period;
  return time_domain_oracle(p, mod, opt);
}

}  // namespace besselrules

#endif  // BESSELRULES_TIME_DOMAIN_HPP_
