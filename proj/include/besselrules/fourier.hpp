#ifndef BESSELRULES_FOURIER_HPP_
#define BESSELRULES_FOURIER_HPP_

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace besselrules {

// Bins (1/K) sum_j x_j exp(-2 pi i n j / K) for n in [n_lo, n_hi], where K is
// the sample count. Direct summation against an exact twiddle table.
inline std::vector<std::complex<double>> dft_bins(std::span<const std::complex<double>> x,
                                                  int n_lo, int n_hi) {
  const long long k = static_cast<long long>(x.size());
  std::vector<std::complex<double>> twiddle(static_cast<std::size_t>(k));
  for (long long j = 0; j < k; ++j) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(k);
    twiddle[static_cast<std::size_t>(j)] = {std::cos(angle), std::sin(angle)};
  }
  std::vector<std::complex<double>> out;
  out.reserve(static_cast<std::size_t>(n_hi - n_lo + 1));
  for (int n = n_lo; n <= n_hi; ++n) {
    const long long step = ((n % k) + k) % k;
    std::complex<double> acc = 0.0;
    long long idx = 0;
    for (long long j = 0; j < k; ++j) {
      acc += x[static_cast<std::size_t>(j)] * twiddle[static_cast<std::size_t>(idx)];
      idx += step;
      if (idx >= k) idx -= k;
    }
    out.push_back(acc / static_cast<double>(k));
  }
  return out;
}

// Real signal sampled uniformly over whole periods: dc + sum_h
// (cos_h cos(h w t) + sin_h sin(h w t)).
struct RealHarmonics {
  double dc = 0.0;
  std::vector<double> cos_amps;  // h = 1, 2, ...
  std::vector<double> sin_amps;
};

// `periods` whole periods of the fundamental are covered by the samples.
inline RealHarmonics real_harmonics(std::span<const double> samples, int periods, int h_max) {
  std::vector<std::complex<double>> x(samples.begin(), samples.end());
  RealHarmonics out;
  const auto bins = dft_bins(x, 0, h_max * periods);
  out.dc = bins[0].real();
  for (int h = 1; h <= h_max; ++h) {
    const auto c = bins[static_cast<std::size_t>(h * periods)];
    // x = dc + sum 2 Re(c e^{i h w t}) = dc + 2 Re c cos - 2 Im c sin
    out.cos_amps.push_back(2.0 * c.real());
    out.sin_amps.push_back(-2.0 * c.imag());
  }
  return out;
}

}  // namespace besselrules

#endif  // BESSELRULES_FOURIER_HPP_
