#ifndef BESSELRULES_SUM_RULES_HPP_
#define BESSELRULES_SUM_RULES_HPP_

// Moment sums of Bessel products, their closed forms, and the generalized
// Bessel functions of two-argument modulations. Every closed form has a
// truncated brute-force partner so the two can be compared.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "besselrules/bessel.hpp"
#include "besselrules/coefficients.hpp"
#include "besselrules/errors.hpp"
#include "besselrules/fourier.hpp"

namespace besselrules {

inline constexpr double kBruteTolerance = 1e-17;

// Extra orders beyond truncation_bound for sums weighted by n^k.
inline int brute_margin(int k) { return std::max(8, 2 * k); }

enum class RuleId {
  b_ks,
  b_ks_parity,
  addition,
  alternating,
  jcs_rule,
  jbar_rule,
  modulation_energy,
  modulation_first_moment,
  recursion,
  newberger_vs_direct,
  series_vs_direct,
  negative_s_symmetry,
};

inline std::string to_string(RuleId id) {
  switch (id) {
    case RuleId::b_ks: return "b_ks";
    case RuleId::b_ks_parity: return "b_ks_parity";
    case RuleId::addition: return "addition";
    case RuleId::alternating: return "alternating";
    case RuleId::jcs_rule: return "jcs_rule";
    case RuleId::jbar_rule: return "jbar_rule";
    case RuleId::modulation_energy: return "modulation_energy";
    case RuleId::modulation_first_moment: return "modulation_first_moment";
    case RuleId::recursion: return "recursion";
    case RuleId::newberger_vs_direct: return "newberger_vs_direct";
    case RuleId::series_vs_direct: return "series_vs_direct";
    case RuleId::negative_s_symmetry: return "negative_s_symmetry";
  }
  return "unknown";
}

struct SumRuleReport {
  RuleId rule_id{};
  std::vector<std::pair<std::string, double>> parameters;  // insertion order kept
  Complex closed_form;
  Complex brute_force;
  int truncation_order = 0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;

  static SumRuleReport make(RuleId id, std::vector<std::pair<std::string, double>> params,
                            Complex closed, Complex brute, int truncation) {
    SumRuleReport r;
    r.rule_id = id;
    r.parameters = std::move(params);
    r.closed_form = closed;
    r.brute_force = brute;
    r.truncation_order = truncation;
    r.abs_residual = std::abs(closed - brute);
    r.rel_residual = r.abs_residual / std::max(1e-300, std::abs(closed));
    return r;
  }

  // Absolute test for small closed forms, relative for large ones.
  bool passes(double tol) const {
    return abs_residual <= tol * std::max(1.0, std::abs(closed_form));
  }
};

// ---------------------------------------------------------------------------
// B_{k,s} = sum_n n^k J_n(M) J_{n-s}(M)

inline double b_ks_closed(const CoeffTable& table, int k, int s, double M) {
  if (k < 0) throw InvalidArgument("b_ks_closed: k must be non-negative");
  if (std::abs(s) > k) return 0.0;
  return eval_coeff(table, k, s, M);
}

inline double b_ks_closed(int k, int s, double M) {
  if (k < 0) throw InvalidArgument("b_ks_closed: k must be non-negative");
  if (std::abs(s) > k) return 0.0;
  return b_ks_closed(build_coeff_table(k), k, s, M);
}

namespace detail {

inline double int_power(double base, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

struct TruncatedSum {
  double value = 0.0;
  int order = 0;
};

inline TruncatedSum b_ks_brute_impl(int k, int s, double M, double tol) {
  if (k < 0) throw InvalidArgument("b_ks_brute: k must be non-negative");
  if (!(tol > 0.0 && tol < 1.0)) throw InvalidArgument("b_ks_brute: tol must lie in (0, 1)");
  const int n_cut = truncation_bound(std::abs(M), tol) + brute_margin(k);
  const BesselRow row = bessel_j_row(n_cut + std::abs(s), M);
  double sum = 0.0;
  for (int n = -n_cut; n <= n_cut; ++n)
    sum += int_power(static_cast<double>(n), k) * row(n) * row(n - s);
  return {sum, n_cut};
}

}  // namespace detail

inline double b_ks_brute(int k, int s, double M, double tol = 1e-15) {
  return detail::b_ks_brute_impl(k, s, M, tol).value;
}

// ---------------------------------------------------------------------------
// Addition formula and its y1 = y2 companion.

// (sum_m C_{k,q-m}(y1) J_m(y1+y2), sum_n (i n)^k J_n(y1) J_{q-n}(y2))
inline std::pair<Complex, Complex> addition_formula_sides(int k, int q, double y1, double y2,
                                                          const CoeffTable* table = nullptr) {
  if (k < 0) throw InvalidArgument("addition_formula_sides: k must be non-negative");
  CoeffTable local;
  if (table == nullptr || table->k_max() < k) {
    local = build_coeff_table(k);
    table = &local;
  }
  const std::complex<double> ik = std::pow(Complex(0.0, 1.0), k);

  const BesselRow sum_row = bessel_j_row(std::abs(q) + k, y1 + y2);
  double lhs = 0.0;
  for (int m = q - k; m <= q + k; ++m) lhs += eval_coeff(*table, k, q - m, y1) * sum_row(m);

  const int n_cut = truncation_bound(std::abs(y1), kBruteTolerance) + brute_margin(k);
  const BesselRow r1 = bessel_j_row(n_cut, y1);
  const BesselRow r2 = bessel_j_row(n_cut + std::abs(q), y2);
  double rhs = 0.0;
  for (int n = -n_cut; n <= n_cut; ++n)
    rhs += detail::int_power(static_cast<double>(n), k) * r1(n) * r2(q - n);
  return {ik * lhs, ik * rhs};
}

// (sum_n (-1)^n n^k J_n(y) J_{n-q}(y), ((-1)^q / i^k) sum_m C_{k,q-m}(y) J_m(2y))
inline std::pair<Complex, Complex> alternating_sum_sides(int k, int q, double y,
                                                         const CoeffTable* table = nullptr) {
  if (k < 0) throw InvalidArgument("alternating_sum_sides: k must be non-negative");
  CoeffTable local;
  if (table == nullptr || table->k_max() < k) {
    local = build_coeff_table(k);
    table = &local;
  }
  const int n_cut = truncation_bound(std::abs(y), kBruteTolerance) + brute_margin(k);
  const BesselRow row = bessel_j_row(n_cut + std::abs(q), y);
  double lhs = 0.0;
  for (int n = -n_cut; n <= n_cut; ++n) {
    const double term = detail::int_power(static_cast<double>(n), k) * row(n) * row(n - q);
    lhs += (n % 2 == 0) ? term : -term;
  }
  const BesselRow doubled = bessel_j_row(std::abs(q) + k, 2.0 * y);
  double rhs = 0.0;
  for (int m = q - k; m <= q + k; ++m) rhs += eval_coeff(*table, k, q - m, y) * doubled(m);
  if (q % 2 != 0) rhs = -rhs;
  return {Complex(lhs), Complex(rhs)};
}

// ---------------------------------------------------------------------------
// Generalized Bessel functions.

namespace detail {

// J^{cs}_n for every |n| <= x_cut + y_cut; zero beyond.
struct JcsSpectrum {
  int extent = 0;
  std::vector<Complex> values;  // index n + extent
  Complex operator()(int n) const {
    if (std::abs(n) > extent) return 0.0;
    return values[static_cast<std::size_t>(n + extent)];
  }
};

inline Complex jcs_from_rows(int n, const BesselRow& rx, int x_cut, const BesselRow& ry, int y_cut) {
  static constexpr Complex kPowI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const int lo = std::max(-x_cut, n - y_cut);
  const int hi = std::min(x_cut, n + y_cut);
  Complex sum = 0.0;
  for (int q = lo; q <= hi; ++q) sum += kPowI[((q % 4) + 4) % 4] * (rx(q) * ry(n - q));
  return sum;
}

inline JcsSpectrum jcs_spectrum(double x, double y) {
  const int x_cut = truncation_bound(std::abs(x), kBruteTolerance) + 8;
  const int y_cut = truncation_bound(std::abs(y), kBruteTolerance) + 8;
  const BesselRow rx = bessel_j_row(x_cut, x);
  const BesselRow ry = bessel_j_row(x_cut + y_cut, y);
  JcsSpectrum s;
  s.extent = x_cut + y_cut;
  for (int n = -s.extent; n <= s.extent; ++n) s.values.push_back(jcs_from_rows(n, rx, x_cut, ry, y_cut));
  return s;
}

inline void check_finite(double v, const char* who) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string(who) + ": arguments must be finite");
}

}  // namespace detail

// sum_q i^q J_q(x) J_{n-q}(y): the sidebands of exp(i (x cos t + y sin t)).
inline Complex jcs(int n, double x, double y) {
  detail::check_finite(x, "jcs");
  detail::check_finite(y, "jcs");
  const int x_cut = truncation_bound(std::abs(x), kBruteTolerance) + 8;
  const int y_cut = truncation_bound(std::abs(y), kBruteTolerance) + 8;
  const BesselRow rx = bessel_j_row(x_cut, x);
  const BesselRow ry = bessel_j_row(x_cut + y_cut + std::abs(n), y);
  return detail::jcs_from_rows(n, rx, x_cut, ry, y_cut);
}

// (2 sum_n n J^{cs}_n conj(J^{cs}_{n-q}), (y + i x)[q = 1] + (y - i x)[q = -1])
inline std::pair<Complex, Complex> jcs_sum_rule_sides(int q, double x, double y) {
  detail::check_finite(x, "jcs_sum_rule_sides");
  detail::check_finite(y, "jcs_sum_rule_sides");
  const auto spec = detail::jcs_spectrum(x, y);
  Complex lhs = 0.0;
  for (int n = -spec.extent; n <= spec.extent; ++n)
    lhs += static_cast<double>(n) * spec(n) * std::conj(spec(n - q));
  lhs *= 2.0;
  Complex rhs = 0.0;
  if (q == 1) rhs = Complex(y, x);
  if (q == -1) rhs = Complex(y, -x);
  return {lhs, rhs};
}

namespace detail {

struct JbarSpectrum {
  int extent = 0;
  std::vector<double> values;
  double operator()(int n) const {
    if (std::abs(n) > extent) return 0.0;
    return values[static_cast<std::size_t>(n + extent)];
  }
};

inline double jbar_from_rows(int n, const BesselRow& r1, int cut1, const BesselRow& r2, int cut2) {
  // need |n - 2q| <= cut1 and |q| <= cut2
  const int lo = std::max(-cut2, static_cast<int>(std::ceil((n - cut1) / 2.0)));
  const int hi = std::min(cut2, static_cast<int>(std::floor((n + cut1) / 2.0)));
  double sum = 0.0;
  for (int q = lo; q <= hi; ++q) sum += r2(q) * r1(n - 2 * q);
  return sum;
}

inline JbarSpectrum jbar_spectrum(double y1, double y2) {
  const int cut1 = truncation_bound(std::abs(y1), kBruteTolerance) + 8;
  const int cut2 = truncation_bound(std::abs(y2), kBruteTolerance) + 8;
  const BesselRow r1 = bessel_j_row(cut1, y1);
  const BesselRow r2 = bessel_j_row(cut2, y2);
  JbarSpectrum s;
  s.extent = cut1 + 2 * cut2;
  for (int n = -s.extent; n <= s.extent; ++n) s.values.push_back(jbar_from_rows(n, r1, cut1, r2, cut2));
  return s;
}

}  // namespace detail

// sum_q J_q(y2) J_{n-2q}(y1): the sidebands of exp(i (y1 sin t + y2 sin 2t)).
inline double jbar(int n, double y1, double y2) {
  detail::check_finite(y1, "jbar");
  detail::check_finite(y2, "jbar");
  const int cut1 = truncation_bound(std::abs(y1), kBruteTolerance) + 8;
  const int cut2 = truncation_bound(std::abs(y2), kBruteTolerance) + 8;
  return detail::jbar_from_rows(n, bessel_j_row(cut1, y1), cut1, bessel_j_row(cut2, y2), cut2);
}

// (sum_n n Jbar_n Jbar_{n-s}, (y1/2)[|s| = 1] + y2 [|s| = 2])
inline std::pair<double, double> jbar_sum_rule_sides(int s, double y1, double y2) {
  detail::check_finite(y1, "jbar_sum_rule_sides");
  detail::check_finite(y2, "jbar_sum_rule_sides");
  const auto spec = detail::jbar_spectrum(y1, y2);
  double lhs = 0.0;
  for (int n = -spec.extent; n <= spec.extent; ++n) lhs += n * spec(n) * spec(n - s);
  double rhs = 0.0;
  if (std::abs(s) == 1) rhs = y1 / 2.0;
  if (std::abs(s) == 2) rhs = y2;
  return {lhs, rhs};
}

// ---------------------------------------------------------------------------
// Arbitrary periodic phase modulation phi(t) = sum_n phi_n exp(i n W t).

class GeneralModulation {
 public:
  // Coefficients for n >= 0 may be given alone; negative ones are filled in
  // by conjugation. When both n and -n are given they must be conjugate.
  GeneralModulation(std::map<int, Complex> coeffs, double fundamental)
      : fundamental_(fundamental) {
    if (!(fundamental > 0.0) || !std::isfinite(fundamental))
      throw InvalidArgument("GeneralModulation: fundamental must be positive and finite");
    for (const auto& [n, c] : coeffs) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw InvalidArgument("GeneralModulation: coefficient " + std::to_string(n) + " is not finite");
      if (n == 0 && c.imag() != 0.0)
        throw InvalidArgument("GeneralModulation: phi_0 must be real");
      const auto mirror = coeffs.find(-n);
      if (n != 0 && mirror != coeffs.end()) {
        const double scale = std::max({1.0, std::abs(c), std::abs(mirror->second)});
        if (std::abs(mirror->second - std::conj(c)) > 1e-14 * scale)
          throw InvalidArgument("GeneralModulation: phi_" + std::to_string(-n) +
                                " is not the conjugate of phi_" + std::to_string(n));
      }
    }
    for (const auto& [n, c] : coeffs) {
      if (c == Complex(0.0)) continue;
      if (n >= 0) {
        coeffs_[n] = c;
        if (n > 0) coeffs_[-n] = std::conj(c);
      } else if (coeffs.find(-n) == coeffs.end()) {
        coeffs_[n] = c;
        coeffs_[-n] = std::conj(c);
      }
    }
  }

  // phi(t) = M sin(W t): phi_{+-1} = -+ i M / 2.
  static GeneralModulation sinusoidal(double M, double fundamental) {
    return GeneralModulation({{1, Complex(0.0, -M / 2.0)}}, fundamental);
  }
  // phi(t) = y1 sin(W t) + y2 sin(2 W t)
  static GeneralModulation two_tone(double y1, double y2, double fundamental) {
    return GeneralModulation({{1, Complex(0.0, -y1 / 2.0)}, {2, Complex(0.0, -y2 / 2.0)}}, fundamental);
  }

  const std::map<int, Complex>& coefficients() const { return coeffs_; }
  Complex coefficient(int n) const {
    const auto it = coeffs_.find(n);
    return it == coeffs_.end() ? Complex(0.0) : it->second;
  }
  double fundamental() const { return fundamental_; }
  int max_harmonic() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

  // phi at the angle theta = W t.
  double phase_at_angle(double theta) const {
    double v = coefficient(0).real();
    for (const auto& [n, c] : coeffs_)
      if (n > 0) v += 2.0 * (c * std::polar(1.0, n * theta)).real();
    return v;
  }
  double phase(double t) const { return phase_at_angle(fundamental_ * t); }

  // d phi / dt = Re sum_n i n W phi_n exp(i n W t)
  double phase_derivative(double t) const {
    double v = 0.0;
    for (const auto& [n, c] : coeffs_)
      if (n > 0)
        v += 2.0 * (Complex(0.0, n * fundamental_) * c * std::polar(1.0, n * fundamental_ * t)).real();
    return v;
  }

  // Sideband order beyond which |G_n| < tol: each harmonic h with amplitude
  // 2|phi_h| spreads the spectrum by h * truncation_bound(2|phi_h|).
  int support_bound(double tol) const {
    int total = 0;
    for (const auto& [n, c] : coeffs_)
      if (n > 0) total += n * truncation_bound(2.0 * std::abs(c), tol);
    return total;
  }

 private:
  std::map<int, Complex> coeffs_;
  double fundamental_;
};

struct SidebandSpectrum {
  int n_max = 0;
  std::vector<Complex> amplitudes;  // index n + n_max
  int samples = 0;
  double alias_estimate = 0.0;   // largest |bin| in the top half of the sampled band
  double truncation_tail = 0.0;  // |1 - sum_{|n| <= n_max} |G_n|^2|

  Complex operator()(int n) const {
    if (std::abs(n) > n_max) return 0.0;
    return amplitudes[static_cast<std::size_t>(n + n_max)];
  }
};

inline constexpr double kSidebandTolerance = 1e-12;

// G_n for |n| <= n_max from K uniform samples of exp(i phi) over one period.
inline SidebandSpectrum general_sidebands(const GeneralModulation& mod, int n_max,
                                          double tol = kSidebandTolerance) {
  if (n_max < 0) throw InvalidArgument("general_sidebands: n_max must be non-negative");
  const int support = mod.support_bound(kBruteTolerance);
  const long long need = std::max<long long>({8LL * n_max, 2LL * (support + n_max) + 2, 64});
  const long long k = static_cast<long long>(std::bit_ceil(static_cast<unsigned long long>(need)));
  if (k > (1LL << 24)) throw AccuracyError("general_sidebands: required sample count exceeds 2^24");

  std::vector<Complex> x(static_cast<std::size_t>(k));
  for (long long j = 0; j < k; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(k);
    x[static_cast<std::size_t>(j)] = std::polar(1.0, mod.phase_at_angle(theta));
  }

  SidebandSpectrum out;
  out.n_max = n_max;
  out.samples = static_cast<int>(k);
  out.amplitudes = dft_bins(x, -n_max, n_max);

  // Bins near the Nyquist edge hold only aliased tail; they bound the error.
  const int edge_lo = static_cast<int>(k / 4);
  const int edge_hi = static_cast<int>(k / 2) - 1;
  const int probe = std::min(edge_hi - edge_lo + 1, 64);
  const auto hi_bins = dft_bins(x, edge_hi - probe + 1, edge_hi);
  const auto lo_bins = dft_bins(x, -edge_hi, -edge_hi + probe - 1);
  for (const auto& b : hi_bins) out.alias_estimate = std::max(out.alias_estimate, std::abs(b));
  for (const auto& b : lo_bins) out.alias_estimate = std::max(out.alias_estimate, std::abs(b));

  double energy = 0.0;
  for (const auto& g : out.amplitudes) energy += std::norm(g);
  out.truncation_tail = std::abs(1.0 - energy);

  if (out.alias_estimate > tol)
    throw AccuracyError("general_sidebands: aliasing estimate " + std::to_string(out.alias_estimate) +
                        " exceeds tolerance");
  if (out.truncation_tail > tol)
    throw AccuracyError("general_sidebands: n_max=" + std::to_string(n_max) +
                        " leaves spectral weight " + std::to_string(out.truncation_tail) +
                        " outside the window (support bound " + std::to_string(support) + ")");
  return out;
}

struct ModulationRuleSums {
  Complex energy;                 // sum_n G_n conj(G_{n-s}); expected [s = 0]
  Complex first_moment;           // sum_n n G_n conj(G_{n-s})
  Complex expected_first_moment;  // i s phi_s
  int truncation_order = 0;
};

inline ModulationRuleSums general_modulation_rules(const GeneralModulation& mod, int s) {
  const int n_max = mod.support_bound(kBruteTolerance) + std::abs(s) + 8;
  const SidebandSpectrum g = general_sidebands(mod, n_max);
  ModulationRuleSums r;
  r.truncation_order = n_max;
  for (int n = -n_max; n <= n_max; ++n) {
    const Complex p = g(n) * std::conj(g(n - s));
    r.energy += p;
    r.first_moment += static_cast<double>(n) * p;
  }
  r.expected_first_moment = Complex(0.0, s) * mod.coefficient(s);
  return r;
}

// ---------------------------------------------------------------------------

// (q^k J_q(y), sum_{|n| <= k} D_{k,n}(y) J_{q-n}(y))
inline std::pair<double, double> recursion_sides(int k, int q, double y, const CoeffTable* table = nullptr) {
  if (k < 0) throw InvalidArgument("recursion_residual: k must be non-negative");
  CoeffTable local;
  if (table == nullptr || table->k_max() < k) {
    local = build_coeff_table(k);
    table = &local;
  }
  const BesselRow row = bessel_j_row(std::abs(q) + k, y);
  const double lhs = detail::int_power(static_cast<double>(q), k) * row(q);
  double rhs = 0.0;
  for (int n = -k; n <= k; ++n) rhs += eval_coeff(*table, k, n, y) * row(q - n);
  return {lhs, rhs};
}

inline double recursion_residual(int k, int q, double y, const CoeffTable* table = nullptr) {
  const auto [lhs, rhs] = recursion_sides(k, q, y, table);
  return std::abs(lhs - rhs);
}

}  // namespace besselrules

#endif  // BESSELRULES_SUM_RULES_HPP_
