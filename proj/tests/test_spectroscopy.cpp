#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "besselrules/bessel.hpp"
#include "besselrules/coefficients.hpp"
#include "besselrules/spectroscopy.hpp"
#include "besselrules/sum_rules.hpp"

using namespace besselrules;

namespace {

OscillatorParams optical(double delta, double Omega, double M) {
  OscillatorParams p;
  p.omega0 = 1e6;
  p.gamma = 1.0;
  p.force = 1.0;
  p.delta = delta;
  p.Omega = Omega;
  p.M = M;
  return p;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Oscillator, DerivedQuantities) {
  const OscillatorParams p = optical(0.7, 0.02, 1.0);
  EXPECT_DOUBLE_EQ(p.Delta(), 1.4);
  EXPECT_DOUBLE_EQ(p.eta(), 0.02);
  EXPECT_LT(std::abs(p.epsilon() - Complex(0.0, -0.04) / Complex(1.0, 1.4)), 1e-17);
  EXPECT_EQ(p.n_max(), 7);
  EXPECT_TRUE(p.perturbative_valid());
  EXPECT_DOUBLE_EQ(p.power_scale(), 0.5);
  EXPECT_FALSE(optical(0.0, 0.1, 1.0).perturbative_valid());
}

TEST(Oscillator, Validation) {
  OscillatorParams p = optical(0.0, 0.02, 1.0);
  p.gamma = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = optical(0.0, 0.02, -1.0);
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = optical(0.0, 0.0, 1.0);
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = optical(std::nan(""), 0.02, 1.0);
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(SidebandExtent, Values) {
  EXPECT_EQ(sideband_extent(0.0), 0);
  EXPECT_EQ(sideband_extent(1.0), 7);
  for (double M : {0.5, 2.0, 5.0, 20.0}) {
    const int n = sideband_extent(M);
    EXPECT_GE(std::abs(bessel_j_int(n, M)), kSidebandWeightFloor);
    for (int m = n + 1; m <= n + 30; ++m) EXPECT_LT(std::abs(bessel_j_int(m, M)), kSidebandWeightFloor);
  }
}

TEST(SteadyState, Limits) {
  OscillatorParams p = optical(0.0, 0.02, 0.0);
  p.omega0 = 10.0;
  p.gamma = 0.5;
  p.force = 2.0;
  EXPECT_LT(std::abs(steady_state_amplitude(p, 0.0) - 2.0 / 100.0), 1e-18);
  EXPECT_LT(std::abs(steady_state_amplitude(p, 10.0) - 2.0 / Complex(0.0, 5.0)), 1e-16);
  double best = 0.0, best_w = 0.0;
  for (double w = 9.0; w <= 11.0; w += 1e-4) {
    const double a = std::abs(steady_state_amplitude(p, w));
    if (a > best) {
      best = a;
      best_w = w;
    }
  }
  EXPECT_NEAR(best_w, 10.0, 0.01);
}

TEST(UnmodulatedPower, ResonanceAndLimits) {
  OscillatorParams p = optical(0.0, 0.02, 0.0);
  p.gamma = 0.3;
  p.force = 2.0;
  EXPECT_NEAR(average_power_unmodulated(p, p.omega0), 4.0 / 0.6, 1e-12);
  EXPECT_EQ(average_power_unmodulated(p, 0.0), 0.0);
  EXPECT_GE(average_power_unmodulated(p, p.omega0 * 3.0), 0.0);
}

TEST(UnmodulatedPower, LorentzianWithFirstCorrection) {
  for (double w0 : {1e3, 1e4, 1e5})
    for (double d : {-1.3, 0.7, 3.0}) {
      OscillatorParams p = optical(d, 0.02, 0.0);
      p.omega0 = w0;
      const double D = 2.0 * d;
      const double approx = 0.5 * (1.0 / (1 + D * D) + 0.5 * D * D * D / ((1 + D * D) * (1 + D * D)) / w0);
      EXPECT_LT(std::abs(average_power_unmodulated(p, w0 + d) - approx), 1.0 / (w0 * w0));
    }
}

TEST(ADirect, Examples) {
  EXPECT_EQ(a_s_direct(0, 0.0, 2.0, 0.3), Complex(0.5));
  EXPECT_EQ(a_s_direct(1, 0.0, 2.0, 0.3), Complex(0.0));
  // mpmath references
  EXPECT_LT(rel(a_s_direct(1, 1.0, 1.0, 0.1), Complex(-0.004879904339892530631, -0.04915065260973949230)), 1e-13);
  EXPECT_LT(rel(a_s_direct(0, 2.0, 0.5, 0.3), Complex(1.298997635623427152)), 1e-13);
  EXPECT_THROW(a_s_direct(0, 1.0, 0.0, 0.1), InvalidArgument);
}

TEST(ADirect, NegativeSymmetry) {
  for (double M : {0.5, 1.0, 2.0})
    for (double Omega : {0.1, 1.0, 2.0})
      for (int s = 1; s <= 4; ++s) {
        const Complex plus = a_s_direct(s, M, 1.0, Omega);
        const Complex want = (s % 2 == 0 ? 1.0 : -1.0) * std::conj(plus);
        EXPECT_LT(std::abs(a_s_direct(-s, M, 1.0, Omega) - want), 1e-12);
      }
}

TEST(ANewberger, Examples) {
  for (int s = 0; s <= 3; ++s)
    EXPECT_LT(std::abs(a_s_newberger(s, 0.0, 1.5, 0.4) - (s == 0 ? 1.0 / 1.5 : 0.0)), 1e-15) << s;
  EXPECT_LT(rel(a_s_newberger(1, 1.0, 1.0, 0.1), a_s_direct(1, 1.0, 1.0, 0.1, 1e-14)), 1e-8);
  EXPECT_LT(rel(a_s_newberger(0, 2.0, 0.5, 0.3), a_s_direct(0, 2.0, 0.5, 0.3)), 1e-8);
}

TEST(ANewberger, NegativeS) {
  for (int s = -3; s <= -1; ++s)
    EXPECT_LT(rel(a_s_newberger(s, 1.3, 1.0, 0.7), a_s_direct(s, 1.3, 1.0, 0.7)), 1e-10);
}

TEST(ANewberger, OverflowGuard) {
  EXPECT_THROW(a_s_newberger(1, 1.0, 1.0, 0.001), RangeError);
  EXPECT_NO_THROW(a_s_newberger(1, 1.0, 1.0, 1.0 / 200.0));
}

TEST(ASeries, Examples) {
  EXPECT_EQ(a_s_series(0, 0.0, 2.0, 0.3).value, Complex(0.5));
  EXPECT_LT(rel(a_s_series(1, 1.0, 1.0, 0.1, 40).value, a_s_newberger(1, 1.0, 1.0, 0.1)), 1e-10);
  for (double M : {0.4, 1.0, 2.5}) {
    const double gamma = 1.5, Omega = 0.6, c = gamma / Omega;
    const Complex leading = -(M / (2.0 * gamma)) / Complex(1.0, -c);
    EXPECT_LT(rel(a_s_series(1, M, gamma, Omega, 0).value, leading), 1e-15);
  }
  EXPECT_THROW(a_s_series(1, 1.0, 1.0, 0.1, 61), InvalidArgument);
  EXPECT_LT(a_s_series(1, 1.0, 1.0, 0.1, 40).last_term, 1e-30);
}

TEST(AChain, Grid) {
  for (double M : {0.5, 1.0, 2.0})
    for (double ratio : {0.5, 1.0, 3.0, 10.0})
      for (int s = 0; s <= 3; ++s) {
        const double gamma = 1.0, Omega = gamma / ratio;
        const Complex d = a_s_direct(s, M, gamma, Omega);
        const Complex n = a_s_newberger(s, M, gamma, Omega);
        const Complex r = a_s_series(s, M, gamma, Omega).value;
        EXPECT_LT(rel(n, d), 1e-8) << M << " " << ratio << " " << s;
        EXPECT_LT(rel(r, d), 1e-8);
        EXPECT_LT(rel(r, n), 1e-8);
      }
}

TEST(AGeometric, ZeroModulation) {
  for (int s = 0; s <= 3; ++s)
    for (int order : {0, 3, 7}) {
      const auto g = a_s_geometric(s, 0.0, 2.0, 0.01, order);
      EXPECT_EQ(g.value, Complex(s == 0 ? 0.5 : 0.0));
    }
}

TEST(AGeometric, ThirdOrderClosedForm) {
  for (double M : {0.5, 1.0, 2.0})
    for (double eta : {0.01, 0.05}) {
      const double gamma = 2.0;
      const Complex ie(0.0, eta);
      const Complex want = (M / (2 * gamma)) * (-ie - eta * eta + (1.0 + 0.75 * M * M) * ie * eta * eta);
      const auto g = a_s_geometric(1, M, gamma, eta * gamma, 3);
      EXPECT_LT(std::abs(g.value - want), 1e-15 * std::abs(want)) << M << " " << eta;
    }
}

TEST(AGeometric, ExpansionTermsAreExact) {
  const CoeffTable t = build_coeff_table(3);
  const auto terms = geometric_expansion_terms(t, 1, 3);
  ASSERT_EQ(terms.size(), 3u);
  DyadicPoly half_y = DyadicPoly::monomial(DyadicRational(BigInt(1), 1), 1);
  DyadicPoly third = half_y;
  third.add_term(3, DyadicRational(BigInt(3), 3));
  EXPECT_EQ(terms[0].power, 1);
  EXPECT_EQ(terms[0].phase, UnitPhase(3));  // -i
  EXPECT_EQ(terms[0].coefficient, half_y);
  EXPECT_EQ(terms[1].power, 2);
  EXPECT_EQ(terms[1].phase, UnitPhase(2));  // -1
  EXPECT_EQ(terms[1].coefficient, half_y);
  EXPECT_EQ(terms[2].power, 3);
  EXPECT_EQ(terms[2].phase, UnitPhase(1));  // +i
  EXPECT_EQ(terms[2].coefficient, third);
}

TEST(AGeometric, RemainderScalesAsFourthPower) {
  std::vector<double> xs, ys;
  for (double eta : {0.005, 0.01, 0.02, 0.05}) {
    const double diff = std::abs(a_s_geometric(1, 1.0, 1.0, eta, 3).value - a_s_direct(1, 1.0, 1.0, eta));
    xs.push_back(std::log(eta));
    ys.push_back(std::log(diff));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i] / xs.size(), my += ys[i] / ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) sxy += (xs[i] - mx) * (ys[i] - my), sxx += (xs[i] - mx) * (xs[i] - mx);
  EXPECT_NEAR(sxy / sxx, 4.0, 0.2);
}

TEST(AGeometric, DomainWarning) {
  EXPECT_FALSE(a_s_geometric(1, 1.0, 1.0, 0.05, 3).domain_warning);
  EXPECT_TRUE(a_s_geometric(1, 1.0, 1.0, 0.5, 3).domain_warning);
  EXPECT_THROW(a_s_geometric(build_coeff_table(2), 1, 1.0, 1.0, 0.05, 3), InvalidArgument);
}

TEST(ExactPower, NoModulation) {
  // omega0 + delta is exact for these offsets
  for (double d : {-2.0, 0.0, 0.75}) {
    const OscillatorParams p = optical(d, 0.02, 0.0);
    const auto h = modulated_power_exact(p);
    const double want = average_power_unmodulated(p, p.omega0 + d);
    EXPECT_LT(std::abs(h.dc - want), 1e-12 * want);
    for (int k = 1; k <= 2; ++k) {
      EXPECT_EQ(h.cos_amp(k), 0.0);
      EXPECT_EQ(h.sin_amp(k), 0.0);
    }
  }
}

TEST(ExactPower, ReferenceValues) {
  // mpmath, 40 digits
  const auto h = modulated_power_exact(optical(0.7, 0.02, 1.0));
  EXPECT_LT(std::abs(h.dc - 0.1689942670773057485), 1e-13);
  EXPECT_LT(std::abs(h.cos_amp(1) - -0.006395441786596333588), 1e-13);
  EXPECT_LT(std::abs(h.sin_amp(1) - -0.00004512573592456978604), 1e-13);
  EXPECT_LT(std::abs(h.cos_amp(2) - 0.0000752795661768701502), 1e-13);
  EXPECT_LT(std::abs(h.sin_amp(2) - 0.000004342430081554982732), 1e-13);
}

TEST(ExactPower, InvalidRegime) {
  OscillatorParams p = optical(0.0, 0.02, 1.0);
  p.omega0 = 0.01;
  EXPECT_THROW(modulated_power_exact(p), InvalidRegime);
}

TEST(ExactPower, EnergyPositivity) {
  for (double M : {0.3, 1.0, 3.0})
    for (double Omega : {0.02, 0.3, 2.0})
      for (double d = -5.0; d <= 5.0; d += 0.5) {
        const auto h = modulated_power_exact(optical(d, Omega, M));
        EXPECT_GE(h.dc, 0.0);
      }
}

TEST(ExactPower, PerturbativeBand) {
  for (double d = -2.5; d <= 2.5; d += 0.25) {
    const OscillatorParams p = optical(d, 0.02, 1.0);
    const auto exact = modulated_power_exact(p);
    const auto pert = modulated_power_perturbative(p);
    const double e3 = std::pow(std::abs(p.epsilon()), 3);
    EXPECT_LE(std::abs(exact.cos_amp(1) - pert.cos_amp(1)), 5.0 * e3 * p.power_scale()) << d;
    EXPECT_LE(std::abs(exact.sin_amp(1) - pert.sin_amp(1)), 5.0 * e3 * p.power_scale()) << d;
    EXPECT_LE(std::abs(exact.dc - pert.dc), 5.0 * e3 * p.power_scale()) << d;
  }
}

TEST(PerturbativePower, ResonanceValues) {
  const OscillatorParams p = optical(0.0, 0.02, 1.5);
  const auto h = modulated_power_perturbative(p);
  const double e = 2.0 * 1.5 * 0.02;
  EXPECT_EQ(h.cos_amp(1), 0.0);
  EXPECT_EQ(h.sin_amp(1), 0.0);
  EXPECT_NEAR(h.cos_amp(2), -0.5 * e * e * 0.5, 1e-17);
}

TEST(PerturbativePower, NoModulationIsLorentzian) {
  for (double d : {-1.0, 0.0, 0.3}) {
    const auto h = modulated_power_perturbative(optical(d, 0.02, 0.0));
    EXPECT_DOUBLE_EQ(h.dc, 0.5 / (1.0 + 4.0 * d * d));
    EXPECT_EQ(h.cos_amp(1), 0.0);
    EXPECT_EQ(h.sin_amp(1), 0.0);
    EXPECT_EQ(h.cos_amp(2), 0.0);
  }
}

TEST(PerturbativePower, FirstHarmonicIsLorentzianDerivative) {
  const double M = 1.0, Omega = 0.02, e = 2.0 * M * Omega;
  for (double D = -5.0; D <= 5.0; D += 0.25) {
    const auto plus = modulated_power_perturbative(optical(D / 2.0, Omega, M));
    const auto minus = modulated_power_perturbative(optical(-D / 2.0, Omega, M));
    EXPECT_NEAR(plus.cos_amp(1), -minus.cos_amp(1), 1e-17);
    const double h = 1e-5;
    const double deriv = (1.0 / (1 + (D + h) * (D + h)) - 1.0 / (1 + (D - h) * (D - h))) / (2 * h);
    EXPECT_NEAR(plus.cos_amp(1), 0.5 * e * deriv, 1e-10);
  }
}

TEST(GeneralPower, Reductions) {
  const OscillatorParams p = optical(0.7, 0.02, 1.0);
  const double lorentz = 0.5 / (1.0 + 1.4 * 1.4);
  EXPECT_DOUBLE_EQ(general_modulation_power(p, GeneralModulation({}, 0.02), 3.0), lorentz);

  const auto pert = modulated_power_perturbative(p);
  const auto mod = GeneralModulation::sinusoidal(1.0, 0.02);
  for (double t : {0.0, 10.0, 77.0, 200.0}) {
    const double want = lorentz + pert.cos_amp(1) * std::cos(0.02 * t);
    EXPECT_NEAR(general_modulation_power(p, mod, t), want, 1e-15);
  }
  const OscillatorParams centre = optical(0.0, 0.02, 1.0);
  for (double t : {0.0, 10.0, 77.0}) EXPECT_DOUBLE_EQ(general_modulation_power(centre, mod, t), 0.5);
}
