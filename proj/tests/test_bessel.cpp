#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "besselrules/bessel.hpp"
#include "besselrules/oracles.hpp"

using namespace besselrules;

namespace {

// Reference values below were computed with mpmath at 40 digits.
constexpr double kJ1At2 = 0.57672480775687338720;
constexpr double kJ5At3 = 0.043028434877047583925;
constexpr double kJ10At30 = -0.12987689399858876819;

const double kGrid[] = {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(BesselInt, ValuesAtZero) {
  EXPECT_EQ(bessel_j_int(0, 0.0), 1.0);
  EXPECT_EQ(bessel_j_int(3, 0.0), 0.0);
  EXPECT_EQ(bessel_j_int(-3, 0.0), 0.0);
}

TEST(BesselInt, MatchesReferenceValues) {
  EXPECT_LT(rel(bessel_j_int(1, 2.0), kJ1At2), 1e-14);
  EXPECT_LT(rel(bessel_j_int(5, 3.0), kJ5At3), 1e-13);
  EXPECT_LT(rel(bessel_j_int(10, 30.0), kJ10At30), 1e-13);
  EXPECT_LT(rel(bessel_j_int(2, 1.5), 0.23208767214421472724), 1e-14);
}

TEST(BesselInt, LargeArgumentsMatchReference) {
  EXPECT_LT(rel(bessel_j_int(0, 1e6), 0.00033104301373987374099), 1e-12);
  EXPECT_LT(rel(bessel_j_int(20, 1e6), 0.00033118820085563614687), 1e-12);
  EXPECT_LT(rel(bessel_j_int(5, 1000.0), 0.0050254069452331860742), 1e-12);
  EXPECT_LT(rel(bessel_j_int(15, 1000.0), -0.0074691999859874155860), 1e-12);
  EXPECT_LT(rel(bessel_j_int(1, 12345.678), -0.0071808949647393734245), 1e-12);
}

TEST(BesselInt, TinyValuesDeepInTheTail) {
  // J_100(10) ~ 6.597e-89
  EXPECT_LT(rel(bessel_j_int(100, 10.0), 6.5973160641553809722e-89), 1e-12);
  EXPECT_EQ(bessel_j_int(2000, 1.0), 0.0);
}

TEST(BesselInt, QuadratureOracleAgreesOnGrid) {
  for (double y : kGrid)
    for (int n = -30; n <= 30; ++n)
      EXPECT_NEAR(bessel_j_int(n, y), bessel_j_quadrature_oracle(n, y), 1e-11) << "n=" << n << " y=" << y;
  EXPECT_NEAR(bessel_j_quadrature_oracle(1, 2.0), kJ1At2, 1e-13);
  EXPECT_NEAR(bessel_j_quadrature_oracle(5, 3.0), bessel_j_int(5, 3.0), 1e-13);
}

TEST(BesselInt, ParityIsExact) {
  for (double y : kGrid)
    for (int n = 0; n <= 40; ++n) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      EXPECT_EQ(bessel_j_int(-n, y), sign * bessel_j_int(n, y));
      EXPECT_EQ(bessel_j_int(n, -y), sign * bessel_j_int(n, y));
    }
  EXPECT_EQ(bessel_j_int(-2, 1.5), bessel_j_int(2, 1.5));
}

TEST(BesselInt, RejectsBadArguments) {
  EXPECT_THROW(bessel_j_int(0, std::nan("")), InvalidArgument);
  EXPECT_THROW(bessel_j_int(0, INFINITY), InvalidArgument);
  EXPECT_THROW(bessel_j_int(0, 2e6), InvalidArgument);
  EXPECT_THROW(bessel_j_row(-1, 1.0), InvalidArgument);
}

TEST(BesselRow, ZeroArgument) {
  const BesselRow r = bessel_j_row(4, 0.0);
  ASSERT_EQ(r.values.size(), 5u);
  EXPECT_EQ(r.values[0], 1.0);
  for (int n = 1; n <= 4; ++n) EXPECT_EQ(r.values[static_cast<std::size_t>(n)], 0.0);
}

TEST(BesselRow, AgreesWithPointEvaluation) {
  EXPECT_LT(rel(bessel_j_row(10, 2.0)(1), bessel_j_int(1, 2.0)), 1e-13);
  for (double y : {0.1, 1.0, 5.0, 30.0, 150.0, 1e4, 1e6}) {
    const int top = truncation_bound(y, 1e-15);
    const BesselRow row = bessel_j_row(std::min(top, 200), y);
    for (int n = 0; n <= row.order_max; ++n) {
      const double a = row(n), b = bessel_j_int(n, y);
      if (std::abs(b) > 1e-250) {
        EXPECT_LT(std::abs(a - b), 1e-13 * std::max(std::abs(b), 1e-3 * std::abs(row(0)) + 1e-300) + 1e-300)
            << "n=" << n << " y=" << y;
      }
    }
  }
}

TEST(BesselRow, EvenSumNormalization) {
  for (double y : kGrid) {
    const BesselRow row = bessel_j_row(truncation_bound(y, 1e-15), y);
    double s = row(0);
    for (int m = 2; m <= row.order_max; m += 2) s += 2.0 * row(m);
    EXPECT_NEAR(s, 1.0, 1e-13) << y;
  }
}

TEST(BesselRow, SquaresSumToOne) {
  for (double y : kGrid) {
    const BesselRow row = bessel_j_row(truncation_bound(y, 1e-15), y);
    double s = row(0) * row(0);
    for (int n = 1; n <= row.order_max; ++n) s += 2.0 * row(n) * row(n);
    EXPECT_NEAR(s, 1.0, 1e-12) << y;
  }
}

TEST(BesselRow, ThreeTermRecursion) {
  for (double y : kGrid) {
    const int top = truncation_bound(y, 1e-15);
    const BesselRow row = bessel_j_row(top + 1, y);
    for (int n = -top; n <= top; ++n) {
      const double lhs = 2.0 * n * row(n);
      const double rhs = y * (row(n + 1) + row(n - 1));
      const double scale = std::max({1.0, std::abs(y * row(n + 1)), std::abs(y * row(n - 1))});
      EXPECT_LE(std::abs(lhs - rhs), 1e-12 * scale) << "n=" << n << " y=" << y;
    }
  }
}

TEST(TruncationBound, SmallArgument) { EXPECT_GE(truncation_bound(0.0, 1e-15), 1); }

TEST(TruncationBound, TailIsBelowTolerance) {
  for (double tol : {1e-6, 1e-10, 1e-15, 1e-17})
    for (double y : {0.0, 0.3, 2.0, 5.0, 30.0, 100.0, 1000.0, 1e5}) {
      const int n0 = truncation_bound(y, tol);
      for (int n = n0; n <= n0 + 40; ++n)
        EXPECT_LT(std::abs(bessel_j_int(n, y)), tol) << "y=" << y << " tol=" << tol << " n=" << n;
    }
}

TEST(TruncationBound, ScanAtFive) {
  const int n0 = truncation_bound(5.0, 1e-15);
  EXPECT_LT(std::abs(bessel_j_int(n0, 5.0)), 1e-15);
  // and not absurdly generous
  EXPECT_LT(n0, 40);
}

TEST(TruncationBound, AtLeastTwiceTheIndex) { EXPECT_GE(truncation_bound(2.0, 1e-15), 4); }

TEST(TruncationBound, RejectsBadTolerance) {
  EXPECT_THROW(truncation_bound(1.0, 0.0), InvalidArgument);
  EXPECT_THROW(truncation_bound(1.0, 1.0), InvalidArgument);
}

TEST(QuadratureOracle, TrivialIntegrals) {
  EXPECT_NEAR(bessel_j_quadrature_oracle(0, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(bessel_j_quadrature_oracle(1, 0.0), 0.0, 1e-15);
  EXPECT_THROW(bessel_j_quadrature_oracle(201, 1.0), InvalidArgument);
  EXPECT_THROW(bessel_j_quadrature_oracle(1, 101.0), InvalidArgument);
}

TEST(LnGamma, IntegerPoints) {
  EXPECT_NEAR(std::abs(ln_gamma_complex({1.0, 0.0})), 0.0, 1e-14);
  EXPECT_NEAR(ln_gamma_complex({5.0, 0.0}).real(), std::log(24.0), 1e-13);
  EXPECT_NEAR(ln_gamma_complex({5.0, 0.0}).imag(), 0.0, 1e-14);
}

TEST(LnGamma, ReflectionIdentity) {
  const Complex z(0.5, 1.0);
  const Complex product = std::exp(ln_gamma_complex(z) + ln_gamma_complex(1.0 - z));
  const Complex expected = std::numbers::pi / std::sin(std::numbers::pi * z);
  EXPECT_LT(std::abs(product - expected) / std::abs(expected), 1e-12);
}

TEST(LnGamma, ReferenceValues) {
  const auto check = [](Complex z, Complex want) {
    const Complex got = ln_gamma_complex(z);
    EXPECT_LT(std::abs(got - want), 1e-12 * std::max(1.0, std::abs(want))) << z;
  };
  check({0.5, 1.0}, {-0.65279064420437291527, -0.95500772434256910956});
  check({-3.3, 20.0}, {-41.903008338960321536, 33.588771664389882170});
  check({-3.3, -200.0}, {-333.37415747031160073, -853.65855769794512149});
}

TEST(LnGamma, RecurrenceOnGrid) {
  // ln Gamma(z + 1) - ln Gamma(z) - ln z is a multiple of 2 pi i
  for (double x : {-7.5, -2.3, 0.2, 1.7, 6.0, 30.0})
    for (double y : {-40.0, -3.0, -0.4, 0.6, 5.0, 45.0}) {
      const Complex z(x, y);
      const Complex d = ln_gamma_complex(z + 1.0) - ln_gamma_complex(z) - std::log(z);
      EXPECT_NEAR(d.real(), 0.0, 1e-11) << z;
      const double turns = d.imag() / (2.0 * std::numbers::pi);
      EXPECT_NEAR(turns, std::round(turns), 1e-11) << z;
    }
}

TEST(LnGamma, PolesThrow) {
  EXPECT_THROW(ln_gamma_complex({0.0, 0.0}), PoleError);
  EXPECT_THROW(ln_gamma_complex({-3.0, 0.0}), PoleError);
}

TEST(ComplexOrder, Trivial) {
  EXPECT_EQ(bessel_j_complex_order({0.0, 0.0}, 0.0), Complex(1.0));
  const Complex j2 = bessel_j_complex_order({2.0, 0.0}, 1.7);
  EXPECT_LT(std::abs(j2 - bessel_j_int(2, 1.7)) / std::abs(j2), 1e-12);
}

TEST(ComplexOrder, ReferenceValue) {
  const Complex want(0.76884983711450978815, 0.12594007933668000002);
  const Complex got = bessel_j_complex_order({1.0, -0.8}, 2.0);
  EXPECT_LT(std::abs(got - want) / std::abs(want), 1e-11);
}

TEST(ComplexOrder, IntegerOrdersMatch) {
  for (double z : {0.3, 1.0, 2.0, 5.0, 10.0})
    for (int n = -6; n <= 12; ++n) {
      const Complex got = bessel_j_complex_order({static_cast<double>(n), 0.0}, z);
      const double want = bessel_j_int(n, z);
      EXPECT_LT(std::abs(got - want), 1e-11 * std::abs(want) + 1e-300) << n << " " << z;
    }
}

TEST(ComplexOrder, PreconditionsAndDivergence) {
  EXPECT_THROW(bessel_j_complex_order({0.0, 51.0}, 1.0), InvalidArgument);
  EXPECT_THROW(bessel_j_complex_order({0.5, 0.0}, -1.0), InvalidArgument);
  EXPECT_THROW(bessel_j_complex_order({0.5, 1.0}, 2000.0), ConvergenceError);
}
