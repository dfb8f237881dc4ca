#ifndef BESSELRULES_COEFFICIENTS_HPP_
#define BESSELRULES_COEFFICIENTS_HPP_

// Coefficient polynomials of the k-th theta-derivative of exp(i y sin t):
//
//   d^k/dt^k exp(i y sin t) = exp(i y sin t) * sum_n C_{k,n}(y) exp(i n t).
//
// Everything here works with the real form D_{k,n} = C_{k,n} / i^k. Two
// independent constructions are provided: the three-term recursion
//
//   D_{k+1,n} = n D_{k,n} + (y/2)(D_{k,n+1} + D_{k,n-1}),   D_{0,n} = [n = 0]
//
// and the Faa di Bruno closed form summed over derivative partitions.

#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "besselrules/dyadic.hpp"
#include "besselrules/errors.hpp"

namespace besselrules {

inline constexpr int kMaxTableOrder = 64;
inline constexpr int kMaxFaaDiBrunoOrder = 30;

// i^quarter_turns.
class UnitPhase {
 public:
  constexpr UnitPhase() = default;
  constexpr explicit UnitPhase(long long quarter_turns)
      : turns_(static_cast<int>(((quarter_turns % 4) + 4) % 4)) {}

  constexpr int quarter_turns() const { return turns_; }
  constexpr bool is_real() const { return turns_ % 2 == 0; }
  // +1 or -1; only meaningful when is_real().
  constexpr int sign() const { return turns_ == 0 ? 1 : -1; }
  constexpr UnitPhase operator*(UnitPhase o) const { return UnitPhase(turns_ + o.turns_); }
  constexpr bool operator==(const UnitPhase&) const = default;

  std::string to_string() const {
    static const char* const names[] = {"1", "i", "-1", "-i"};
    return names[turns_];
  }

 private:
  int turns_ = 0;
};

// D_{k,n}(y) for 0 <= k <= k_max, |n| <= k; immutable after construction.
class CoeffTable {
 public:
  int k_max() const { return k_max_; }

  // Zero polynomial for |n| > k.
  const DyadicPoly& entry(int k, int n) const {
    if (k < 0 || k > k_max_)
      throw InvalidArgument("CoeffTable::entry: k=" + std::to_string(k) +
                            " outside [0, " + std::to_string(k_max_) + "]");
    if (std::abs(n) > k) return zero();
    return rows_[static_cast<std::size_t>(k)][static_cast<std::size_t>(n + k)];
  }

  // C_{k,n} = phase(k) * D_{k,n}.
  static UnitPhase phase(int k) { return UnitPhase(k); }

 private:
  friend CoeffTable build_coeff_table(int k_max);
  static const DyadicPoly& zero() {
    static const DyadicPoly z;
    return z;
  }

  int k_max_ = 0;
  std::vector<std::vector<DyadicPoly>> rows_;  // rows_[k][n + k]
};

inline CoeffTable build_coeff_table(int k_max) {
  if (k_max < 0 || k_max > kMaxTableOrder)
    throw InvalidArgument("build_coeff_table: k_max must lie in [0, 64], got " +
                          std::to_string(k_max));
  CoeffTable t;
  t.k_max_ = k_max;
  t.rows_.resize(static_cast<std::size_t>(k_max) + 1);
  t.rows_[0].push_back(DyadicPoly::monomial(1, 0));
  for (int k = 0; k < k_max; ++k) {
    auto& next = t.rows_[static_cast<std::size_t>(k) + 1];
    next.resize(static_cast<std::size_t>(2 * (k + 1) + 1));
    const auto at = [&](int n) -> const DyadicPoly& { return t.entry(k, n); };
    for (int n = -(k + 1); n <= k + 1; ++n) {
      DyadicPoly p = (at(n + 1) + at(n - 1)).times_half_y();
      if (n != 0 && std::abs(n) <= k) p += at(n).scaled(n);
      next[static_cast<std::size_t>(n + k + 1)] = std::move(p);
    }
  }
  return t;
}

// Visits every (m_1, .., m_k) >= 0 with sum_j j m_j = k, in descending
// lexicographic order: (k, 0, .., 0) first, (0, .., 0, 1) last.
inline void for_each_derivative_partition(int k, const std::function<void(const std::vector<int>&)>& visit) {
  if (k < 1 || k > kMaxTableOrder)
    throw InvalidArgument("derivative partitions: k must lie in [1, 64]");
  std::vector<int> m(static_cast<std::size_t>(k), 0);
  std::function<void(int, int)> place = [&](int j, int remaining) {
    if (remaining == 0) {
      visit(m);
      return;
    }
    if (j > k || remaining < j) return;
    for (int count = remaining / j; count >= 0; --count) {
      m[static_cast<std::size_t>(j - 1)] = count;
      place(j + 1, remaining - count * j);
    }
    m[static_cast<std::size_t>(j - 1)] = 0;
  };
  place(1, k);
}

inline std::vector<std::vector<int>> enumerate_derivative_partitions(int k) {
  std::vector<std::vector<int>> out;
  for_each_derivative_partition(k, [&](const std::vector<int>& m) { out.push_back(m); });
  return out;
}

namespace detail {

inline BigInt factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Zero when the lower index is negative or above the upper one.
inline BigInt binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  if (r > n - r) r = n - r;
  BigInt c = 1;
  for (int i = 1; i <= r; ++i) {
    c *= n - r + i;
    c /= i;
  }
  return c;
}

}  // namespace detail

// D_{k,n} = C_{k,n} / i^k from the Faa di Bruno expansion
//
//   C_{k,n} = sum_{m} k! i^b (-1)^phi (y/2)^m / prod_j (m_j! j!^{m_j})
//             * sum_r (-1)^r binom(a, r) binom(b, (m - n)/2 - r)
//
// with m = sum m_j, a = sum of even-j m_j, b = m - a and phi the count of
// derivative orders j = 2, 3 (mod 4). The phase i^{b-k} (-1)^phi must be real;
// a leftover imaginary unit throws std::logic_error.
inline DyadicPoly coeff_faa_di_bruno(int k, int n) {
  if (k < 1 || k > kMaxFaaDiBrunoOrder)
    throw InvalidArgument("coeff_faa_di_bruno: k must lie in [1, 30], got " + std::to_string(k));
  if (std::abs(n) > k)
    throw InvalidArgument("coeff_faa_di_bruno: |n| must not exceed k");

  const BigInt k_factorial = detail::factorial(k);
  DyadicPoly result;
  for_each_derivative_partition(k, [&](const std::vector<int>& mj) {
    int m = 0, a = 0, phi = 0;
    BigInt denominator = 1;
    for (int j = 1; j <= k; ++j) {
      const int count = mj[static_cast<std::size_t>(j - 1)];
      if (count == 0) continue;
      m += count;
      if (j % 2 == 0) a += count;
      if (j % 4 == 2 || j % 4 == 3) phi += count;
      BigInt jf = detail::factorial(j);
      denominator *= detail::factorial(count) * boost::multiprecision::pow(jf, static_cast<unsigned>(count));
    }
    const int b = m - a;
    if ((m - n) % 2 != 0) return;
    const int half = (m - n) / 2;
    BigInt inner = 0;
    for (int r = 0; r <= a; ++r) {
      const BigInt term = detail::binomial(a, r) * detail::binomial(b, half - r);
      if (r % 2 == 0) inner += term; else inner -= term;
    }
    if (inner.is_zero()) return;

    const UnitPhase phase = UnitPhase(b) * UnitPhase(2LL * phi) * UnitPhase(-k);
    if (!phase.is_real())
      throw std::logic_error("coeff_faa_di_bruno: residual imaginary phase " + phase.to_string() +
                             " at k=" + std::to_string(k) + ", n=" + std::to_string(n));
    const BigInt weight = k_factorial / denominator;
    BigInt numerator = weight * inner;
    if (phase.sign() < 0) numerator = -numerator;
    result.add_term(static_cast<unsigned>(m), DyadicRational(numerator, static_cast<unsigned>(m)));
  });
  return result;
}

// D_{k,n}(y) evaluated by Horner's rule.
inline double eval_coeff(const CoeffTable& table, int k, int n, double y) {
  if (k < 0 || k > table.k_max())
    throw InvalidArgument("eval_coeff: k=" + std::to_string(k) + " outside table range [0, " +
                          std::to_string(table.k_max()) + "]");
  return table.entry(k, n).evaluate(y);
}

}  // namespace besselrules

#endif  // BESSELRULES_COEFFICIENTS_HPP_
