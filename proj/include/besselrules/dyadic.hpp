#ifndef BESSELRULES_DYADIC_HPP_
#define BESSELRULES_DYADIC_HPP_

// Exact dyadic rationals num / 2^exp and sparse polynomials over them.

#include <cmath>
#include <cstdint>
#include <iterator>
#include <map>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace besselrules {

using BigInt = boost::multiprecision::cpp_int;

// numerator / 2^exponent, kept canonical: numerator odd, or zero with
// exponent zero.
class DyadicRational {
 public:
  DyadicRational() = default;
  DyadicRational(long long numerator) : num_(numerator) { normalize(); }  // NOLINT
  DyadicRational(BigInt numerator, unsigned exponent)
      : num_(std::move(numerator)), exp_(exponent) {
    normalize();
  }

  const BigInt& numerator() const { return num_; }
  unsigned exponent() const { return exp_; }
  bool is_zero() const { return num_.is_zero(); }
  int sign() const { return num_.sign(); }

  DyadicRational operator-() const { return DyadicRational(-num_, exp_); }

  DyadicRational& operator+=(const DyadicRational& o) {
    if (o.exp_ > exp_) {
      num_ <<= (o.exp_ - exp_);
      exp_ = o.exp_;
      num_ += o.num_;
    } else {
      num_ += o.num_ << (exp_ - o.exp_);
    }
    normalize();
    return *this;
  }
  DyadicRational& operator-=(const DyadicRational& o) { return *this += -o; }
  DyadicRational& operator*=(const DyadicRational& o) {
    num_ *= o.num_;
    exp_ += o.exp_;
    normalize();
    return *this;
  }

  friend DyadicRational operator+(DyadicRational a, const DyadicRational& b) { return a += b; }
  friend DyadicRational operator-(DyadicRational a, const DyadicRational& b) { return a -= b; }
  friend DyadicRational operator*(DyadicRational a, const DyadicRational& b) { return a *= b; }
  friend bool operator==(const DyadicRational& a, const DyadicRational& b) {
    return a.exp_ == b.exp_ && a.num_ == b.num_;
  }

  // this / 2^shift
  DyadicRational halved(unsigned shift = 1) const { return DyadicRational(num_, exp_ + shift); }

  // Correctly rounded (ties to even) for results in the normal range.
  double to_double() const {
    if (num_.is_zero()) return 0.0;
    BigInt mag = boost::multiprecision::abs(num_);
    const long long bits = static_cast<long long>(boost::multiprecision::msb(mag)) + 1;
    long long scale = -static_cast<long long>(exp_);
    if (bits > 53) {
      const unsigned shift = static_cast<unsigned>(bits - 53);
      BigInt q = mag >> shift;
      const BigInt rem = mag - (q << shift);
      const BigInt half = BigInt(1) << (shift - 1);
      if (rem > half || (rem == half && boost::multiprecision::bit_test(q, 0))) q += 1;
      mag = q;
      scale += shift;
    }
    const double m = static_cast<double>(mag.convert_to<std::uint64_t>());
    return std::ldexp(num_.sign() < 0 ? -m : m, static_cast<int>(scale));
  }

  // "3/8", "-1", "0"
  std::string to_string() const {
    std::string s = num_.str();
    if (exp_ > 0) s += "/" + (BigInt(1) << exp_).str();
    return s;
  }

 private:
  void normalize() {
    if (num_.is_zero()) {
      exp_ = 0;
      return;
    }
    const unsigned tz = static_cast<unsigned>(boost::multiprecision::lsb(boost::multiprecision::abs(num_)));
    const unsigned drop = tz < exp_ ? tz : exp_;
    if (drop > 0) {
      num_ >>= drop;  // exact: low `drop` bits are zero
      exp_ -= drop;
    }
  }

  BigInt num_{0};
  unsigned exp_ = 0;
};

// Polynomial in y with dyadic coefficients; zero coefficients are never
// stored.
class DyadicPoly {
 public:
  using Terms = std::map<unsigned, DyadicRational>;

  DyadicPoly() = default;
  static DyadicPoly monomial(DyadicRational c, unsigned power) {
    DyadicPoly p;
    p.add_term(power, std::move(c));
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Highest and lowest stored powers; 0 for the zero polynomial.
  unsigned degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }
  unsigned min_power() const { return terms_.empty() ? 0 : terms_.begin()->first; }

  DyadicRational coefficient(unsigned power) const {
    const auto it = terms_.find(power);
    return it == terms_.end() ? DyadicRational{} : it->second;
  }

  void add_term(unsigned power, const DyadicRational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(power, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  DyadicPoly& operator+=(const DyadicPoly& o) {
    for (const auto& [p, c] : o.terms_) add_term(p, c);
    return *this;
  }
  DyadicPoly& operator-=(const DyadicPoly& o) {
    for (const auto& [p, c] : o.terms_) add_term(p, -c);
    return *this;
  }
  friend DyadicPoly operator+(DyadicPoly a, const DyadicPoly& b) { return a += b; }
  friend DyadicPoly operator-(DyadicPoly a, const DyadicPoly& b) { return a -= b; }
  DyadicPoly operator-() const { return scaled(-1); }

  DyadicPoly scaled(const DyadicRational& factor) const {
    DyadicPoly out;
    if (factor.is_zero()) return out;
    for (const auto& [p, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), p, c * factor);
    return out;
  }

  // (y/2) * this
  DyadicPoly times_half_y() const {
    DyadicPoly out;
    for (const auto& [p, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), p + 1, c.halved());
    return out;
  }

  friend bool operator==(const DyadicPoly& a, const DyadicPoly& b) { return a.terms_ == b.terms_; }

  // Horner over the stored powers, highest first.
  double evaluate(double y) const {
    if (terms_.empty()) return 0.0;
    auto it = terms_.rbegin();
    double acc = it->second.to_double();
    unsigned prev = it->first;
    for (++it; it != terms_.rend(); ++it) {
      for (unsigned g = it->first; g < prev; ++g) acc *= y;
      acc += it->second.to_double();
      prev = it->first;
    }
    for (unsigned g = 0; g < prev; ++g) acc *= y;
    return acc;
  }

  DyadicRational evaluate(const DyadicRational& y) const {
    DyadicRational acc;
    unsigned prev = degree();
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      for (unsigned g = it->first; g < prev; ++g) acc *= y;
      acc += it->second;
      prev = it->first;
    }
    for (unsigned g = 0; g < prev; ++g) acc *= y;
    return acc;
  }

  // "3/8 y^4 + 1/2 y^2"
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [p, c] = *it;
      std::string coeff = c.to_string();
      if (!s.empty()) {
        if (coeff.front() == '-') {
          s += " - ";
          coeff.erase(0, 1);
        } else {
          s += " + ";
        }
      }
      s += coeff;
      if (p == 1) s += " y";
      if (p > 1) s += " y^" + std::to_string(p);
    }
    return s;
  }

 private:
  Terms terms_;
};

}  // namespace besselrules

#endif  // BESSELRULES_DYADIC_HPP_
