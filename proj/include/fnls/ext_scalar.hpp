#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <string>

#include "fnls/error.hpp"

namespace fnls {

/// Extended-range real number m * 2^e with |m| in [1, 2) or m == 0.
///
/// Lengths such as exp(-2^40) and traces such as e^(|t|/2 + |log eps|) leave
/// the double range long before they stop being meaningful; every formula
/// used downstream only needs products, quotients, sums without catastrophic
/// cancellation, and logarithms, so a wide exponent with a double mantissa is
/// enough. The sign lives in the mantissa.
class ExtScalar {
 public:
  constexpr ExtScalar() = default;

  static ExtScalar from_double(double x) {
    if (!std::isfinite(x)) fail(ErrorKind::Domain, "ExtScalar::from_double: non-finite value");
    return normalized(x, 0);
  }

  /// e^x for any finite double x; accurate to a few ulps of the result even
  /// when |x| is of order 2^40.
  static ExtScalar from_log(double x) {
    if (!std::isfinite(x)) fail(ErrorKind::Domain, "ExtScalar::from_log: non-finite exponent");
    const double k = std::floor(x / kLn2Hi);
    // Reduce x - k*ln2 in double-double so the mantissa keeps full precision.
    const double p_hi = k * kLn2Hi;
    const double p_err = std::fma(k, kLn2Hi, -p_hi);
    const double r = ((x - p_hi) - p_err) - k * kLn2Lo;
    return normalized(std::exp(r), static_cast<std::int64_t>(k));
  }

  static ExtScalar from_parts(double mantissa, std::int64_t exp2) {
    if (!std::isfinite(mantissa)) fail(ErrorKind::Domain, "ExtScalar::from_parts: non-finite mantissa");
    return normalized(mantissa, exp2);
  }

  double mantissa() const noexcept { return m_; }
  std::int64_t exp2() const noexcept { return e_; }

  bool is_zero() const noexcept { return m_ == 0.0; }
  int sign() const noexcept { return (m_ > 0.0) - (m_ < 0.0); }

  /// Saturates to 0 or +-inf outside the double range.
  double to_double() const noexcept {
    if (m_ == 0.0) return 0.0;
    if (e_ > 2000) return std::copysign(std::numeric_limits<double>::infinity(), m_);
    if (e_ < -2000) return std::copysign(0.0, m_);
    return std::ldexp(m_, static_cast<int>(e_));
  }

  /// True when to_double() loses nothing to overflow or subnormal underflow.
  bool fits_double() const noexcept { return m_ == 0.0 || (e_ > -1020 && e_ < 1020); }

  /// Natural log of |x|.
  double log() const {
    if (m_ == 0.0) fail(ErrorKind::Domain, "ExtScalar::log of zero");
    const double k = static_cast<double>(e_);
    return k * kLn2Hi + (k * kLn2Lo + std::log(std::fabs(m_)));
  }

  ExtScalar abs() const noexcept { return ExtScalar(std::fabs(m_), e_); }

  ExtScalar operator-() const noexcept { return ExtScalar(-m_, e_); }

  friend ExtScalar operator*(const ExtScalar& a, const ExtScalar& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return normalized(a.m_ * b.m_, a.e_ + b.e_);
  }

  friend ExtScalar operator/(const ExtScalar& a, const ExtScalar& b) {
    if (b.is_zero()) fail(ErrorKind::Domain, "ExtScalar division by zero");
    if (a.is_zero()) return {};
    return normalized(a.m_ / b.m_, a.e_ - b.e_);
  }

  friend ExtScalar operator+(const ExtScalar& a, const ExtScalar& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const ExtScalar& big = a.e_ >= b.e_ ? a : b;
    const ExtScalar& small = a.e_ >= b.e_ ? b : a;
    const std::int64_t shift = big.e_ - small.e_;
    if (shift > 110) return big;
    return normalized(big.m_ + std::ldexp(small.m_, -static_cast<int>(shift)), big.e_);
  }

  friend ExtScalar operator-(const ExtScalar& a, const ExtScalar& b) { return a + (-b); }

  ExtScalar& operator+=(const ExtScalar& o) { return *this = *this + o; }
  ExtScalar& operator-=(const ExtScalar& o) { return *this = *this - o; }
  ExtScalar& operator*=(const ExtScalar& o) { return *this = *this * o; }
  ExtScalar& operator/=(const ExtScalar& o) { return *this = *this / o; }

  friend bool operator==(const ExtScalar& a, const ExtScalar& b) noexcept {
    return a.m_ == b.m_ && (a.m_ == 0.0 || a.e_ == b.e_);
  }

  friend std::partial_ordering operator<=>(const ExtScalar& a, const ExtScalar& b) noexcept {
    const int sa = a.sign();
    const int sb = b.sign();
    if (sa != sb) return sa <=> sb;
    if (sa == 0) return std::partial_ordering::equivalent;
    if (a.e_ != b.e_) return sa > 0 ? (a.e_ <=> b.e_) : (b.e_ <=> a.e_);
    return a.m_ <=> b.m_;
  }

  std::string debug_string() const {
    return std::to_string(m_) + "*2^" + std::to_string(e_);
  }

 private:
  constexpr ExtScalar(double m, std::int64_t e) : m_(m), e_(e) {}

  static ExtScalar normalized(double m, std::int64_t e) {
    if (m == 0.0) return {};
    int k = 0;
    const double f = std::frexp(m, &k);  // |f| in [0.5, 1)
    return ExtScalar(2.0 * f, e + k - 1);
  }

  static constexpr double kLn2Hi = 6.93147180559945286227e-01;
  static constexpr double kLn2Lo = 2.31904681384629955842e-17;

  double m_ = 0.0;
  std::int64_t e_ = 0;
};

inline ExtScalar sqrt(const ExtScalar& x) {
  if (x.sign() < 0) fail(ErrorKind::Domain, "sqrt of negative ExtScalar");
  if (x.is_zero()) return {};
  std::int64_t e = x.exp2();
  double m = x.mantissa();
  if (e % 2 != 0) {
    m *= 2.0;
    e -= 1;
  }
  return ExtScalar::from_parts(std::sqrt(m), e / 2);
}

inline ExtScalar ext(double x) { return ExtScalar::from_double(x); }

/// sinh(x) in extended range for a real double argument.
inline ExtScalar ext_sinh(double x) {
  if (std::fabs(x) < 20.0) return ext(std::sinh(x));
  const ExtScalar big = ExtScalar::from_log(std::fabs(x) - std::log(2.0));
  const ExtScalar v = big * ext(-std::expm1(-2.0 * std::fabs(x)));
  return x < 0 ? -v : v;
}

/// cosh(x) in extended range for a real double argument.
inline ExtScalar ext_cosh(double x) {
  if (std::fabs(x) < 20.0) return ext(std::cosh(x));
  return ExtScalar::from_log(std::fabs(x) - std::log(2.0)) * ext(1.0 + std::exp(-2.0 * std::fabs(x)));
}

}  // namespace fnls
