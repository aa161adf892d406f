#pragma once

// 2x2 real matrices with extended-range entries, acting on the upper half-plane
// by Moebius transformations.

#include <cmath>
#include <utility>

#include "fnls/error.hpp"
#include "fnls/ext_scalar.hpp"

namespace fnls {

struct Mat2 {
  ExtScalar a, b, c, d;  // [[a, b], [c, d]]

  static Mat2 identity() { return {ext(1.0), {}, {}, ext(1.0)}; }
  static Mat2 diag(const ExtScalar& x, const ExtScalar& y) { return {x, {}, {}, y}; }

  ExtScalar trace() const { return a + d; }
  ExtScalar det() const { return a * d - b * c; }

  /// Inverse assuming unit determinant (the adjugate).
  Mat2 inverse() const { return {d, -b, -c, a}; }

  bool is_diagonal() const noexcept { return b.is_zero() && c.is_zero(); }

  friend Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }

  friend Mat2 operator*(const ExtScalar& s, const Mat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }

  friend Mat2 operator+(const Mat2& m, const Mat2& n) { return {m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d}; }

  Mat2 operator-() const { return {-a, -b, -c, -d}; }

  /// g * m * g^-1
  Mat2 conjugated_by(const Mat2& g) const { return g * (*this) * g.inverse(); }
};

/// Translation by s along the imaginary axis: z -> e^s z.
inline Mat2 translation(double s) { return Mat2::diag(ExtScalar::from_log(s / 2.0), ExtScalar::from_log(-s / 2.0)); }

/// Translation by s along the geodesic (-1, 1).
inline Mat2 perpendicular_translation(double s) {
  const ExtScalar ch = ext_cosh(s / 2.0);
  const ExtScalar sh = ext_sinh(s / 2.0);
  return {ch, sh, sh, ch};
}

/// Moebius action on a finite boundary point; returns {numerator, denominator}.
inline std::pair<ExtScalar, ExtScalar> apply(const Mat2& m, const ExtScalar& x) {
  return {m.a * x + m.b, m.c * x + m.d};
}

/// sinh(l/2) for a positive extended length; keeps full relative precision for tiny l.
inline ExtScalar sinh_half(const ExtScalar& l) {
  if (l < ext(1e-4)) {
    const double l_d = l.fits_double() ? l.to_double() : 0.0;
    return l * ext(0.5 * (1.0 + l_d * l_d / 96.0));
  }
  return ext_sinh(l.to_double() / 2.0);
}

/// M^k for a hyperbolic M of translation length l, via
/// the spectral projectors M = mu P+ + mu^-1 P-; exact on diagonal input.
inline Mat2 hyperbolic_power(const Mat2& m, double k, const ExtScalar& l) {
  require(l.sign() > 0, ErrorKind::Domain, "hyperbolic_power: translation length must be positive");
  const int sigma = m.trace().sign();
  require(sigma != 0, ErrorKind::DegenerateInput, "hyperbolic_power: zero trace");
  const double half = l.fits_double() ? l.to_double() / 2.0 : 0.0;
  const double kk = k;
  // Work with the positive-trace lift, restore the sign as sigma^k for integer k.
  const Mat2 mp = sigma > 0 ? m : -m;
  if (mp.is_diagonal()) {
    const bool up = mp.a > mp.d;
    const ExtScalar big = ExtScalar::from_log(kk * half);
    const ExtScalar small = ExtScalar::from_log(-kk * half);
    Mat2 out = up ? Mat2::diag(big, small) : Mat2::diag(small, big);
    if (sigma < 0 && std::fmod(std::fabs(kk), 2.0) == 1.0) out = -out;
    return out;
  }
  const ExtScalar mu = ExtScalar::from_log(half);
  const ExtScalar mu_inv = ExtScalar::from_log(-half);
  const ExtScalar gap = ext(2.0) * sinh_half(l);  // mu - 1/mu
  const Mat2 id = Mat2::identity();
  const Mat2 p_plus = (ext(1.0) / gap) * (mp + (-mu_inv) * id);
  const Mat2 p_minus = (ext(1.0) / gap) * (mu * id + (-mp));
  Mat2 out = ExtScalar::from_log(kk * half) * p_plus + ExtScalar::from_log(-kk * half) * p_minus;
  if (sigma < 0 && std::fmod(std::fabs(kk), 2.0) == 1.0) out = -out;
  return out;
}

/// Attracting and repelling fixed points of a hyperbolic element with c != 0.
struct FixedPoints {
  ExtScalar attracting;
  ExtScalar repelling;
};

inline FixedPoints fixed_points(const Mat2& m) {
  if (m.c.is_zero()) fail(ErrorKind::DegenerateInput, "fixed_points: infinity is a fixed point");
  const ExtScalar tr = m.trace();
  const ExtScalar disc = tr * tr - ext(4.0);
  if (disc.sign() <= 0) fail(ErrorKind::EllipticIsometry, "fixed_points: element is not hyperbolic");
  const ExtScalar diff = m.a - m.d;
  const int sg = diff.is_zero() ? tr.sign() : diff.sign();
  const ExtScalar root = sqrt(disc);
  // Root without cancellation first, Vieta (product -b/c) for the other. The
  // attracting point is the root taken with the sign of the trace.
  const ExtScalar stable = (diff + (sg > 0 ? root : -root)) / (ext(2.0) * m.c);
  const ExtScalar other = (-m.b / m.c) / stable;
  if (sg == tr.sign()) return {stable, other};
  return {other, stable};
}

}  // namespace fnls
