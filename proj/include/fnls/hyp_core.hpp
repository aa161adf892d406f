#pragma once

// Half-plane toolkit: cross-ratios, trace/length conversion, collar widths,
// the Groetzsch ring modulus and the half-plane quadrilateral modulus h(t).

#include <array>
#include <cmath>
#include <numbers>
#include <optional>

#include "fnls/error.hpp"
#include "fnls/ext_scalar.hpp"

namespace fnls {

/// Point of the real projective line R u {inf}.
class BoundaryPoint {
 public:
  static BoundaryPoint infinity() noexcept { return BoundaryPoint(); }

  static BoundaryPoint finite(double x) {
    require(std::isfinite(x), ErrorKind::Domain, "BoundaryPoint::finite needs a finite value");
    return BoundaryPoint(x);
  }

  bool is_infinite() const noexcept { return !value_.has_value(); }
  double value() const { return value_.value(); }

  friend bool operator==(const BoundaryPoint&, const BoundaryPoint&) = default;

 private:
  BoundaryPoint() = default;
  explicit BoundaryPoint(double x) : value_(x) {}

  std::optional<double> value_;
};

struct AngleData {
  double theta = std::numbers::pi / 2;
  double sin_theta = 1.0;
};

/// Switch points between exact and asymptotic evaluation branches.
struct BranchThresholds {
  double trace = 1e8;
  double length = 1e-8;
  double modulus = 1e8;
};

/// chi(a,b,c,d) = (a-c)(b-d) / ((a-d)(b-c)); factors containing infinity cancel.
inline double cross_ratio(const BoundaryPoint& a, const BoundaryPoint& b, const BoundaryPoint& c,
                          const BoundaryPoint& d) {
  const std::array<const BoundaryPoint*, 4> pts{&a, &b, &c, &d};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      if (*pts[i] == *pts[j]) fail(ErrorKind::DegenerateInput, "cross_ratio: repeated points");

  auto diff = [](const BoundaryPoint& p, const BoundaryPoint& q) {
    if (p.is_infinite() || q.is_infinite()) return 1.0;
    return p.value() - q.value();
  };
  return (diff(a, c) * diff(b, d)) / (diff(a, d) * diff(b, c));
}

/// Translation length 2 arccosh(|tr|/2) of a hyperbolic element.
inline ExtScalar trace_to_length(const ExtScalar& tr, const BranchThresholds& th = {}) {
  const ExtScalar a = tr.abs();
  if (a < ext(2.0)) fail(ErrorKind::EllipticIsometry, "trace_to_length: |tr| < 2");
  if (a == ext(2.0)) return {};
  if (a > ext(th.trace)) {
    // 2 arccosh(y) = 2 log(2y) - 1/(2 y^2) + O(y^-4) with y = |tr|/2.
    const double inv2 = a.fits_double() ? 1.0 / (a.to_double() * a.to_double()) : 0.0;
    return ext(2.0 * (a.log() - inv2));
  }
  return ext(2.0 * std::acosh(a.to_double() / 2.0));
}

/// Half-width arcsinh(1 / sinh(l/2)) of the standard collar about a geodesic of length l.
inline ExtScalar collar_half_width(const ExtScalar& l, const BranchThresholds& th = {}) {
  require(l.sign() > 0, ErrorKind::Domain, "collar_half_width: length must be positive");
  if (l < ext(th.length)) {
    const double l_d = l.fits_double() ? l.to_double() : 0.0;
    return ext(std::log(4.0) - l.log() + l_d * l_d / 48.0);
  }
  const double half = l.to_double() / 2.0;
  if (half > 30.0) return ext(1.0) / ext_sinh(half);  // arcsinh(z) = z for tiny z
  return ext(std::asinh(1.0 / std::sinh(half)));
}

namespace detail {

/// Arithmetic-geometric mean, stopping once |a - b| < 1e-16 a.
inline double agm(double a, double b) {
  for (int it = 0; it < 200 && std::fabs(a - b) >= 1e-16 * a; ++it) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return a;
}

/// mu(r) with the complementary modulus supplied separately to avoid 1 - r^2 cancellation.
inline double groetzsch_mu_pair(double r, double r_complement) {
  return std::numbers::pi / 2.0 * agm(1.0, r_complement) / agm(1.0, r);
}

}  // namespace detail

/// Modulus of the Groetzsch ring: the unit disk slit along [0, r].
inline double groetzsch_mu(double r) {
  require(r > 0.0 && r < 1.0, ErrorKind::Domain, "groetzsch_mu: r must lie in (0,1)");
  return detail::groetzsch_mu_pair(r, std::sqrt((1.0 - r) * (1.0 + r)));
}

/// h(t) = mod H(inf, -1, 0, t) = (2/pi) mu(1/sqrt(1+t)).
inline double quad_modulus_h(const ExtScalar& t, const BranchThresholds& th = {}) {
  require(t.sign() > 0, ErrorKind::Domain, "quad_modulus_h: t must be positive");
  if (t > ext(th.modulus)) {
    const double inv = t.fits_double() ? 1.0 / t.to_double() : 0.0;
    return (std::log(16.0) + t.log() + 0.5 * inv) / std::numbers::pi;
  }
  const double td = t.to_double();
  const double r = 1.0 / std::sqrt(1.0 + td);
  const double rc = std::sqrt(td / (1.0 + td));
  return 2.0 / std::numbers::pi * detail::groetzsch_mu_pair(r, rc);
}

inline double quad_modulus_h(double t, const BranchThresholds& th = {}) {
  require(t > 0.0, ErrorKind::Domain, "quad_modulus_h: t must be positive");
  return quad_modulus_h(ext(t), th);
}

namespace detail {

inline void check_through_i(double x1, double x2) {
  require(std::isfinite(x1) && std::isfinite(x2) && x1 < 0.0 && x2 > 0.0, ErrorKind::Domain,
          "endpoints must satisfy x1 < 0 < x2");
  require(std::fabs(x1 * x2 + 1.0) <= 1e-9, ErrorKind::Domain,
          "geodesic must pass through i (x1 * x2 = -1)");
}

}  // namespace detail

/// Leftward bound m - sqrt(e^{2t} + m^2), m = (x1+x2)/2, on the image of x1
/// under a left earthquake of magnitude t along the imaginary axis.
inline double twist_endpoint_bound(double x1, double x2, double t) {
  detail::check_through_i(x1, x2);
  require(std::isfinite(t) && t >= 0.0, ErrorKind::Domain, "twist_endpoint_bound: t must be >= 0");
  if (t == 0.0) return x1;
  const double m = 0.5 * (x1 + x2);
  const double root = std::hypot(std::exp(t), m);
  if (m > 0.0) return -std::exp(2.0 * t) / (m + root);
  return m - root;
}

/// Angle at i between the upward imaginary axis and the geodesic (x1, x2)
/// oriented toward x1; satisfies cos^2(theta/2) = |x1| / (|x1| + |x2|).
inline AngleData angle_from_endpoints(double x1, double x2) {
  detail::check_through_i(x1, x2);
  const double sum = std::fabs(x1) + std::fabs(x2);
  const double s = 2.0 / sum;
  const double c = (std::fabs(x1) - std::fabs(x2)) / sum;
  return AngleData{std::atan2(s, c), s};
}

/// K(rho) of the per-curve quasiconformal lower bound; rho = 1 gives 1.
inline double k_constant(double rho) {
  require(rho > 0.0 && rho <= 1.0, ErrorKind::Domain, "k_constant: rho must lie in (0,1]");
  const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
  const double q = s / (1.0 - s);
  return (1.0 - s) / ((1.0 + s) * (std::hypot(1.0, q) + q));
}

/// (1-s)^2/(1+s), s = sqrt(1-rho^2): the uniform constant of the multi-twist corollary.
inline double uniform_k_constant(double rho) {
  require(rho > 0.0 && rho <= 1.0, ErrorKind::Domain, "uniform_k_constant: rho must lie in (0,1]");
  const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
  return (1.0 - s) * (1.0 - s) / (1.0 + s);
}

/// Modulus (1+s)/(1-s) of the reference quadrilateral for angle floor rho.
inline double reference_modulus_arg(double rho) {
  require(rho > 0.0 && rho <= 1.0, ErrorKind::Domain, "rho must lie in (0,1]");
  const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
  return (1.0 + s) / (1.0 - s);
}

}  // namespace fnls
