#pragma once

// Distance functionals and bounds: the length-spectrum estimator over an
// enumerated curve family, the twist upper and lower bounds, the modulus
// lower bound for quasiconformal distance, the annulus/outside length model
// with its calibrated constants, and the coordinate membership test.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fnls/error.hpp"
#include "fnls/ext_scalar.hpp"
#include "fnls/hyp_core.hpp"
#include "fnls/length_engine.hpp"
#include "fnls/surface.hpp"

namespace fnls {

struct ConstantsProfile {
  double M = 2.0;
  double eps0 = 0.2;
  double eps1 = 0.1;
  double rho_floor = 0.5;
  double c_cr = 2.0;
  double defect = 5.0;
  double membership_n = 1.05;
  double membership_cap = 1e6;
  BranchThresholds thresholds;

  // calibration metadata
  bool calibrated = false;
  std::string family = "none";
  std::string grid_hash = "0000000000000000";
  std::size_t grid_points = 0;

  void validate() const {
    const bool ok = M > 0 && eps1 > 0 && eps0 > eps1 && eps0 < 1 && rho_floor > 0 && rho_floor <= 1 &&
                    c_cr >= 0 && defect >= 0 && membership_n > 0 && membership_cap > 0;
    if (!ok) fail(ErrorKind::Configuration, "ConstantsProfile: constants out of range");
  }
};

enum class BoundKind { Lower, Upper, Exact };

inline const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::Lower: return "lower";
    case BoundKind::Upper: return "upper";
    case BoundKind::Exact: return "exact";
  }
  return "unknown";
}

struct Bound {
  double value = 0.0;
  BoundKind kind = BoundKind::Lower;
  std::string source;
  ConstantsProfile constants;
  std::optional<CurveClass> witness;
};

// ---------------------------------------------------------------------------
// length-spectrum estimate

/// 1/2 max |log l_X(g)/l_Y(g)| over pants curves and twisted duals |k| <= K of
/// the depth-n truncation; a lower bound for the length-spectrum distance.
inline Bound dls_estimate(const MarkedPair& pair, long long K, int n, const ConstantsProfile& cp = {}) {
  const PantsGraph& g = pair.graph();
  Surface base{g, pair.base()};
  Surface target{g, pair.target()};
  if (n < g.depth()) {
    base = truncate(g, pair.base(), n);
    target = truncate(g, pair.target(), n);
  } else if (n > g.depth()) {
    fail(ErrorKind::Range, "dls_estimate: truncation depth exceeds the pair's depth");
  }
  const auto family = enumerate_curves(base.graph, K);
  if (family.empty()) fail(ErrorKind::DegenerateInput, "dls_estimate: empty curve family");
  const Holonomy hx(base.graph, base.point);
  const Holonomy hy(target.graph, target.point);
  Bound b{0.0, BoundKind::Lower, "length-ratio-sup", cp, std::nullopt};
  for (const CurveClass& c : family) {
    const double r = 0.5 * std::fabs(geodesic_length(hx, c, cp.thresholds).log() -
                                     geodesic_length(hy, c, cp.thresholds).log());
    if (r > b.value) {
      b.value = r;
      b.witness = c;
    }
  }
  return b;
}

/// 1/2 log(l_{X_t}(beta_i) / l_X(beta_i)) for a single twist t on C_i.
inline double twist_length_ratio(const PantsGraph& g, const FNPoint& x, CurveIndex i, double t) {
  const CurveClass beta = dual_curve(g, i);
  const Holonomy h0(g, x);
  const Holonomy ht(g, apply_twist(g, x, TwistVector::single(g.curve_count(), i, t)));
  return 0.5 * (geodesic_length(ht, beta).log() - geodesic_length(h0, beta).log());
}

// ---------------------------------------------------------------------------
// twist bounds

/// |t| / (4 w(l_i)): each crossing of C_i adds at most |t| to a curve of
/// length at least 2 w(l_i) per crossing.
inline Bound dls_twist_upper(const PantsGraph& g, const FNPoint& x, CurveIndex i, double t,
                             const ConstantsProfile& cp = {}) {
  if (g.curve(i).boundary()) fail(ErrorKind::Domain, "dls_twist_upper: boundary legs cannot be twisted");
  const ExtScalar w = collar_half_width(x.length(i), cp.thresholds);
  return {(ext(std::fabs(t)) / (ext(4.0) * w)).to_double(), BoundKind::Upper, "twist-collar-upper", cp,
          dual_curve(g, i)};
}

/// Law-level form of the upper bound for a curve of length l.
inline double dls_twist_upper_value(const ExtScalar& l, double t, const BranchThresholds& th = {}) {
  return (ext(std::fabs(t)) / (ext(4.0) * collar_half_width(l, th))).to_double();
}

/// 1/2 log((2|log l| + |t| - D) / (2|log l| + D)), clamped at 0.
inline double dls_twist_lower_value(const ExtScalar& l, double t, double defect) {
  const double L = std::fabs(l.log());
  const double num = 2.0 * L + std::fabs(t) - defect;
  const double den = 2.0 * L + defect;
  if (num <= den) return 0.0;
  return 0.5 * std::log(num / den);
}

inline Bound dls_twist_lower(const PantsGraph& g, const FNPoint& x, CurveIndex i, double t,
                             const ConstantsProfile& cp) {
  if (g.curve(i).boundary()) fail(ErrorKind::Domain, "dls_twist_lower: boundary legs cannot be twisted");
  if (x.length(i) > ext(cp.eps1))
    fail(ErrorKind::HypothesisViolation, "dls_twist_lower: curve longer than eps1");
  return {dls_twist_lower_value(x.length(i), t, cp.defect), BoundKind::Lower, "twist-defect-lower", cp,
          dual_curve(g, i)};
}

// ---------------------------------------------------------------------------
// quasiconformal lower bound

/// h(K_i e^{|t_i|}) / h((1+s)/(1-s)) for one curve.
inline double modulus_ratio(double t, double rho, double k_value, const BranchThresholds& th = {}) {
  const ExtScalar arg = ext(k_value) * ExtScalar::from_log(std::fabs(t));
  return quad_modulus_h(arg, th) / quad_modulus_h(ext(reference_modulus_arg(rho)), th);
}

/// 1/2 log sup_i h(K_i e^{|t_i|}) / h((1+s_i)/(1-s_i)), s_i = sqrt(1 - rho_i^2), clamped at 0.
inline Bound dqc_lower_multitwist(const TwistVector& t, const std::vector<double>& rho,
                                  const ConstantsProfile& cp = {}) {
  if (rho.size() < t.size()) fail(ErrorKind::Configuration, "dqc_lower_multitwist: one rho per curve");
  double best = 0.0;
  std::optional<CurveClass> witness;
  for (CurveIndex i = 1; i <= t.size(); ++i) {
    if (!(rho[i - 1] > 0.0 && rho[i - 1] <= 1.0)) fail(ErrorKind::Domain, "dqc_lower_multitwist: rho outside (0,1]");
    const double v = 0.5 * std::log(modulus_ratio(t[i], rho[i - 1], k_constant(rho[i - 1]), cp.thresholds));
    if (v > best) {
      best = v;
      witness = CurveClass::pants_curve(i);
    }
  }
  return {best, BoundKind::Lower, "quasiconformal-modulus-lower", cp, witness};
}

/// Uniform-angle form driven by the largest twist. With the sound constant
/// K(rho) it never exceeds the per-curve bound when rho <= rho_i.
inline Bound dqc_lower_uniform(const TwistVector& t, double rho, const ConstantsProfile& cp = {}) {
  return {std::max(0.0, 0.5 * std::log(modulus_ratio(t.sup_norm(), rho, k_constant(rho), cp.thresholds))),
          BoundKind::Lower, "quasiconformal-modulus-uniform", cp, std::nullopt};
}

/// The same expression with the constant (1-s)^2/(1+s). It exceeds K(rho)
/// for every rho < 1, so the value is reported for comparison, never as a bound.
inline double dqc_lower_uniform_displayed(const TwistVector& t, double rho, const BranchThresholds& th = {}) {
  return std::max(0.0, 0.5 * std::log(modulus_ratio(t.sup_norm(), rho, uniform_k_constant(rho), th)));
}

inline bool displayed_uniform_exceeds_k(double rho) { return uniform_k_constant(rho) > k_constant(rho); }

// ---------------------------------------------------------------------------
// annulus / outside length model

struct ChoiRafiEstimate {
  double annulus = 0.0;   // i * (2 log(eps0/l) + l |tw|)
  double outside = 0.0;   // sum over crossed pants of (orthogeodesic - 2 w0)
  double twist = 0.0;     // geometric twist count at the first crossing
  double model = 0.0;     // annulus + outside
  double exact = 0.0;     // l(gamma) from the holonomy
  double residual = 0.0;  // |exact - model|
  int crossings = 0;
};

/// Geometric twist count log(|x1|/|x2|)/l of the dual's lift across the lift of C_i.
inline double geometric_twist(const Holonomy& h, CurveIndex i) {
  const auto axes = dual_axes(h, i);
  const double l = h.point().length(i).to_double();
  return (axes.front().x1.log() - axes.front().x2.log()) / l;
}

inline ChoiRafiEstimate choi_rafi_estimates(const PantsGraph& g, const FNPoint& x, CurveIndex i,
                                            const CurveClass& gamma, const ConstantsProfile& cp) {
  if (g.curve(i).boundary()) fail(ErrorKind::HypothesisViolation, "choi_rafi_estimates: C_i must be interior");
  const ExtScalar& l = x.length(i);
  if (l > ext(cp.eps1)) fail(ErrorKind::HypothesisViolation, "choi_rafi_estimates: curve longer than eps1");
  if (gamma.intersection_with(i) == 0)
    fail(ErrorKind::HypothesisViolation, "choi_rafi_estimates: gamma does not cross C_i");

  const double l_d = l.to_double();
  const double tau = x.twist(i) + static_cast<double>(gamma.k) * l_d;
  const FNPoint xk = x.with_twist(i, tau);
  const Holonomy h(g, xk);

  ChoiRafiEstimate e;
  e.crossings = gamma.crossings;
  e.annulus = gamma.crossings * (2.0 * (std::log(cp.eps0) - l.log()) + std::fabs(tau));
  const ExtScalar w0 = detail::ext_acosh(ext(cp.eps0) / l);
  for (const ExtScalar& d : orthogeodesic_lengths(h, i)) e.outside += (d - ext(2.0) * w0).to_double();
  e.twist = geometric_twist(h, i);
  e.model = e.annulus + e.outside;
  e.exact = geodesic_length(h, dual_curve(g, i), cp.thresholds).to_double();
  e.residual = std::fabs(e.exact - e.model);
  return e;
}

// ---------------------------------------------------------------------------
// membership

enum class Verdict { Inside, Outside, Undetermined };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Inside: return "inside";
    case Verdict::Outside: return "outside";
    case Verdict::Undetermined: return "undetermined-at-depth";
  }
  return "unknown";
}

/// Law-level growth of |tau_X - tau_R| / max(|log l_R|, 1), given as a log so
/// that exponential twist laws stay finite.
struct GrowthLaw {
  std::string name;
  std::function<double(std::size_t)> log_ratio;
};

struct MembershipResult {
  Verdict verdict = Verdict::Inside;
  std::optional<CurveIndex> witness;
  double max_length_ratio = 0.0;  // max |log l_X / l_R|
  double max_twist_ratio = 0.0;   // max |dtau| / max(|log l_R|, 1)
  std::vector<std::pair<std::size_t, double>> certificate;  // (index, log ratio) probes
};

/// Ratio probes n, n+10, n+20, ... of a growth law: strictly increasing and
/// past log(cap) before index `limit`.
inline std::optional<std::vector<std::pair<std::size_t, double>>> growth_certificate(const GrowthLaw& law,
                                                                                    std::size_t from,
                                                                                    double cap,
                                                                                    std::size_t limit = 100000) {
  std::vector<std::pair<std::size_t, double>> probes;
  const double target = std::log(cap);
  for (std::size_t n = from; n <= limit; n += 10) {
    const double v = law.log_ratio(n);
    if (!std::isfinite(v)) return std::nullopt;
    if (!probes.empty() && v <= probes.back().second) return std::nullopt;
    probes.emplace_back(n, v);
    if (v > target) return probes;
  }
  return std::nullopt;
}

/// Coordinate test against base R at the pair's depth, with the length ratio
/// measured against l_R. "outside" needs a growth certificate from the law.
inline MembershipResult ls_membership(const MarkedPair& pair, double N, const ConstantsProfile& cp = {},
                                      const std::optional<GrowthLaw>& growth = std::nullopt) {
  if (!(N > 0.0)) fail(ErrorKind::Domain, "ls_membership: N must be positive");
  MembershipResult r;
  for (CurveIndex i = 1; i <= pair.graph().curve_count(); ++i) {
    const ExtScalar& lr = pair.base().length(i);
    const double len_ratio = std::fabs(pair.target().length(i).log() - lr.log());
    const double tw_ratio =
        std::fabs(pair.target().twist(i) - pair.base().twist(i)) / std::max(std::fabs(lr.log()), 1.0);
    r.max_length_ratio = std::max(r.max_length_ratio, len_ratio);
    r.max_twist_ratio = std::max(r.max_twist_ratio, tw_ratio);
    if ((len_ratio >= N || tw_ratio >= N) && !r.witness) r.witness = i;
  }
  if (!r.witness) return r;
  r.verdict = Verdict::Undetermined;
  if (growth) {
    if (auto cert = growth_certificate(*growth, static_cast<std::size_t>(pair.graph().depth()), cp.membership_cap)) {
      r.verdict = Verdict::Outside;
      r.certificate = std::move(*cert);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// calibration

struct CalibrationGrid {
  std::vector<double> log_lengths;  // a with l = e^{-a}
  std::vector<double> twists;
  std::size_t size() const noexcept { return log_lengths.size() * twists.size(); }

  /// The grid used by the default profile and the bound-ordering suite.
  static CalibrationGrid standard() {
    CalibrationGrid g;
    for (int a = 6; a <= 20; a += 2) g.log_lengths.push_back(a);
    g.twists = {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0};
    return g;
  }
};

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

inline std::string canonical_grid(const SurfaceFamily& fam, const CalibrationGrid& grid) {
  std::string s = std::string(to_string(fam.kind)) + "|" + fam.length_law.name() + "|";
  char buf[64];
  for (double a : grid.log_lengths) {
    std::snprintf(buf, sizeof buf, "%.17g,", a);
    s += buf;
  }
  s += "|";
  for (double t : grid.twists) {
    std::snprintf(buf, sizeof buf, "%.17g,", t);
    s += buf;
  }
  return s;
}

/// Test surface for one grid point: depth-3 member of the family with its
/// first interior curve set to length l.
inline Surface calibration_surface(const SurfaceFamily& fam, double a) {
  Surface s = build_family(fam, 3);
  const CurveIndex i = s.graph.interior_curves().front();
  s.point = s.point.with_length(i, ExtScalar::from_log(-a)).with_twist(i, 0.0);
  return s;
}

struct CalibrationPoint {
  double log_length = 0.0;
  double t = 0.0;
  double defect_needed = 0.0;
  double residual_per_crossing = 0.0;
  double min_sin = 1.0;
};

inline CalibrationPoint calibration_point(const SurfaceFamily& fam, double a, double t, const ConstantsProfile& cp) {
  const Surface s = calibration_surface(fam, a);
  const CurveIndex i = s.graph.interior_curves().front();
  CalibrationPoint p{a, t};
  const double L = a;
  const double R = std::exp(2.0 * twist_length_ratio(s.graph, s.point, i, t));
  p.defect_needed = std::max(0.0, (2.0 * L + std::fabs(t) - 2.0 * L * R) / (1.0 + R));
  const FNPoint xt = apply_twist(s.graph, s.point, TwistVector::single(s.graph.curve_count(), i, t));
  const CurveClass beta = dual_curve(s.graph, i);
  for (const FNPoint* x : {&s.point, &xt}) {
    const ChoiRafiEstimate e = choi_rafi_estimates(s.graph, *x, i, beta, cp);
    p.residual_per_crossing = std::max(p.residual_per_crossing, e.residual / e.crossings);
  }
  // angles are a property of the untwisted base point
  p.min_sin = min_sin_angle(Holonomy(s.graph, s.point), i);
  return p;
}

/// D, C_cr and rho_floor measured on the grid with a 5% margin on D and C_cr.
inline ConstantsProfile calibrate_constants(const SurfaceFamily& fam, const CalibrationGrid& grid,
                                            ConstantsProfile cp = {}) {
  if (grid.size() < 20) fail(ErrorKind::Configuration, "calibrate_constants: grid needs at least 20 points");
  cp.validate();
  double defect = 0.0;
  double residual = 0.0;
  double min_sin = 1.0;
  for (double a : grid.log_lengths) {
    if (std::exp(-a) > cp.eps1) fail(ErrorKind::HypothesisViolation, "calibrate_constants: grid length above eps1");
    for (double t : grid.twists) {
      const CalibrationPoint p = calibration_point(fam, a, t, cp);
      defect = std::max(defect, p.defect_needed);
      residual = std::max(residual, p.residual_per_crossing);
      min_sin = std::min(min_sin, p.min_sin);
    }
  }
  cp.defect = defect * 1.05;
  cp.c_cr = residual * 1.05;
  cp.rho_floor = min_sin;
  cp.calibrated = true;
  cp.family = to_string(fam.kind);
  cp.grid_hash = hex64(fnv1a(canonical_grid(fam, grid)));
  cp.grid_points = grid.size();
  return cp;
}

// ---------------------------------------------------------------------------
// collar constant

/// Largest C with 2 w(l) >= C max(|log l|, 1) over the given lengths: the
/// exact-collar stand-in for the constant C in |t| / (2 C |log l|).
inline double collar_constant(const std::vector<ExtScalar>& lengths, const BranchThresholds& th = {}) {
  if (lengths.empty()) fail(ErrorKind::DegenerateInput, "collar_constant: no lengths");
  double c = std::numeric_limits<double>::infinity();
  for (const ExtScalar& l : lengths)
    c = std::min(c, 2.0 * collar_half_width(l, th).to_double() / std::max(std::fabs(l.log()), 1.0));
  return c;
}

}  // namespace fnls
