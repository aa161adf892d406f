#pragma once

// Deformations and sequences built from twist data: basepoint classification,
// single-twist divergence sequences, cumulative multi-twists, the
// length-matching step and the connecting path.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fnls/error.hpp"
#include "fnls/ext_scalar.hpp"
#include "fnls/hyp_core.hpp"
#include "fnls/length_engine.hpp"
#include "fnls/metrics.hpp"
#include "fnls/surface.hpp"

namespace fnls {

struct Classification {
  bool upper_bounded = false;
  bool short_interior_curves = false;
  bool lower_bounded = false;
  bool shiga = false;
};

/// Read off from the length law (a table law is judged on its entries up to depth).
inline Classification classify_basepoint(const SurfaceFamily& fam, int depth, const ConstantsProfile& cp = {}) {
  Classification c;
  double sup = 0.0;
  double inf = 0.0;
  bool decays = false;
  if (fam.kind == FamilyKind::CustomTable) {
    if (depth < 1 || static_cast<std::size_t>(depth) > fam.table.size())
      fail(ErrorKind::Range, "classify_basepoint: depth outside the table");
    sup = 0.0;
    inf = std::numeric_limits<double>::infinity();
    for (int i = 0; i < depth; ++i) {
      const double l = fam.table[i].length.to_double();
      sup = std::max(sup, l);
      inf = std::min(inf, l);
    }
  } else {
    sup = fam.length_law.supremum();
    inf = fam.length_law.infimum();
    decays = fam.length_law.tends_to_zero();
  }
  c.upper_bounded = sup <= cp.M;
  c.short_interior_curves = decays;
  c.lower_bounded = inf > 0.0;
  c.shiga = c.upper_bounded && c.lower_bounded;
  return c;
}

enum class SequenceKind { PropInv, BoundaryPoint, Nondense, Zk };

struct SequenceSpec {
  SequenceKind kind = SequenceKind::PropInv;
  double N = 1.0;  // nondense
  int k = 1;       // zk

  static SequenceSpec prop_inv() { return {SequenceKind::PropInv, 1.0, 1}; }
  static SequenceSpec boundary_point() { return {SequenceKind::BoundaryPoint, 1.0, 1}; }
  static SequenceSpec nondense(double N) {
    if (!(N > 0.0)) fail(ErrorKind::Configuration, "nondense: N must be positive");
    return {SequenceKind::Nondense, N, 1};
  }
  static SequenceSpec zk(int k) {
    if (k < 1) fail(ErrorKind::Configuration, "zk: k must be >= 1");
    return {SequenceKind::Zk, 1.0 / k, k};
  }

  /// Twist per unit |log l| for the cumulative kinds.
  double rate() const { return kind == SequenceKind::Zk ? 1.0 / k : N; }
};

inline const char* to_string(SequenceKind k) {
  switch (k) {
    case SequenceKind::PropInv: return "prop-inv";
    case SequenceKind::BoundaryPoint: return "boundary-point";
    case SequenceKind::Nondense: return "nondense";
    case SequenceKind::Zk: return "zk";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// single-twist sequence

/// log|log l_n|, the twist placed on C_n.
inline double loglog_twist(const LengthLaw& law, std::size_t n) {
  const double a = law.abs_log(n);
  if (!(a > 0.0)) fail(ErrorKind::Domain, "loglog_twist: |log l_n| must be positive");
  return std::log(a);
}

struct DivergingReport {
  FNPoint point;  // X_n on the depth n+1 truncation
  double t = 0.0;
  Bound dls_upper;
  Bound dqc_lower;
  double rho = 1.0;  // measured min sin of the crossing angles
};

/// X_n: twist by log|log l_n| along C_n of the depth n+1 member of the family.
inline DivergingReport diverging_sequence(const SurfaceFamily& fam, int n, const ConstantsProfile& cp = {}) {
  if (n < 1) fail(ErrorKind::Range, "diverging_sequence: n must be >= 1");
  if (!fam.length_law.tends_to_zero() && fam.kind != FamilyKind::CustomTable)
    fail(ErrorKind::HypothesisViolation, "diverging_sequence: family has no short interior curves");
  const Surface s = build_family(fam, n + 1);
  const auto i = static_cast<CurveIndex>(n);
  DivergingReport r;
  r.t = loglog_twist(fam.length_law, static_cast<std::size_t>(n));
  const TwistVector tv = TwistVector::single(s.graph.curve_count(), i, r.t);
  r.point = apply_twist(s.graph, s.point, tv);
  r.dls_upper = dls_twist_upper(s.graph, s.point, i, r.t, cp);
  r.rho = min_sin_angle(Holonomy(s.graph, s.point), i);
  std::vector<double> rho(s.graph.curve_count(), 1.0);
  rho[i - 1] = r.rho;
  r.dqc_lower = dqc_lower_multitwist(tv, rho, cp);
  return r;
}

/// Upper bound for X_n from the law alone, without building the truncation.
inline double diverging_upper_at_law(const LengthLaw& law, std::size_t n, const BranchThresholds& th = {}) {
  const ExtScalar l = law.kind == LawKind::ExpDouble ? ExtScalar::from_log(-law.abs_log(n)) : law.length(n);
  return dls_twist_upper_value(l, loglog_twist(law, n), th);
}

// ---------------------------------------------------------------------------
// cumulative multi-twists

/// Greedy subsequence n_1 < n_2 < ... with x_{n_1} >= 1 and x_{n_{j+1}} >= x_{n_j} + 1,
/// x_n = log|log l_n|; every selected n is <= limit.
inline std::vector<std::size_t> spacing_selector(const LengthLaw& law, std::size_t limit,
                                                 std::size_t search_limit = 100000) {
  std::vector<std::size_t> out;
  double need = 1.0;
  std::size_t n = 1;
  for (; n <= limit; ++n) {
    const double a = law.abs_log(n);
    if (!(a > 0.0)) continue;
    if (std::log(a) >= need) {
      out.push_back(n);
      need = std::log(a) + 1.0;
    }
  }
  if (out.empty()) {
    // diagnose: is there any admissible index at all?
    for (; n <= search_limit; ++n)
      if (law.abs_log(n) > 0.0 && std::log(law.abs_log(n)) >= 1.0) return out;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "spacing_selector: log|log l_n| stays below 1 up to index %zu; the law has no short curves",
                  search_limit);
    fail(ErrorKind::Configuration, buf);
  }
  return out;
}

/// Selected indices beyond `from`, continuing the greedy rule, until the
/// terms x e^{-x} fall below 1e-300 or the law runs out of exponent range.
inline double boundary_tail(const LengthLaw& law, std::size_t depth, std::size_t horizon = 4096) {
  double need = 1.0;
  double tail = 0.0;
  for (std::size_t n = 1; n <= depth + horizon; ++n) {
    const double a = law.abs_log(n);
    if (!std::isfinite(a)) break;
    if (!(a > 0.0)) continue;
    const double x = std::log(a);
    if (x < need) continue;
    need = x + 1.0;
    if (n <= depth) continue;
    const double term = x * std::exp(-x);
    if (term < 1e-300) break;
    tail += term;
  }
  return tail;
}

/// x e^{-x} summed over a selection.
inline double selected_sum(const LengthLaw& law, const std::vector<std::size_t>& sel) {
  double s = 0.0;
  for (std::size_t n : sel) {
    const double x = std::log(law.abs_log(n));
    s += x * std::exp(-x);
  }
  return s;
}

/// int_{a}^{inf} x e^{-x} dx = (a + 1) e^{-a}.
inline double xexp_integral_from(double a) { return (a + 1.0) * std::exp(-a); }

/// sum x / sum y <= sum (x / y) for positive entries, evaluated in long double.
struct RatioSumCheck {
  long double lhs = 0.0L;
  long double rhs = 0.0L;
  bool holds = false;
};

inline RatioSumCheck ratio_sum_lemma(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.empty()) fail(ErrorKind::DegenerateInput, "ratio_sum_lemma: need equal nonempty tuples");
  long double sx = 0.0L;
  long double sy = 0.0L;
  long double r = 0.0L;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0 && ys[i] > 0.0)) fail(ErrorKind::Domain, "ratio_sum_lemma: entries must be positive");
    sx += xs[i];
    sy += ys[i];
    r += static_cast<long double>(xs[i]) / ys[i];
  }
  RatioSumCheck c{sx / sy, r, false};
  c.holds = c.lhs <= c.rhs;
  return c;
}

struct CumulativeReport {
  Surface base;  // depth n+1 member; C_1..C_n interior
  FNPoint point;
  TwistVector twists;
  std::vector<std::size_t> selected;
  double dls_upper = 0.0;        // max_i |t_i| / (4 w_i)
  double collar_c = 0.0;         // exact collar constant over twisted curves
  double nominal_bound = 0.0;    // rate / (2 C) for nondense and zk
  std::optional<double> tail;    // boundary-point only
};

/// Multi-twist on C_1..C_n of the depth n+1 member: log|log l_i| on the
/// spaced subsequence (boundary-point) or rate * |log l_i| on every index.
inline CumulativeReport cumulative_point(const SurfaceFamily& fam, const SequenceSpec& spec, int n,
                                         const ConstantsProfile& cp = {}) {
  if (n < 1) fail(ErrorKind::Range, "cumulative_point: depth must be >= 1");
  if (spec.kind == SequenceKind::PropInv)
    fail(ErrorKind::Configuration, "cumulative_point: prop-inv is a single-twist sequence");
  CumulativeReport r;
  r.base = build_family(fam, n + 1);
  const PantsGraph& g = r.base.graph;
  r.twists = TwistVector(g.curve_count());
  // the n-th curve of the chain in curve-index terms
  auto chain_curve = [&](std::size_t j) -> CurveIndex {
    return fam.kind == FamilyKind::TorusChain ? static_cast<CurveIndex>(3 * j) : static_cast<CurveIndex>(j);
  };
  auto chain_length = [&](std::size_t j) { return r.base.point.length(chain_curve(j)); };

  if (spec.kind == SequenceKind::BoundaryPoint) {
    r.selected = spacing_selector(fam.length_law, static_cast<std::size_t>(n));
    for (std::size_t j : r.selected) r.twists.set(chain_curve(j), loglog_twist(fam.length_law, j));
    r.tail = boundary_tail(fam.length_law, static_cast<std::size_t>(n));
  } else {
    for (std::size_t j = 1; j <= static_cast<std::size_t>(n); ++j) {
      r.selected.push_back(j);
      r.twists.set(chain_curve(j), spec.rate() * std::fabs(chain_length(j).log()));
    }
  }
  r.point = apply_twist(g, r.base.point, r.twists);

  std::vector<ExtScalar> lengths;
  for (std::size_t j : r.selected) {
    const CurveIndex i = chain_curve(j);
    lengths.push_back(r.base.point.length(i));
    r.dls_upper = std::max(r.dls_upper, dls_twist_upper_value(r.base.point.length(i), r.twists[i], cp.thresholds));
  }
  if (!lengths.empty()) r.collar_c = collar_constant(lengths, cp.thresholds);
  if (spec.kind != SequenceKind::BoundaryPoint && r.collar_c > 0.0) r.nominal_bound = spec.rate() / (2.0 * r.collar_c);
  return r;
}

/// log of |dtau_n| / max(|log l_n|, 1) for twist laws of the form c |log l_n|
/// (growth law of the cumulative kinds) or e^{n}.
inline GrowthLaw proportional_growth(const LengthLaw& law, double c) {
  return {"proportional", [law, c](std::size_t n) {
            const double a = law.abs_log(n);
            return std::log(c * a / std::max(a, 1.0));
          }};
}

inline GrowthLaw exponential_growth(const LengthLaw& law) {
  return {"exponential", [law](std::size_t n) {
            return static_cast<double>(n) - std::log(std::max(law.abs_log(n), 1.0));
          }};
}

/// Twist differences e^{n} on C_1..C_n of the depth n+1 flute.
inline MarkedPair exponential_twist_pair(const SurfaceFamily& fam, int n) {
  const Surface s = build_family(fam, n + 1);
  TwistVector t(s.graph.curve_count());
  for (int j = 1; j <= n; ++j) t.set(static_cast<CurveIndex>(j), std::exp(static_cast<double>(j)));
  return MarkedPair(s.graph, s.point, apply_twist(s.graph, s.point, t));
}

// ---------------------------------------------------------------------------
// length matching and the connecting path

struct LengthMatch {
  FNPoint point;  // Y
  double K = 0.0;
  double max_twist_offset = 0.0;  // max |tau_Y - tau_R|
  double window = 0.0;            // 2 e^K M
};

/// Y with the lengths of X and the twists of R, which lie in every window
/// |tau_Y - tau_R| < 2 e^K l_R. K defaults to half the measured estimate.
inline LengthMatch bishop_length_match(const MarkedPair& pair, const ConstantsProfile& cp = {},
                                       std::optional<double> K = std::nullopt, long long twist_depth = 1) {
  const PantsGraph& g = pair.graph();
  LengthMatch m;
  m.K = K ? *K : 0.5 * dls_estimate(pair, twist_depth, g.depth(), cp).value;
  std::vector<CurveCoord> coords;
  for (CurveIndex i = 1; i <= g.curve_count(); ++i)
    coords.push_back({pair.target().length(i), g.curve(i).boundary() ? 0.0 : pair.base().twist(i)});
  m.point = FNPoint(g, std::move(coords));
  for (CurveIndex i = 1; i <= g.curve_count(); ++i)
    m.max_twist_offset = std::max(m.max_twist_offset, std::fabs(m.point.twist(i) - pair.base().twist(i)));
  m.window = 2.0 * std::exp(m.K) * cp.M;
  if (m.max_twist_offset > m.window)
    fail(ErrorKind::InternalConsistency, "bishop_length_match: twist offset outside the window");
  return m;
}

/// Y_t = (l_X, (1-t) tau_Y + t tau_X).
inline FNPoint connect_path(const MarkedPair& pair, const FNPoint& y, double t) {
  if (!(t >= 0.0 && t <= 1.0)) fail(ErrorKind::Domain, "connect_path: t must lie in [0,1]");
  const PantsGraph& g = pair.graph();
  std::vector<CurveCoord> coords;
  for (CurveIndex i = 1; i <= g.curve_count(); ++i) {
    const double tau = g.curve(i).boundary() ? 0.0 : (1.0 - t) * y.twist(i) + t * pair.target().twist(i);
    coords.push_back({pair.target().length(i), tau});
  }
  return FNPoint(g, std::move(coords));
}

struct PathReport {
  LengthMatch match;
  std::vector<double> samples;
  std::vector<FNPoint> points;
  double collar_c = 0.0;
  double lipschitz = 0.0;  // (N + 2 e^K M) / (2 C)
  bool all_inside = true;
  std::size_t pairs_checked = 0;
  std::size_t violations = 0;
  double worst_slack = std::numeric_limits<double>::infinity();  // min(bound - measured)
};

/// Samples the path at the given parameters, checks membership of every
/// sample and the Lipschitz bound on every unordered pair (s <= t).
inline PathReport connect_path_report(const MarkedPair& pair, const std::vector<double>& samples, double N,
                                      const ConstantsProfile& cp = {}, long long twist_depth = 1) {
  const MembershipResult pre = ls_membership(pair, N, cp);
  if (pre.verdict == Verdict::Outside) {
    fail(ErrorKind::HypothesisViolation,
         "connect_path: target is outside, witness C_" + std::to_string(pre.witness.value_or(0)));
  }
  const PantsGraph& g = pair.graph();
  PathReport r;
  r.match = bishop_length_match(pair, cp, std::nullopt, twist_depth);
  r.samples = samples;
  std::vector<ExtScalar> lengths;
  for (CurveIndex i : g.interior_curves()) lengths.push_back(pair.base().length(i));
  r.collar_c = collar_constant(lengths, cp.thresholds);
  r.lipschitz = (N + r.match.window) / (2.0 * r.collar_c);
  for (double s : samples) {
    r.points.push_back(connect_path(pair, r.match.point, s));
    if (ls_membership(MarkedPair(g, pair.base(), r.points.back()), N, cp).verdict != Verdict::Inside)
      r.all_inside = false;
  }
  for (std::size_t a = 0; a < samples.size(); ++a) {
    for (std::size_t b = a; b < samples.size(); ++b) {
      const double measured =
          a == b ? 0.0 : dls_estimate(MarkedPair(g, r.points[a], r.points[b]), twist_depth, g.depth(), cp).value;
      const double bound = r.lipschitz * std::fabs(samples[a] - samples[b]);
      ++r.pairs_checked;
      if (a != b) r.worst_slack = std::min(r.worst_slack, bound - measured);
      if (measured > bound + 1e-12) ++r.violations;
    }
  }
  return r;
}

}  // namespace fnls
