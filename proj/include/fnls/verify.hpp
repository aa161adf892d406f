#pragma once

// Verification suites. Each criterion is a list of named assertions with the
// measured values behind them; suites group criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fnls/constructions.hpp"
#include "fnls/error.hpp"
#include "fnls/hyp_core.hpp"
#include "fnls/length_engine.hpp"
#include "fnls/metrics.hpp"
#include "fnls/surface.hpp"

namespace fnls::verify {

struct Measurement {
  std::string name;
  double value = 0.0;
};

struct Assertion {
  std::string name;
  bool pass = false;
  std::vector<Measurement> values;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Assertion> assertions;
  double seconds = 0.0;   // wall time, reported only on request
  double budget = 0.0;    // seconds; 0 means no budget

  bool pass() const {
    for (const Assertion& a : assertions)
      if (!a.pass) return false;
    return true;
  }
};

namespace detail {

inline Assertion check(std::string name, bool pass, std::vector<Measurement> values = {}) {
  return {std::move(name), pass, std::move(values)};
}

inline SurfaceFamily flute(LengthLaw law = LengthLaw::exp_linear(1.0)) {
  SurfaceFamily f;
  f.kind = FamilyKind::Flute;
  f.length_law = std::move(law);
  return f;
}

inline SurfaceFamily torus_chain() {
  SurfaceFamily f;
  f.kind = FamilyKind::TorusChain;
  return f;
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double rel_err(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

/// Random flute pair of the given depth: independent lengths and twists.
inline MarkedPair random_flute_pair(std::mt19937_64& rng, int depth) {
  const Surface s = build_family(flute(), depth);
  std::vector<CurveCoord> base;
  std::vector<CurveCoord> target;
  for (CurveIndex i = 1; i <= s.graph.curve_count(); ++i) {
    const bool leg = s.graph.curve(i).boundary();
    const double a = uniform(rng, 0.5, 8.0);
    const double tau = leg ? 0.0 : uniform(rng, -1.0, 1.0);
    const double da = uniform(rng, -0.5, 0.5);
    const double dt = leg ? 0.0 : uniform(rng, -3.0, 3.0);
    base.push_back({ExtScalar::from_log(-a), tau});
    target.push_back({ExtScalar::from_log(-a + da), tau + dt});
  }
  FNPoint b(s.graph, std::move(base));
  FNPoint t(s.graph, std::move(target));
  return MarkedPair(s.graph, std::move(b), std::move(t));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// 1. special functions

inline CriterionResult criterion_special_functions() {
  CriterionResult r{1, "special functions: Groetzsch modulus and quadrilateral modulus", {}, 0.0, 1.0};
  const double pi = std::numbers::pi;
  const double mu_half = groetzsch_mu(1.0 / std::sqrt(2.0));
  r.assertions.push_back(detail::check("mu(1/sqrt2) = pi/2", std::fabs(mu_half - pi / 2) <= 1e-12,
                                       {{"mu", mu_half}, {"error", std::fabs(mu_half - pi / 2)}}));
  double worst = 0.0;
  for (int k = 1; k <= 50; ++k) {
    const double r0 = k / 51.0;
    const double rc = std::sqrt((1.0 - r0) * (1.0 + r0));
    worst = std::max(worst, std::fabs(fnls::detail::groetzsch_mu_pair(r0, rc) * fnls::detail::groetzsch_mu_pair(rc, r0) - pi * pi / 4));
  }
  r.assertions.push_back(detail::check("mu(r) mu(r') = pi^2/4 on 50 points", worst <= 1e-12, {{"max_error", worst}}));
  const double h1 = quad_modulus_h(1.0);
  r.assertions.push_back(detail::check("h(1) = 1", std::fabs(h1 - 1.0) <= 1e-10, {{"h1", h1}}));
  bool increasing = true;
  double prev = -1.0;
  std::size_t points = 0;
  for (int k = -80; k <= 80; ++k) {
    const double h = quad_modulus_h(ExtScalar::from_log(k * 0.1 * std::log(10.0)));
    if (!(h > prev)) increasing = false;
    prev = h;
    ++points;
  }
  r.assertions.push_back(detail::check("h strictly increasing on [1e-8, 1e8]", increasing,
                                       {{"points", static_cast<double>(points)}, {"h(1e8)", prev}}));
  return r;
}

// ---------------------------------------------------------------------------
// 2. holonomy

inline CriterionResult criterion_holonomy(std::uint64_t seed = 20261019) {
  CriterionResult r{2, "holonomy: boundary traces, full-twist relabeling, Wolpert formula", {}, 0.0, 10.0};
  std::mt19937_64 rng(seed);
  double trace_err = 0.0;
  double relabel_err = 0.0;
  double wolpert_torus = 0.0;
  double wolpert_sphere = 0.0;

  auto check_traces = [&](const Surface& s) {
    const Holonomy h(s.graph, s.point);
    for (CurveIndex i : s.graph.interior_curves()) {
      for (const BoundaryGenerator& b : h.piece(i).boundary) {
        const double want = 2.0 * std::cosh(b.length.to_double() / 2.0);
        trace_err = std::max(trace_err, detail::rel_err(b.element.trace().abs().to_double(), want));
      }
    }
  };
  auto check_relabel = [&](const Surface& s, int crossings) {
    const double l = s.point.length(1).to_double();
    const Surface shifted{s.graph, s.point.with_twist(1, s.point.twist(1) + l)};
    const Holonomy h0(s.graph, s.point);
    const Holonomy h1(shifted.graph, shifted.point);
    for (long long k = -2; k <= 1; ++k) {
      const double a = geodesic_length(h1, CurveClass::twisted_dual(1, k, crossings)).to_double();
      const double b = geodesic_length(h0, CurveClass::twisted_dual(1, k + 1, crossings)).to_double();
      relabel_err = std::max(relabel_err, detail::rel_err(a, b));
    }
  };

  for (int n = 0; n < 100; ++n) {
    const double l = detail::log_uniform(rng, 0.05, 5.0);
    const double tw = detail::uniform(rng, -3.0, 3.0);
    const double hole = n % 4 == 0 ? 0.0 : detail::uniform(rng, 0.1, 3.0);
    const Surface s = one_holed_torus(l, tw, hole);
    check_traces(s);
    check_relabel(s, 1);
    wolpert_torus = std::max(wolpert_torus, wolpert_residual(s.graph, s.point, 1));
  }
  for (int n = 0; n < 100; ++n) {
    const double l = detail::log_uniform(rng, 0.05, 5.0);
    const double tw = detail::uniform(rng, -3.0, 3.0);
    std::array<double, 4> holes{};
    for (double& b : holes) b = detail::uniform(rng, 0.0, 1.0) < 0.25 ? 0.0 : detail::uniform(rng, 0.1, 3.0);
    const Surface s = four_holed_sphere(l, tw, holes);
    check_traces(s);
    check_relabel(s, 2);
    wolpert_sphere = std::max(wolpert_sphere, wolpert_residual(s.graph, s.point, 1));
  }
  // short pants curves down to 1e-3
  for (double l : {1e-3, 1e-2, 0.1}) {
    check_traces(one_holed_torus(l, 0.3, 1.0));
    check_traces(four_holed_sphere(l, 0.3, {1.0, 0.5, 0.0, 2.0}));
  }

  r.assertions.push_back(detail::check("boundary traces = 2cosh(l/2)", trace_err <= 1e-9, {{"max_rel_error", trace_err}}));
  r.assertions.push_back(
      detail::check("full twist relabels twisted duals", relabel_err <= 1e-9, {{"max_rel_error", relabel_err}}));
  r.assertions.push_back(detail::check("Wolpert residual, one-holed tori", wolpert_torus <= 1e-5,
                                       {{"max_residual", wolpert_torus}}));
  r.assertions.push_back(detail::check("Wolpert residual, four-holed spheres", wolpert_sphere <= 1e-5,
                                       {{"max_residual", wolpert_sphere}}));
  return r;
}

// ---------------------------------------------------------------------------
// 3. twist-length inequality

inline std::vector<double> twist_magnitudes() { return {0.1, 0.2, 0.5, 1, 2, 5, 10, 20, 50, 100, 200}; }

inline CriterionResult criterion_twist_length() {
  CriterionResult r{3, "twist-length inequality |l_t - l| <= i(alpha, gamma) |t|", {}, 0.0, 30.0};
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  for (const SurfaceFamily& fam : {detail::flute(), detail::torus_chain()}) {
    for (int a = 2; a <= 20; ++a) {
      const Surface s = calibration_surface(fam, a);
      const CurveIndex alpha = s.graph.interior_curves().front();
      const auto curves = enumerate_curves(s.graph, 3);
      const Holonomy h0(s.graph, s.point);
      std::vector<double> base;
      for (const CurveClass& c : curves) base.push_back(geodesic_length(h0, c).to_double());
      for (double mag : twist_magnitudes()) {
        for (double t : {mag, -mag}) {
          const Holonomy ht(s.graph, apply_twist(s.graph, s.point, TwistVector::single(s.graph.curve_count(), alpha, t)));
          for (std::size_t k = 0; k < curves.size(); ++k) {
            const double d = std::fabs(geodesic_length(ht, curves[k]).to_double() - base[k]);
            const double bound = curves[k].intersection_with(alpha) * std::fabs(t);
            ++checked;
            worst_slack = std::min(worst_slack, bound - d);
            if (d > bound + 1e-9) ++violations;
          }
        }
      }
    }
  }
  r.assertions.push_back(detail::check("no violations over enumerated curves", violations == 0,
                                       {{"checked", static_cast<double>(checked)},
                                        {"violations", static_cast<double>(violations)},
                                        {"min_slack", worst_slack}}));
  return r;
}

// ---------------------------------------------------------------------------
// 4. bound ordering

inline CriterionResult criterion_bounds_ordering(const ConstantsProfile& cp = {}) {
  CriterionResult r{4, "bound ordering: calibrated lower <= exact <= upper", {}, 0.0, 30.0};
  const CalibrationGrid grid = CalibrationGrid::standard();
  for (const SurfaceFamily& fam : {detail::flute(), detail::torus_chain()}) {
    const ConstantsProfile cal = calibrate_constants(fam, grid, cp);
    std::size_t violations = 0;
    double worst_low = std::numeric_limits<double>::infinity();
    double worst_up = std::numeric_limits<double>::infinity();
    for (double a : grid.log_lengths) {
      const Surface s = calibration_surface(fam, a);
      const CurveIndex i = s.graph.interior_curves().front();
      for (double t : grid.twists) {
        const double exact = twist_length_ratio(s.graph, s.point, i, t);
        const double lower = dls_twist_lower(s.graph, s.point, i, t, cal).value;
        const double upper = dls_twist_upper(s.graph, s.point, i, t, cal).value;
        worst_low = std::min(worst_low, exact - lower);
        worst_up = std::min(worst_up, upper - exact);
        if (lower > exact || exact > upper) ++violations;
      }
    }
    r.assertions.push_back(detail::check(std::string("ordering on the ") + to_string(fam.kind) + " grid", violations == 0,
                                         {{"points", static_cast<double>(grid.size())},
                                          {"violations", static_cast<double>(violations)},
                                          {"defect", cal.defect},
                                          {"min_exact_minus_lower", worst_low},
                                          {"min_upper_minus_exact", worst_up}}));
  }
  return r;
}

// ---------------------------------------------------------------------------
// 5. exhaustion monotonicity

inline CriterionResult criterion_exhaustion(const ConstantsProfile& cp = {}, std::uint64_t seed = 5) {
  CriterionResult r{5, "exhaustion: estimate nondecreasing in truncation and twist depth", {}, 0.0, 0.0};
  std::mt19937_64 rng(seed);
  std::size_t violations = 0;
  std::size_t evaluations = 0;
  constexpr int kDepth = 30;
  constexpr int kTwist = 5;
  for (int p = 0; p < 20; ++p) {
    const MarkedPair pair = detail::random_flute_pair(rng, kDepth);
    std::vector<std::vector<double>> est(kDepth + 1, std::vector<double>(kTwist + 1, 0.0));
    for (int n = 2; n <= kDepth; ++n) {
      for (int K = 0; K <= kTwist; ++K) {
        est[n][K] = dls_estimate(pair, K, n, cp).value;
        ++evaluations;
        if (n > 2 && est[n][K] < est[n - 1][K]) ++violations;
        if (K > 0 && est[n][K] < est[n][K - 1]) ++violations;
      }
    }
  }
  r.assertions.push_back(detail::check("monotone over n in 2..30 and K in 0..5 on 20 pairs", violations == 0,
                                       {{"evaluations", static_cast<double>(evaluations)},
                                        {"violations", static_cast<double>(violations)}}));
  return r;
}

// ---------------------------------------------------------------------------
// 6. counterexample trends

inline CriterionResult criterion_counterexample_trends(const ConstantsProfile& cp = {}) {
  CriterionResult r{6, "counterexample trends: d_ls upper falls, d_qc lower rises", {}, 0.0, 30.0};
  const SurfaceFamily fam = detail::flute();
  bool decreasing = true;
  double prev = std::numeric_limits<double>::infinity();
  for (int n = 5; n <= 50; ++n) {
    const double u = diverging_upper_at_law(fam.length_law, static_cast<std::size_t>(n), cp.thresholds);
    if (!(u < prev)) decreasing = false;
    prev = u;
  }
  const DivergingReport d50 = diverging_sequence(fam, 50, cp);
  r.assertions.push_back(detail::check("d_ls upper column decreasing over n in 5..50", decreasing, {{"upper(50)", prev}}));
  r.assertions.push_back(detail::check("d_ls upper below 0.02 by n = 50", d50.dls_upper.value < 0.02,
                                       {{"upper(50)", d50.dls_upper.value}}));

  const Surface s = build_family(fam, 11);
  const CurveIndex i = 10;
  const double rho = min_sin_angle(Holonomy(s.graph, s.point), i);
  std::vector<double> rhos(s.graph.curve_count(), 1.0);
  rhos[i - 1] = rho;
  bool increasing = true;
  double last = -1.0;
  for (int t = 1; t <= 20; ++t) {
    const double v = dqc_lower_multitwist(TwistVector::single(s.graph.curve_count(), i, t), rhos, cp).value;
    if (!(v > last)) increasing = false;
    last = v;
  }
  r.assertions.push_back(detail::check("d_qc lower column increasing over t in 1..20", increasing,
                                       {{"rho", rho}, {"lower(20)", last}}));
  r.assertions.push_back(detail::check("d_qc lower above 2 by t = 20", last > 2.0, {{"lower(20)", last}}));
  return r;
}

// ---------------------------------------------------------------------------
// 7. non-dense point bounds

inline CriterionResult criterion_nondense(const ConstantsProfile& cp = {}) {
  CriterionResult r{7, "non-dense points: collar bound, zk halving, membership", {}, 0.0, 0.0};
  const SurfaceFamily fam = detail::flute();
  constexpr int kDepth = 20;
  for (double N : {0.5, 1.0, 2.0}) {
    const CumulativeReport c = cumulative_point(fam, SequenceSpec::nondense(N), kDepth, cp);
    const double nominal = N / (2.0 * c.collar_c);
    r.assertions.push_back(detail::check("nondense(" + std::to_string(N).substr(0, 3) + ") upper <= N/(2C)",
                                         c.dls_upper <= nominal * (1.0 + 1e-12),
                                         {{"upper", c.dls_upper}, {"N_over_2C", nominal}, {"C", c.collar_c}}));
    const MembershipResult m = ls_membership(MarkedPair(c.base.graph, c.base.point, c.point), 1.05 * N, cp);
    r.assertions.push_back(detail::check("nondense(" + std::to_string(N).substr(0, 3) + ") inside with 1.05 N",
                                         m.verdict == Verdict::Inside, {{"max_twist_ratio", m.max_twist_ratio}}));
  }
  double prev = 0.0;
  for (int k : {1, 2, 4, 8}) {
    const CumulativeReport c = cumulative_point(fam, SequenceSpec::zk(k), kDepth, cp);
    if (k > 1) {
      const double ratio = prev / c.dls_upper;
      r.assertions.push_back(detail::check("zk halves from k=" + std::to_string(k / 2) + " to k=" + std::to_string(k),
                                           std::fabs(ratio - 2.0) <= 0.2, {{"ratio", ratio}}));
    }
    prev = c.dls_upper;
  }
  return r;
}

// ---------------------------------------------------------------------------
// 8. membership dichotomy

inline CriterionResult criterion_membership(const ConstantsProfile& cp = {}) {
  CriterionResult r{8, "membership dichotomy: linear twists inside, exponential twists outside", {}, 0.0, 0.0};
  const SurfaceFamily fam = detail::flute();
  std::vector<Verdict> linear;
  std::vector<Verdict> expo;
  for (int depth : {20, 40}) {
    const CumulativeReport c = cumulative_point(fam, SequenceSpec::nondense(1.0), depth, cp);
    const MembershipResult in = ls_membership(MarkedPair(c.base.graph, c.base.point, c.point), 1.05, cp,
                                              proportional_growth(fam.length_law, 1.0));
    linear.push_back(in.verdict);
    r.assertions.push_back(detail::check("twist n on C_n inside at depth " + std::to_string(depth),
                                         in.verdict == Verdict::Inside, {{"max_twist_ratio", in.max_twist_ratio}}));
    const MembershipResult out =
        ls_membership(exponential_twist_pair(fam, depth), 1.05, cp, exponential_growth(fam.length_law));
    expo.push_back(out.verdict);
    r.assertions.push_back(detail::check(
        "twist e^n on C_n outside with certificate at depth " + std::to_string(depth),
        out.verdict == Verdict::Outside && !out.certificate.empty(),
        {{"witness", static_cast<double>(out.witness.value_or(0))},
         {"probes", static_cast<double>(out.certificate.size())},
         {"last_log_ratio", out.certificate.empty() ? 0.0 : out.certificate.back().second}}));
  }
  r.assertions.push_back(detail::check("verdicts stable from depth 20 to 40", linear[0] == linear[1] && expo[0] == expo[1]));
  return r;
}

// ---------------------------------------------------------------------------
// 9. path

inline CriterionResult criterion_path(const ConstantsProfile& cp = {}) {
  CriterionResult r{9, "path: samples inside and Lipschitz bound on all pairs", {}, 0.0, 0.0};
  const CumulativeReport c = cumulative_point(detail::flute(), SequenceSpec::nondense(1.0), 15, cp);
  const MarkedPair pair(c.base.graph, c.base.point, c.point);
  std::vector<double> samples;
  for (int k = 0; k <= 10; ++k) samples.push_back(k / 10.0);
  const PathReport p = connect_path_report(pair, samples, cp.membership_n, cp);
  r.assertions.push_back(detail::check("every sample inside", p.all_inside, {{"samples", static_cast<double>(samples.size())}}));
  r.assertions.push_back(detail::check("Lipschitz bound on 66 pairs", p.pairs_checked == 66 && p.violations == 0,
                                       {{"pairs", static_cast<double>(p.pairs_checked)},
                                        {"violations", static_cast<double>(p.violations)},
                                        {"lipschitz", p.lipschitz},
                                        {"K", p.match.K},
                                        {"min_slack", p.worst_slack}}));
  return r;
}

// ---------------------------------------------------------------------------
// 10. tail domination

inline CriterionResult criterion_tail(std::uint64_t seed = 10) {
  CriterionResult r{10, "tail domination and the ratio-sum inequality", {}, 0.0, 0.0};
  const LengthLaw fast = LengthLaw::exp_double();
  const std::vector<std::size_t> sel = spacing_selector(fast, 60);
  bool nonincreasing = true;
  bool strict_at_selected = true;
  double prev = boundary_tail(fast, 0);
  for (std::size_t n = 1; n <= 40; ++n) {
    const double t = boundary_tail(fast, n);
    if (t > prev) nonincreasing = false;
    const bool selected = std::find(sel.begin(), sel.end(), n) != sel.end();
    if (selected && !(t < prev)) strict_at_selected = false;
    prev = t;
  }
  const double t5 = boundary_tail(fast, 5);
  const double t10 = boundary_tail(fast, 10);
  r.assertions.push_back(detail::check("partial tails decrease in n", nonincreasing && strict_at_selected && t10 < t5,
                                       {{"tail(5)", t5}, {"tail(10)", t10}}));
  const double x1 = std::log(fast.abs_log(sel.front()));
  const double total = boundary_tail(fast, 0);
  const double integral = xexp_integral_from(x1 - 1.0);
  r.assertions.push_back(detail::check("tail dominated by the integral from x_1 - 1", total <= integral,
                                       {{"sum", total}, {"integral", integral}, {"x1", x1}}));

  std::mt19937_64 rng(seed);
  std::size_t failures = 0;
  for (int k = 0; k < 1000; ++k) {
    const int size = 1 + static_cast<int>(rng() % 20);
    std::vector<double> xs;
    std::vector<double> ys;
    for (int j = 0; j < size; ++j) {
      xs.push_back(detail::log_uniform(rng, 1e-6, 1e6));
      ys.push_back(detail::log_uniform(rng, 1.0, 1e6));
    }
    if (!ratio_sum_lemma(xs, ys).holds) ++failures;
  }
  r.assertions.push_back(detail::check("sum x / sum y <= sum x/y on 1000 tuples", failures == 0,
                                       {{"failures", static_cast<double>(failures)}}));
  return r;
}

// ---------------------------------------------------------------------------
// suites

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"special-functions", "holonomy", "bounds-ordering",
                                              "counterexample-trends", "membership", "path", "all"};
  return names;
}

inline std::vector<int> suite_criteria(const std::string& suite) {
  if (suite == "special-functions") return {1};
  if (suite == "holonomy") return {2};
  if (suite == "bounds-ordering") return {3, 4};
  if (suite == "counterexample-trends") return {5, 6, 7, 10};
  if (suite == "membership") return {8};
  if (suite == "path") return {9};
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  fail(ErrorKind::Configuration, "unknown suite '" + suite + "'");
}

inline CriterionResult run_criterion(int id, const ConstantsProfile& cp = {}) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  switch (id) {
    case 1: r = criterion_special_functions(); break;
    case 2: r = criterion_holonomy(); break;
    case 3: r = criterion_twist_length(); break;
    case 4: r = criterion_bounds_ordering(cp); break;
    case 5: r = criterion_exhaustion(cp); break;
    case 6: r = criterion_counterexample_trends(cp); break;
    case 7: r = criterion_nondense(cp); break;
    case 8: r = criterion_membership(cp); break;
    case 9: r = criterion_path(cp); break;
    case 10: r = criterion_tail(); break;
    default: fail(ErrorKind::Configuration, "criterion id must lie in 1..10");
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline std::vector<CriterionResult> run_suite(const std::string& suite, const ConstantsProfile& cp = {}) {
  std::vector<CriterionResult> out;
  for (int id : suite_criteria(suite)) out.push_back(run_criterion(id, cp));
  return out;
}

}  // namespace fnls::verify
