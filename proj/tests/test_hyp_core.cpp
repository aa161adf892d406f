#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fnls/hyp_core.hpp"

using namespace fnls;

namespace {

// mpmath references (tests/oracles/gen_oracles.py)
constexpr double kMu01 = 3.68636923755285194042;
constexpr double kMu03 = 2.56689794483082231985;
constexpr double kMu05 = 2.00945937700528517284;
constexpr double kMu09 = 1.13966664423442952606;
constexpr double kMu0999 = 0.549123042875611706876;

double mu_pair(double r) { return detail::groetzsch_mu_pair(r, std::sqrt((1.0 - r) * (1.0 + r))); }

}  // namespace

TEST(Groetzsch, MatchesReferenceValues) {
  EXPECT_NEAR(groetzsch_mu(0.1), kMu01, 1e-14);
  EXPECT_NEAR(groetzsch_mu(0.3), kMu03, 1e-14);
  EXPECT_NEAR(groetzsch_mu(0.5), kMu05, 1e-14);
  EXPECT_NEAR(groetzsch_mu(0.9), kMu09, 1e-14);
  EXPECT_NEAR(groetzsch_mu(0.999), kMu0999, 1e-13);
}

TEST(Groetzsch, FixedPointOfComplementIsHalfPi) {
  EXPECT_NEAR(groetzsch_mu(1.0 / std::sqrt(2.0)), std::numbers::pi / 2, 1e-12);
}

TEST(Groetzsch, FunctionalIdentitiesOnLogGrid) {
  const double pi = std::numbers::pi;
  for (int k = 0; k < 50; ++k) {
    const double r = std::pow(10.0, -6.0 + 6.0 * k / 49.0) * (1.0 - 1e-9);
    const double rc = std::sqrt((1.0 - r) * (1.0 + r));
    EXPECT_NEAR(detail::groetzsch_mu_pair(r, rc) * detail::groetzsch_mu_pair(rc, r), pi * pi / 4, 1e-12) << r;
    const double landen = 2.0 * std::sqrt(r) / (1.0 + r);
    if (landen < 1.0) {
      const double lc = (1.0 - r) / (1.0 + r);
      EXPECT_NEAR(detail::groetzsch_mu_pair(landen, lc), mu_pair(r) / 2.0, 1e-12) << r;
    }
  }
}

TEST(Groetzsch, StrictlyDecreasingAndDomain) {
  double prev = groetzsch_mu(0.01);
  for (double r = 0.02; r < 0.999; r += 0.01) {
    const double v = groetzsch_mu(r);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_THROW(groetzsch_mu(0.0), Error);
  EXPECT_THROW(groetzsch_mu(1.0), Error);
}

TEST(QuadModulus, MatchesReferenceValues) {
  EXPECT_NEAR(quad_modulus_h(1e-8), 0.148235394159458819171, 1e-14);
  EXPECT_NEAR(quad_modulus_h(0.5), 0.854584443278743544147, 1e-14);
  EXPECT_NEAR(quad_modulus_h(3.0), 1.27926157117100646619, 1e-14);
  EXPECT_NEAR(quad_modulus_h(1e3), 3.08150828757339051423, 1e-13);
  EXPECT_NEAR(quad_modulus_h(1e7), 6.01309160868209422232, 1e-12);
  EXPECT_NEAR(quad_modulus_h(1e9), 7.47896279068461098447, 1e-12);
  EXPECT_NEAR(quad_modulus_h(1e20), 15.541254378199161191, 1e-12);
  EXPECT_NEAR(quad_modulus_h(1.0), 1.0, 1e-10);
  EXPECT_LT(quad_modulus_h(1e-8), 0.2);
  EXPECT_GT(quad_modulus_h(10.0), quad_modulus_h(9.0));
}

TEST(QuadModulus, BranchesAgreeInOverlap) {
  BranchThresholds exact_only;
  exact_only.modulus = 1e300;
  BranchThresholds asymptotic_only;
  asymptotic_only.modulus = 1.0;
  for (double t : {1e6, 1e7, 1e8, 1e9, 1e10}) {
    EXPECT_NEAR(quad_modulus_h(t, exact_only), quad_modulus_h(t, asymptotic_only), 1e-9) << t;
  }
}

TEST(QuadModulus, ExtendedArgument) {
  const ExtScalar t = ExtScalar::from_log(1e6);
  EXPECT_NEAR(quad_modulus_h(t), (std::log(16.0) + 1e6) / std::numbers::pi, 1e-6);
  EXPECT_THROW(quad_modulus_h(0.0), Error);
  EXPECT_THROW(quad_modulus_h(-ext(1.0)), Error);
}

TEST(TraceLength, ExactAndAsymptoticBranches) {
  EXPECT_NEAR(trace_to_length(ext(3.0)).to_double(), 2.0 * std::acosh(1.5), 1e-15);
  EXPECT_NEAR(trace_to_length(ext(-3.0)).to_double(), 2.0 * std::acosh(1.5), 1e-15);
  EXPECT_NEAR(trace_to_length(ext(1e40)).to_double(), 184.2068074395236547, 1e-12);
  const ExtScalar huge = ExtScalar::from_log(1e5);
  EXPECT_NEAR(trace_to_length(huge).to_double(), 2e5, 1e-9);
  EXPECT_THROW(trace_to_length(ext(1.5)), Error);
}

TEST(Collar, MatchesReferenceValues) {
  EXPECT_NEAR(collar_half_width(ext(2.0 * std::asinh(1.0))).to_double(), 0.881373587019543025, 1e-15);
  EXPECT_NEAR(collar_half_width(ExtScalar::from_log(-20.0)).to_double(), 21.38629436111989061892, 1e-13);
  EXPECT_NEAR(collar_half_width(ext(1e-9)).to_double(), 22.109560198066301775, 1e-13);
  EXPECT_NEAR(collar_half_width(ext(1e-7)).to_double(), 17.5043900120782106153, 1e-13);
  EXPECT_NEAR(collar_half_width(ext(3.0)).to_double(), 0.453895736908206405538, 1e-15);
}

TEST(Collar, BranchesAgreeForShortCurves) {
  BranchThresholds exact_only;
  exact_only.length = 0.0;
  BranchThresholds asymptotic_only;
  asymptotic_only.length = 1.0;
  for (double l = 1e-10; l <= 1e-6; l *= 3.0) {
    EXPECT_NEAR(collar_half_width(ext(l), exact_only).to_double(), collar_half_width(ext(l), asymptotic_only).to_double(),
                1e-9)
        << l;
  }
  const ExtScalar tiny = ExtScalar::from_log(-1e9);
  EXPECT_NEAR(collar_half_width(tiny).to_double(), 1e9 + std::log(4.0), 1e-6);
}

TEST(CrossRatio, MoebiusInvariance) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  auto mob = [](const std::array<double, 4>& g, double x) { return (g[0] * x + g[1]) / (g[2] * x + g[3]); };
  for (int n = 0; n < 200; ++n) {
    std::array<double, 4> p{u(rng), u(rng), u(rng), u(rng)};
    std::array<double, 4> g{u(rng), u(rng), u(rng), 0.0};
    if (std::fabs(g[0]) < 0.1) g[0] = 1.0;
    g[3] = (1.0 + g[1] * g[2]) / g[0];  // det = 1
    auto chi = [](const std::array<double, 4>& q) {
      return cross_ratio(BoundaryPoint::finite(q[0]), BoundaryPoint::finite(q[1]), BoundaryPoint::finite(q[2]),
                         BoundaryPoint::finite(q[3]));
    };
    std::array<double, 4> q{};
    for (int k = 0; k < 4; ++k) q[k] = mob(g, p[k]);
    const double before = chi(p);
    EXPECT_NEAR(chi(q), before, 1e-10 * std::max(1.0, std::fabs(before)));
  }
}

TEST(CrossRatio, InfinityAndDegenerateInput) {
  const auto inf = BoundaryPoint::infinity();
  const auto f = [](double x) { return BoundaryPoint::finite(x); };
  // chi(0, x2, x1, inf) = (0 - x1) / (x2 - x1)
  EXPECT_NEAR(cross_ratio(f(0.0), f(0.5), f(-2.0), inf), 2.0 / 2.5, 1e-15);
  EXPECT_THROW(cross_ratio(f(1.0), f(1.0), f(2.0), inf), Error);
}

TEST(EndpointBound, ExamplesAndSign) {
  EXPECT_EQ(twist_endpoint_bound(-1.0, 1.0, 0.0), -1.0);
  EXPECT_NEAR(twist_endpoint_bound(-1.0, 1.0, 1.0), -std::exp(1.0), 1e-15);
  EXPECT_EQ(twist_endpoint_bound(-2.0, 0.5, 0.0), -2.0);
  for (double x1 : {-4.0, -1.0, -0.25}) {
    const double x2 = -1.0 / x1;
    double prev = twist_endpoint_bound(x1, x2, 0.0);
    for (double t = 0.05; t <= 10.0; t += 0.05) {
      const double b = twist_endpoint_bound(x1, x2, t);
      EXPECT_LT(b, 0.0);
      EXPECT_LT(b, prev);
      prev = b;
    }
  }
  EXPECT_THROW(twist_endpoint_bound(1.0, 2.0, 1.0), Error);
  EXPECT_THROW(twist_endpoint_bound(-1.0, 2.0, 1.0), Error);
  EXPECT_THROW(twist_endpoint_bound(-1.0, 1.0, -1.0), Error);
}

// Left earthquake of magnitude t along the first n lifts of a pants curve met
// by the perpendicular dual of a cusped one-holed torus with l = 1, lifts d
// apart. Evaluated in the frame where the dual's axis is (0, inf) and the lifts
// are the semicircles |z| = e^{-kd}, so every intermediate value is positive;
// z -> (z-1)/(z+1) carries the result back to the frame of the axis (-1, 1).
namespace {

double earthquake_image(int leaves, double t, double d) {
  const double ch = std::cosh(t / 2);
  const double sh = -std::sinh(t / 2);
  double x = 0.0;  // the endpoint -1 in this frame
  for (int k = leaves - 1; k >= 0; --k) {
    const double s = std::exp(-k * d);
    const double z = x / s;
    x = s * (ch * z + sh) / (sh * z + ch);
  }
  return (x - 1.0) / (x + 1.0);
}

constexpr double kTorusD = 2.81365822749459050554;  // perpendicular dual, l = 1, cusp

}  // namespace

TEST(EndpointBound, FiniteLeafEarthquakeOracle) {
  // mpmath values for 1..7 leaves
  const double ref[] = {-2.71828182845904523536, -2.87328088369170594445, -2.88071621879395677965,
                        -2.88105843937188418433, -2.88107415994112746736, -2.88107488203163343159,
                        -2.881074915199170308};
  const double bound = twist_endpoint_bound(-1.0, 1.0, 1.0);
  double prev_gap = 0.0;
  for (int n = 1; n <= 7; ++n) {
    const double img = earthquake_image(n, 1.0, kTorusD);
    EXPECT_NEAR(img, ref[n - 1], 1e-14) << n;
    if (n == 1) {
      EXPECT_NEAR(img, bound, 1e-15);
    } else {
      EXPECT_LT(img, bound) << n;  // strictly left once a second leaf is crossed
      const double gap = bound - img;
      EXPECT_GT(gap, prev_gap);
      prev_gap = gap;
    }
  }
  // the gap converges: the seventh leaf moves the image by less than 1e-7
  EXPECT_LT(earthquake_image(6, 1.0, kTorusD) - earthquake_image(7, 1.0, kTorusD), 1e-7);
}

TEST(Angles, FromEndpoints) {
  const AngleData perp = angle_from_endpoints(-1.0, 1.0);
  EXPECT_NEAR(perp.theta, std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(perp.sin_theta, 1.0, 1e-15);
  const AngleData a = angle_from_endpoints(-2.0, 0.5);
  EXPECT_NEAR(a.sin_theta, 0.8, 1e-15);
  const double cos_half_sq = std::pow(std::cos(a.theta / 2), 2);
  EXPECT_NEAR(cos_half_sq, 2.0 / 2.5, 1e-12);
  EXPECT_NEAR(cos_half_sq,
              cross_ratio(BoundaryPoint::finite(0.0), BoundaryPoint::finite(0.5), BoundaryPoint::finite(-2.0),
                          BoundaryPoint::infinity()),
              1e-12);
  EXPECT_THROW(angle_from_endpoints(-2.0, 1.0), Error);
}

TEST(KConstant, ValuesAndMonotonicity) {
  EXPECT_NEAR(k_constant(1.0), 1.0, 0.0);
  EXPECT_NEAR(k_constant(0.6), 0.0136784028464067278, 1e-17);
  EXPECT_NEAR(k_constant(0.6), 0.2 / (1.8 * (std::sqrt(17.0) + 4.0)), 1e-17);
  EXPECT_GT(k_constant(0.99), k_constant(0.6));
  double prev = 0.0;
  for (double rho = 0.01; rho <= 1.0; rho += 0.01) {
    const double k = k_constant(rho);
    EXPECT_GT(k, prev);
    EXPECT_LE(k, 1.0);
    prev = k;
  }
  EXPECT_THROW(k_constant(0.0), Error);
  EXPECT_THROW(k_constant(1.5), Error);
}

TEST(KConstant, UniformDisplayedConstantExceedsK) {
  // (1-s)^2/(1+s) > K(rho) for every rho < 1: the displayed uniform constant
  // is not a lower bound for the per-curve constant.
  for (double rho = 0.05; rho < 1.0; rho += 0.05) EXPECT_GT(uniform_k_constant(rho), k_constant(rho)) << rho;
  EXPECT_NEAR(uniform_k_constant(1.0), 1.0, 0.0);
}
