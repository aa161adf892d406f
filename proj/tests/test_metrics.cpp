#include <cmath>

#include <gtest/gtest.h>

#include "fnls/constructions.hpp"
#include "fnls/metrics.hpp"

using namespace fnls;

namespace {

SurfaceFamily flute() { return SurfaceFamily{}; }

SurfaceFamily torus_chain() {
  SurfaceFamily f;
  f.kind = FamilyKind::TorusChain;
  return f;
}

}  // namespace

// |t| / (4 w) with t = log n on l = e^{-n}; mpmath references
TEST(TwistUpper, LogLogTwistReferences) {
  const LengthLaw law = LengthLaw::exp_linear(1.0);
  EXPECT_NEAR(diverging_upper_at_law(law, 10), 0.0505560681104439005, 1e-15);
  EXPECT_NEAR(diverging_upper_at_law(law, 50), 0.0190324241807367851, 1e-15);
  EXPECT_NEAR(diverging_upper_at_law(law, 100), 0.0113555047430407527, 1e-15);
}

TEST(TwistUpper, SurfaceAndLawFormsAgree) {
  const Surface s = build_family(flute(), 8);
  for (CurveIndex i = 1; i < 8; ++i) {
    const double t = std::log(static_cast<double>(i) + 1.0);
    EXPECT_NEAR(dls_twist_upper(s.graph, s.point, i, t).value, dls_twist_upper_value(s.point.length(i), t), 1e-16);
  }
  EXPECT_EQ(dls_twist_upper(s.graph, s.point, 2, 1.0).kind, BoundKind::Upper);
  EXPECT_THROW(dls_twist_upper(s.graph, s.point, 8, 1.0), Error);
}

TEST(TwistUpper, DominatesTheMeasuredRatio) {
  const Surface s = build_family(flute(), 12);
  for (CurveIndex i = 2; i < 12; ++i)
    for (double t : {0.5, 3.0, 30.0, -30.0})
      EXPECT_LE(std::fabs(twist_length_ratio(s.graph, s.point, i, t)), dls_twist_upper(s.graph, s.point, i, t).value + 1e-12);
}

TEST(TwistLower, ClampedAndHypotheses) {
  EXPECT_EQ(dls_twist_lower_value(ExtScalar::from_log(-10.0), 3.0, 5.0), 0.0);
  EXPECT_NEAR(dls_twist_lower_value(ExtScalar::from_log(-10.0), 100.0, 5.0), 0.5 * std::log(115.0 / 25.0), 1e-15);
  const Surface s = build_family(flute(), 4);
  ConstantsProfile cp;
  EXPECT_THROW(dls_twist_lower(s.graph, s.point, 1, 5.0, cp), Error);  // e^{-1} > eps1
  EXPECT_NO_THROW(dls_twist_lower(s.graph, s.point, 3, 5.0, cp));
}

// 1/2 log(h(K e^t) / h((1+s)/(1-s))); mpmath references
TEST(QuasiconformalLower, References) {
  const struct {
    double rho, t, want;
  } cases[] = {
      {0.9, 5, 0.230141585704738710},  {0.9, 10, 0.527075044502587972}, {0.9, 20, 0.847656536552259741},
      {1.0, 5, 0.453152779837986615},  {1.0, 10, 0.701286629952220016}, {1.0, 20, 0.990413838925276525},
  };
  for (const auto& c : cases) {
    const Bound b = dqc_lower_multitwist(TwistVector::single(3, 2, c.t), {1.0, c.rho, 1.0});
    EXPECT_NEAR(b.value, c.want, 1e-13) << c.rho << " " << c.t;
    ASSERT_TRUE(b.witness.has_value());
    EXPECT_EQ(*b.witness, CurveClass::pants_curve(2));
  }
}

TEST(QuasiconformalLower, UniformNeverExceedsPerCurve) {
  for (double rho : {0.3, 0.6, 0.95}) {
    const TwistVector t({2.0, 7.0, 1.0});
    EXPECT_LE(dqc_lower_uniform(t, rho).value, dqc_lower_multitwist(t, {rho, rho, rho}).value + 1e-15);
    EXPECT_TRUE(displayed_uniform_exceeds_k(rho));
    EXPECT_GE(dqc_lower_uniform_displayed(t, rho), dqc_lower_uniform(t, rho).value);
  }
  EXPECT_THROW(dqc_lower_multitwist(TwistVector::single(2, 1, 1.0), {0.0, 1.0}), Error);
  EXPECT_THROW(dqc_lower_multitwist(TwistVector::single(2, 1, 1.0), {1.0}), Error);
}

TEST(Estimate, TruncationAndWitness) {
  const Surface s = build_family(flute(), 6);
  const FNPoint y = apply_twist(s.graph, s.point, TwistVector::single(6, 3, 4.0));
  const MarkedPair pair(s.graph, s.point, y);
  const Bound full = dls_estimate(pair, 2, 6);
  EXPECT_EQ(full.kind, BoundKind::Lower);
  ASSERT_TRUE(full.witness.has_value());
  EXPECT_EQ(full.witness->curve, 3u);
  EXPECT_GT(full.value, 0.0);
  EXPECT_EQ(dls_estimate(pair, 2, 3).value, 0.0);  // twist on C_3 is cut at depth 3
  EXPECT_THROW(dls_estimate(pair, 2, 7), Error);
  EXPECT_LE(full.value, dls_twist_upper(s.graph, s.point, 3, 4.0).value + 1e-12);
}

TEST(Estimate, MonotoneInK) {
  const Surface s = build_family(flute(), 5);
  const FNPoint y = apply_twist(s.graph, s.point, TwistVector({0.3, -2.0, 1.5, 0.7, 0.0}));
  const MarkedPair pair(s.graph, s.point, y);
  double prev = 0.0;
  for (long long K = 0; K <= 4; ++K) {
    const double v = dls_estimate(pair, K, 5).value;
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Membership, Verdicts) {
  const Surface s = build_family(flute(), 10);
  EXPECT_EQ(ls_membership(MarkedPair(s.graph, s.point, s.point), 1.05).verdict, Verdict::Inside);

  const MarkedPair far = exponential_twist_pair(flute(), 10);
  const MembershipResult bare = ls_membership(far, 1.05);
  EXPECT_EQ(bare.verdict, Verdict::Undetermined);
  ASSERT_TRUE(bare.witness.has_value());

  const MembershipResult certified = ls_membership(far, 1.05, {}, exponential_growth(LengthLaw::exp_linear(1.0)));
  EXPECT_EQ(certified.verdict, Verdict::Outside);
  ASSERT_GE(certified.certificate.size(), 2u);
  for (std::size_t k = 1; k < certified.certificate.size(); ++k) {
    EXPECT_EQ(certified.certificate[k].first, certified.certificate[k - 1].first + 10);
    EXPECT_GT(certified.certificate[k].second, certified.certificate[k - 1].second);
  }
  EXPECT_GT(certified.certificate.back().second, std::log(1e6));
  EXPECT_THROW(ls_membership(far, 0.0), Error);
}

TEST(Membership, ProportionalGrowthHasNoCertificate) {
  EXPECT_FALSE(growth_certificate(proportional_growth(LengthLaw::exp_linear(1.0), 0.5), 10, 1e6).has_value());
}

TEST(Calibration, FluteProfile) {
  const ConstantsProfile cp = calibrate_constants(flute(), CalibrationGrid::standard());
  EXPECT_TRUE(cp.calibrated);
  EXPECT_EQ(cp.family, "flute");
  EXPECT_EQ(cp.grid_points, 64u);
  EXPECT_EQ(cp.grid_hash, "3079625d92d990a0");
  EXPECT_NEAR(cp.defect, 3.8586, 1e-3);
  EXPECT_GT(cp.rho_floor, 0.99);
  EXPECT_LE(cp.rho_floor, 1.0);
  // the calibrated defect makes the lower bound sound on its own grid
  const CalibrationGrid g = CalibrationGrid::standard();
  for (double a : g.log_lengths) {
    const Surface s = calibration_surface(flute(), a);
    for (double t : g.twists)
      EXPECT_LE(dls_twist_lower_value(s.point.length(1), t, cp.defect), twist_length_ratio(s.graph, s.point, 1, t) + 1e-12);
  }
}

TEST(Calibration, TorusChainHashAndSmallGrid) {
  const ConstantsProfile cp = calibrate_constants(torus_chain(), CalibrationGrid::standard());
  EXPECT_EQ(cp.grid_hash, "c62b420f7de5a11f");
  EXPECT_EQ(cp.family, "torus-chain");
  CalibrationGrid small;
  small.log_lengths = {6.0};
  small.twists = {1.0, 2.0};
  EXPECT_THROW(calibrate_constants(flute(), small), Error);
}

TEST(ChoiRafi, ResidualPerCrossingStaysBounded) {
  ConstantsProfile cp;
  for (double a : {8.0, 14.0, 20.0}) {
    const Surface s = calibration_surface(flute(), a);
    for (double t : {0.0, 10.0, 100.0}) {
      const FNPoint x = s.point.with_twist(1, t);
      const ChoiRafiEstimate e = choi_rafi_estimates(s.graph, x, 1, dual_curve(s.graph, 1), cp);
      EXPECT_EQ(e.crossings, 2);
      EXPECT_LT(e.residual / e.crossings, 2.0 * std::log(2.0) + 0.1) << a << " " << t;
      const double turns = t / s.point.length(1).to_double();
      EXPECT_NEAR(e.twist, turns, 1e-3 + 1e-6 * turns);
    }
  }
  const Surface s = build_family(flute(), 3);
  EXPECT_THROW(choi_rafi_estimates(s.graph, s.point, 1, dual_curve(s.graph, 1), cp), Error);
}

TEST(CollarConstant, MinimumOverLengths) {
  const std::vector<ExtScalar> ls{ExtScalar::from_log(-5.0), ExtScalar::from_log(-50.0), ExtScalar::from_log(-1e6)};
  const double c = collar_constant(ls);
  EXPECT_GT(c, 2.0);
  // 2w / |log l| falls towards 2 as l shrinks, so the shortest curve decides
  EXPECT_NEAR(c, 2.0 * collar_half_width(ls[2]).to_double() / 1e6, 1e-15);
  EXPECT_THROW(collar_constant({}), Error);
}

TEST(Profile, Validation) {
  ConstantsProfile cp;
  EXPECT_NO_THROW(cp.validate());
  cp.eps1 = 0.3;
  EXPECT_THROW(cp.validate(), Error);
  cp = {};
  cp.rho_floor = 1.5;
  EXPECT_THROW(cp.validate(), Error);
}
