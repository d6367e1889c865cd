#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hlloco/gait/generator.hpp"
#include "hlloco/gait/trajectory.hpp"

namespace hlloco::gait {
namespace {

void expect_derivatives_consistent(const std::function<Sample(double)>& f,
                                   double tau, double T) {
  // Central differences in tau, converted to seconds.
  const double h = 1e-5;
  const Sample a = f(tau - h), b = f(tau + h), c = f(tau);
  EXPECT_NEAR(c.vel, (b.pos - a.pos) / (2 * h * T), 1e-6);
  EXPECT_NEAR(c.acc, (b.vel - a.vel) / (2 * h * T), 1e-6 * (1 + std::abs(c.acc)));
}

TEST(MinJerkTest, BoundaryConditions) {
  const Sample s0 = min_jerk(0.1, 0.4, 0.0, 0.4);
  const Sample s1 = min_jerk(0.1, 0.4, 1.0, 0.4);
  EXPECT_EQ(s0.pos, 0.1);
  EXPECT_EQ(s0.vel, 0.0);
  EXPECT_EQ(s0.acc, 0.0);
  EXPECT_NEAR(s1.pos, 0.4, 1e-12);
  EXPECT_NEAR(s1.vel, 0.0, 1e-12);
  EXPECT_NEAR(s1.acc, 0.0, 1e-12);
}

TEST(MinJerkTest, MidpointAndQuarterValue) {
  EXPECT_NEAR(min_jerk(-0.2, 0.3, 0.5, 0.4).pos, 0.05, 1e-15);
  const double expected = 0.3 * (10.0 / 64 - 15.0 / 256 + 6.0 / 1024);
  EXPECT_NEAR(min_jerk(0.0, 0.3, 0.25, 0.4).pos, expected, 1e-15);
  EXPECT_NEAR(expected, 0.0310546875, 1e-15);
}

TEST(MinJerkTest, DerivativesMatchFiniteDifferences) {
  for (double tau : {0.1, 0.33, 0.5, 0.9}) {
    expect_derivatives_consistent(
        [](double t) { return min_jerk(-0.25, 0.35, t, 0.4); }, tau, 0.4);
  }
}

TEST(BezierTest, RepeatedEndpointsGiveZeroEndVelocity) {
  const auto b = swing_control_points(0.02, -0.005, 0.14);
  const Sample s0 = bezier5(b, 0.0, 0.4), s1 = bezier5(b, 1.0, 0.4);
  EXPECT_EQ(s0.pos, 0.02);
  EXPECT_EQ(s0.vel, 0.0);
  EXPECT_EQ(s1.pos, -0.005);
  EXPECT_EQ(s1.vel, 0.0);
}

TEST(BezierTest, ApexAboveEndpoints) {
  const auto b = swing_control_points(0.0, 0.0, 0.12);
  EXPECT_NEAR(bezier5(b, 0.5, 0.4).pos, 0.12, 1e-15);
  EXPECT_GT(bezier5(b, 0.5, 0.4).pos, 0.0);
}

TEST(BezierTest, BernsteinSumByHand) {
  // At tau = 1/2 every Bernstein weight is C(5,k)/32.
  const std::array<double, 6> b{0, 0, 0.12, 0.12, -0.005, -0.005};
  const double hand = (10 * 0.12 + 10 * 0.12 + 5 * -0.005 + -0.005) / 32.0;
  EXPECT_NEAR(bezier5(b, 0.5, 0.4).pos, hand, 1e-15);
  EXPECT_NEAR(hand, 0.0740625, 1e-15);
}

TEST(BezierTest, DerivativesMatchFiniteDifferences) {
  const std::array<double, 6> b{0.01, 0.01, 0.2, 0.15, -0.02, -0.02};
  for (double tau : {0.05, 0.4, 0.77}) {
    expect_derivatives_consistent([&](double t) { return bezier5(b, t, 0.35); },
                                  tau, 0.35);
  }
}

TEST(LandingHeightTest, Examples) {
  EXPECT_DOUBLE_EQ(landing_height(0.0, 0.0, 0.0), -0.005);
  EXPECT_NEAR(landing_height(0.0, 0.3, 0.1), 0.025100, 5e-7);
  EXPECT_DOUBLE_EQ(landing_height(0.05, 0.0, 0.0), -0.055);
}

TEST(FadeTest, StartsAtGivenStateAndVanishesAtEnd) {
  const Fade f = Fade::from({0.03, -0.4, 2.0}, 0.3, 0.4);
  const Sample a = f.at(0.3);
  EXPECT_NEAR(a.pos, 0.03, 1e-15);
  EXPECT_NEAR(a.vel, -0.4, 1e-13);
  EXPECT_NEAR(a.acc, 2.0, 1e-11);
  const Sample b = f.at(1.0 - 1e-12);
  EXPECT_NEAR(b.pos, 0.0, 1e-12);
  EXPECT_NEAR(b.vel, 0.0, 1e-9);
  expect_derivatives_consistent([&](double t) { return f.at(t); }, 0.6, 0.4);
}

GaitConfig test_config() {
  GaitConfig c;
  c.nominal_height = 0.75;
  return c;
}

TEST(GaitGeneratorTest, ZeroActionAtStepStart) {
  GaitGenerator gen(test_config(), 4);
  const Vec2 swing0(0.2, 0.0);
  gen.reset(0.0, 0.0, 0.0, swing0, 0.0);
  gen.set_action({0.0, 0.0, 0.0}, 0.0, 0.0, 0.0);
  const auto d = gen.evaluate(0.0, 0.0);
  EXPECT_EQ(d.y[0], 0.0);
  EXPECT_EQ(d.y[1], 0.75);
  EXPECT_EQ(d.y[2], 0.2);
  EXPECT_EQ(d.y[3], 0.0);
}

TEST(GaitGeneratorTest, FootPitchFollowsSlopeForFlatFeet) {
  GaitGenerator gen(test_config(), 5);
  gen.reset(0.0, 0.0, 0.0, Vec2(0.0, 0.0), 0.1);
  EXPECT_DOUBLE_EQ(gen.evaluate(0.1, 0.1).y[4], -0.1);
}

TEST(GaitGeneratorTest, ReachesLandingTargetAtStepEnd) {
  GaitGenerator gen(test_config(), 4);
  gen.reset(0.0, 0.0, 0.0, Vec2(-0.25, 0.0), 0.1);
  gen.set_action({0.3, 0.1, 0.02}, 0.0, 0.0, 0.1);
  const auto d = gen.evaluate(0.4, 0.4);
  EXPECT_NEAR(d.y[2], 0.3, 1e-12);
  EXPECT_NEAR(d.y[3], landing_height(0.02, 0.3, 0.1), 1e-12);
  EXPECT_EQ(d.tau, 1.0);
}

TEST(GaitGeneratorTest, KeepsDescendingAfterNominalEnd) {
  GaitGenerator gen(test_config(), 4);
  gen.reset(0.0, 0.0, 0.0, Vec2(-0.25, 0.0), 0.0);
  gen.set_action({0.3, 0.0, 0.0}, 0.0, 0.0, 0.0);
  const auto a = gen.evaluate(0.45, 0.45);
  EXPECT_LT(a.y[3], landing_height(0.0, 0.3, 0.0));
  EXPECT_LT(a.yd[3], 0.0);
}

TEST(GaitGeneratorTest, RetargetIsContinuous) {
  GaitGenerator gen(test_config(), 4);
  gen.reset(0.0, 0.0, 0.0, Vec2(-0.25, 0.0), 0.05);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> px(-0.6, 0.6), ph(-0.5, 0.5),
      hd(-0.1, 0.1);
  const double dt = 1e-3;
  double t = 0.0;
  OutputVector prev = gen.evaluate(0.0, 0.0).y;
  double worst_rate = 0.0;
  for (int tick = 0; tick < 400; ++tick) {
    if (tick % 30 == 0) {
      gen.set_action({px(rng), ph(rng), hd(rng)}, t, t, 0.05);
    }
    t += dt;
    const auto d = gen.evaluate(t, t);
    worst_rate = std::max(worst_rate, (d.y - prev).norm() / dt);
    prev = d.y;
  }
  // Position never jumps; the bound is a trajectory speed, not a teleport.
  EXPECT_LT(worst_rate, 20.0);
}

TEST(GaitGeneratorTest, DesiredDerivativesMatchFiniteDifferences) {
  GaitGenerator gen(test_config(), 4);
  gen.reset(0.0, 0.0, 0.0, Vec2(-0.2, 0.01), 0.0);
  gen.set_action({0.25, 0.1, 0.03}, 0.0, 0.0, 0.0);
  gen.set_action({0.35, 0.12, 0.03}, 0.12, 0.12, 0.0);
  const double h = 1e-6;
  for (double t : {0.15, 0.25, 0.33}) {
    const auto a = gen.evaluate(t - h, t - h);
    const auto b = gen.evaluate(t + h, t + h);
    const auto c = gen.evaluate(t, t);
    for (int i = 2; i < 4; ++i) {
      EXPECT_NEAR(c.yd[i], (b.y[i] - a.y[i]) / (2 * h), 1e-6);
      EXPECT_NEAR(c.ydd[i], (b.yd[i] - a.yd[i]) / (2 * h), 1e-4);
    }
  }
}

TEST(GaitGeneratorTest, PitchTargetIsSlewLimited) {
  GaitConfig c = test_config();
  GaitGenerator gen(c, 4);
  gen.reset(0.0, 0.0, 0.0, Vec2(0.0, 0.0), 0.0);
  gen.set_action({0.0, 0.5, 0.0}, 0.0, 0.0, 0.0);
  EXPECT_NEAR(gen.evaluate(0.1, 0.1).y[0], 0.1 * c.pitch_rate, 1e-15);
  EXPECT_NEAR(gen.evaluate(1.0, 0.4).y[0], 0.5, 1e-15);
}

TEST(GaitGeneratorTest, LandingFrozenLateInStep) {
  GaitGenerator gen(test_config(), 4);
  gen.reset(0.0, 0.0, 0.0, Vec2(-0.2, 0.0), 0.0);
  gen.set_action({0.3, 0.0, 0.0}, 0.0, 0.0, 0.0);
  gen.set_action({-0.3, 0.0, 0.0}, 0.36, 0.36, 0.0);
  EXPECT_NEAR(gen.landing_x(), 0.3, 1e-15);
}

TEST(ActionBoundsTest, NormalizeRoundTrip) {
  ActionBounds b;
  const HLAction a{0.3, -0.25, 0.05};
  const HLAction r = b.denormalize(b.normalize(a));
  EXPECT_DOUBLE_EQ(r.p_sw_x, a.p_sw_x);
  EXPECT_DOUBLE_EQ(r.q_phi, a.q_phi);
  EXPECT_DOUBLE_EQ(r.h_d, a.h_d);
  const HLAction c = b.clamp({1.0, -1.0, 0.5});
  EXPECT_EQ(c.p_sw_x, 0.6);
  EXPECT_EQ(c.q_phi, -0.5);
  EXPECT_EQ(c.h_d, 0.1);
}

}  // namespace
}  // namespace hlloco::gait
