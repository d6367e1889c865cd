#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "hlloco/common/errors.hpp"
#include "hlloco/env/locomotion_env.hpp"
#include "hlloco/eval/episode.hpp"
#include "hlloco/rigid_body/dynamics.hpp"
#include "hlloco/rigid_body/kinematics.hpp"
#include "hlloco/rigid_body/pose.hpp"
#include "test_support.hpp"

namespace hlloco::env {
namespace {

using rigid_body::FullState;

LocomotionEnv make_env(const std::string& robot = "rabbit") {
  EnvConfig c;
  c.robot = robot;
  return LocomotionEnv(c, testing::robot_from_file(robot));
}

EpisodeConfig quiet(double v = 0.0) {
  EpisodeConfig e;
  e.v_profile = VelocityProfile::constant(v);
  e.reset_noise = false;
  return e;
}

TEST(ResetTest, NoNoiseGivesNominalPose) {
  auto env = make_env();
  env.reset(quiet());
  const FullState ref = standing_on_slope(env.model(), 0.0);
  EXPECT_EQ(env.state().q, ref.q);
  EXPECT_TRUE(env.state().qd.isZero(0.0));
  EXPECT_EQ(env.state().t_step, 0.0);
  EXPECT_EQ(env.time(), 0.0);
}

TEST(ResetTest, StanceFootIsUnderTheCom) {
  auto env = make_env();
  env.reset(quiet());
  EXPECT_LT(std::abs(env.alip_state_com().p), 0.03);
}

TEST(ResetTest, SameSeedSameObservation) {
  auto a = make_env();
  auto b = make_env();
  EpisodeConfig e;
  e.seed = 42;
  EXPECT_EQ(a.reset(e), b.reset(e));
  EXPECT_EQ(a.state().qd, b.state().qd);
  e.seed = 43;
  EXPECT_NE(a.reset(e), b.observe());
}

TEST(ResetTest, NoiseIsCenteredOnNominal) {
  auto env = make_env();
  const FullState ref = standing_on_slope(env.model(), 0.0);
  const int n = 1000;
  const int dof = env.model().dof();
  DofVector sum = DofVector::Zero(dof);
  for (int k = 0; k < n; ++k) {
    EpisodeConfig e;
    e.seed = 1000 + k;
    env.reset(e);
    sum += env.state().q - ref.q;
  }
  const double se = env.config().q_noise / std::sqrt(double(n));
  for (int i = 2; i < dof; ++i) EXPECT_LT(std::abs(sum[i] / n), 3 * se) << i;
}

TEST(ResetTest, NoisyResetSatisfiesContact) {
  auto env = make_env();
  EpisodeConfig e;
  e.seed = 9;
  env.reset(e);
  const auto& s = env.state();
  const auto kin = rigid_body::forward_kinematics(env.model(), s.q);
  EXPECT_LT((rigid_body::foot_position(env.model(), kin, s.stance) -
             s.contact_point).norm(), 1e-12);
  EXPECT_LT(rigid_body::foot_velocity(env.model(), kin, s.stance).norm(), 1e-9);
}

TEST(ResetTest, RejectsInvalidConfig) {
  auto env = make_env();
  EpisodeConfig e = quiet();
  e.alpha = 0.4;
  EXPECT_THROW(env.reset(e), InvalidConfig);
  e = quiet();
  e.disturbances.push_back({1.0, 0.1, 100.0});
  EXPECT_THROW(env.reset(e), InvalidConfig);
  e = quiet();
  e.max_hl_steps = 0;
  EXPECT_THROW(env.reset(e), InvalidConfig);
}

TEST(ObservationTest, Layout) {
  auto env = make_env();
  EpisodeConfig e = quiet(0.7);
  e.alpha = 0.05;
  const Observation o = env.reset(e);
  EXPECT_EQ(o[0], env.alip_state().p);
  EXPECT_EQ(o[1], env.alip_state().L);
  EXPECT_DOUBLE_EQ(o[2], -0.7);
  EXPECT_EQ(o[3], 0.7);
  EXPECT_EQ(o[4], 0.05);
}

TEST(RewardTest, ZeroErrorsGiveWeightSum) {
  const NormalizedAction a = NormalizedAction::Constant(0.3);
  const RewardTerms t = reward_terms(0.4, 0.4, 0.0, a, a);
  EXPECT_DOUBLE_EQ(reward(t, RewardWeights{}), 1.0);
}

TEST(RewardTest, VelocityErrorOfOne) {
  const NormalizedAction a = NormalizedAction::Zero();
  const RewardTerms t = reward_terms(1.0, 0.0, 0.0, a, a);
  const RewardWeights w;
  EXPECT_NEAR(w.w[0] * t.r_vx, 0.2207, 5e-5);
  EXPECT_NEAR(reward(t, w), 0.6 * std::exp(-1.0) + 0.4, 1e-15);
}

TEST(RewardTest, UnitActionChange) {
  NormalizedAction prev = NormalizedAction::Zero();
  NormalizedAction a = NormalizedAction::Zero();
  a[1] = 1.0;
  EXPECT_NEAR(reward(reward_terms(0.0, 0.0, 0.0, prev, a), RewardWeights{}),
              0.8736, 5e-5);
}

TEST(RewardTest, MonotoneInVelocityError) {
  const NormalizedAction a = NormalizedAction::Zero();
  double last = 2.0;
  for (double e = 0.0; e < 3.0; e += 0.05) {
    const double r = reward(reward_terms(0.2 + e, 0.2, 0.3, a, a), RewardWeights{});
    EXPECT_LT(r, last);
    last = r;
  }
}

TEST(RewardTest, LateralTermIsNeutral) {
  const NormalizedAction a = NormalizedAction::Zero();
  EXPECT_EQ(reward_terms(0.3, 0.1, 2.0, a, a).r_vy, 1.0);
}

TEST(TerrainTest, Height) {
  EXPECT_EQ(rigid_body::TerrainSpec{0.0}.height(3.7), 0.0);
  EXPECT_NEAR(rigid_body::TerrainSpec{0.1745}.height(1.0), 0.1763, 5e-5);
}

TEST(TerrainTest, LandingTargetTouchesSurface) {
  // Base at the commanded height over a slope; swing foot placed on the
  // output-frame landing target with no undershoot.
  const auto model = testing::robot_from_file("rabbit");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double alpha = 0.2 * U(rng);
    const double h_d = -0.05 - 0.05 * std::abs(U(rng));
    const double px = 0.2 * U(rng);
    const rigid_body::TerrainSpec terrain{alpha};
    FullState s = rigid_body::standing_state(model);
    s.q[0] = 2.0 * U(rng);
    s.q[1] = terrain.height(s.q[0]) + model.nominal_base_height + h_d;
    const double y3 = gait::landing_height(h_d, px, alpha, 0.0);
    const Vec2 foot(s.q[0] + px, s.q[1] + y3 - model.nominal_base_height);
    ASSERT_TRUE(rigid_body::solve_leg_ik(model, s.swing(), foot, 0.0, s.q));
    const auto kin = rigid_body::forward_kinematics(model, s.q);
    const auto c = rigid_body::foot_clearance(model, kin, s.swing(), alpha);
    EXPECT_LE(std::abs(c.height), 1e-12);
    EXPECT_LT(c.height, rigid_body::StepOptions{}.contact_threshold);
  }
}

TEST(VelocityTrackerTest, ConstantVelocity) {
  VelocityTracker v(0.4, 1e-3);
  for (int i = 0; i < 100; ++i) v.add(0.7);
  EXPECT_NEAR(v.average(), 0.7, 1e-14);
  v.touchdown();
  for (int i = 0; i < 50; ++i) v.add(0.7);
  EXPECT_NEAR(v.average(), 0.7, 1e-14);
}

TEST(VelocityTrackerTest, OscillationOverOneStep) {
  VelocityTracker v(0.4, 1e-3);
  v.touchdown();
  const int n = 400;
  for (int i = 0; i < n; ++i) v.add(0.5 + 0.3 * std::sin(2 * M_PI * i / n));
  v.touchdown();
  EXPECT_NEAR(v.average(), 0.5, 1e-14);
}

TEST(VelocityTrackerTest, MatchesLogReplay) {
  // Recomputes the mean over the last completed step (or the trailing
  // window before the first touchdown) from the raw per-tick log.
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.4, 0.2);
  VelocityTracker v(0.4, 1e-3);
  std::vector<double> log;
  std::vector<std::size_t> marks{0};  // the first step starts at reset
  for (int i = 0; i < 3000; ++i) {
    const double x = n(rng);
    log.push_back(x);
    v.add(x);
    if (i == 150 || i == 520 || i == 899 || i == 1300 || i == 2111) {
      v.touchdown();
      marks.push_back(log.size());
    }
    double expect;
    if (marks.size() >= 2) {
      const std::size_t a = marks[marks.size() - 2];
      const std::size_t b = marks.back();
      expect = 0.0;
      for (std::size_t j = a; j < b; ++j) expect += log[j];
      expect /= double(b - a);
    } else {
      const std::size_t a = log.size() > 400 ? log.size() - 400 : 0;
      expect = 0.0;
      for (std::size_t j = a; j < log.size(); ++j) expect += log[j];
      expect /= double(log.size() - a);
    }
    ASSERT_NEAR(v.average(), expect, 1e-12) << i;
  }
}

TEST(StepTest, ThirtyTicksPerStep) {
  auto env = make_env();
  env.reset(quiet(0.3));
  eval::AlipBaseline planner(env.alip_params());
  planner.reset(env);
  for (int k = 1; k <= 40; ++k) {
    const auto r = env.hl_step(planner.act(env));
    planner.observe(r);
    ASSERT_FALSE(r.terminated);
    EXPECT_NEAR(env.time(), 0.03 * k, 1e-12);
  }
}

TEST(StepTest, StandingPoseEarnsFullReward) {
  // The gait lifts the swing leg from the first tick, so the standing pose
  // itself is where every error term vanishes.
  auto env = make_env();
  env.reset(quiet(0.0));
  const auto& s = env.state();
  const auto com = rigid_body::com_state(env.model(), s);
  const double L_com = rigid_body::angular_momentum(env.model(), s, com.position);
  const NormalizedAction zero =
      env.config().bounds.normalize({0.0, 0.0, 0.0});
  EXPECT_EQ(L_com, 0.0);
  EXPECT_EQ(env.average_velocity(), 0.0);
  EXPECT_DOUBLE_EQ(
      reward(reward_terms(env.average_velocity(), 0.0, L_com, zero, zero),
             env.config().reward),
      1.0);
  const auto r = env.hl_step({0.0, 0.0, 0.0});
  EXPECT_GT(r.reward, 0.0);
  EXPECT_LE(r.reward, 1.0);
  EXPECT_EQ(r.diag.terms.r_a, 1.0);
}

TEST(StepTest, PitchPastLimitTerminates) {
  auto env = make_env();
  env.reset(quiet());
  FullState s = env.state();
  s.q[2] = 1.05;
  env.set_state(s);
  const auto r = env.hl_step({0.0, 0.0, 0.0});
  EXPECT_TRUE(r.terminated);
  EXPECT_EQ(r.diag.fall, FallCause::kPitch);
  EXPECT_TRUE(env.done());
}

TEST(StepTest, LowBaseTerminates) {
  auto env = make_env();
  env.reset(quiet());
  FullState s = rigid_body::standing_state(env.model(), 0.45, 0.1);
  env.set_state(s);
  const auto r = env.hl_step({0.0, 0.0, 0.0});
  EXPECT_TRUE(r.terminated);
  EXPECT_EQ(r.diag.fall, FallCause::kHeight);
}

TEST(StepTest, ZeroFootstepFalls) {
  // Holding the swing foot next to the stance foot never catches the fall.
  auto env = make_env();
  EpisodeConfig e = quiet(0.0);
  env.reset(e);
  FullState s = env.state();
  s.qd[0] = 0.6;
  rigid_body::project_to_contact(env.model(), s);
  env.set_state(s);
  StepResult r;
  while (!env.done()) r = env.hl_step({0.0, 0.0, 0.0});
  EXPECT_TRUE(r.terminated);
  EXPECT_NE(r.diag.fall, FallCause::kNone);
}

TEST(EpisodeTest, DeterministicTrajectories) {
  auto run = [] {
    auto env = make_env();
    EpisodeConfig e;
    e.seed = 77;
    e.v_profile.segments = {{0.0, 0.2}, {1.5, 0.5}};
    e.max_hl_steps = 120;
    eval::AlipBaseline p(env.alip_params());
    const auto log = eval::run_episode(env, e, p);
    return std::make_pair(log, env.state());
  };
  const auto [a, sa] = run();
  const auto [b, sb] = run();
  ASSERT_EQ(a.steps.size(), b.steps.size());
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    EXPECT_EQ(a.steps[i].v_bar, b.steps[i].v_bar);
    EXPECT_EQ(a.steps[i].L_com, b.steps[i].L_com);
  }
  EXPECT_EQ(a.total_reward, b.total_reward);
  EXPECT_EQ(sa.q, sb.q);
  EXPECT_EQ(sa.qd, sb.qd);
}

TEST(EpisodeTest, CapAndInvariants) {
  auto env = make_env();
  EpisodeConfig e;
  e.seed = 3;
  e.v_profile = VelocityProfile::constant(0.3);
  e.max_hl_steps = 300;
  env.reset(e);
  eval::AlipBaseline p(env.alip_params());
  p.reset(env);
  StepResult r;
  while (!env.done()) {
    r = env.hl_step(p.act(env));
    p.observe(r);
    EXPECT_GT(r.reward, 0.0);
    EXPECT_LE(r.reward, 1.0);
    if (!r.terminated) {
      EXPECT_LT(std::abs(r.diag.pitch), 1.0);
      EXPECT_GT(r.diag.height, 0.5);
    }
    EXPECT_TRUE(r.obs.allFinite());
  }
  EXPECT_EQ(env.hl_steps(), 300);
  EXPECT_TRUE(r.truncated);
  EXPECT_FALSE(r.terminated);
}

TEST(EpisodeTest, DisturbancePushesForward) {
  auto run = [](double force) {
    auto env = make_env();
    EpisodeConfig e = quiet(0.0);
    e.max_hl_steps = 40;
    if (force != 0.0) e.disturbances.push_back({0.3, 0.15, force});
    eval::AlipBaseline p(env.alip_params());
    eval::run_episode(env, e, p);
    return env.state().q[0];
  };
  const double x0 = run(0.0);
  EXPECT_GT(run(40.0), x0 + 0.01);
  EXPECT_LT(run(-40.0), x0 - 0.01);
}

TEST(EpisodeTest, SlopeEpisodeStartsOnSurface) {
  auto env = make_env("walker2d");
  EpisodeConfig e = quiet(0.0);
  e.alpha = 0.17;
  env.reset(e);
  const auto kin = rigid_body::forward_kinematics(env.model(), env.state().q);
  for (Side side : {Side::kLeft, Side::kRight}) {
    const auto c = rigid_body::foot_clearance(env.model(), kin, side, e.alpha);
    EXPECT_NEAR(c.height, 0.0, 1e-9);
  }
  EXPECT_NEAR(env.state().q[1], env.model().nominal_base_height, 1e-12);
}

TEST(CurriculumTest, SampledEpisodesRespectRanges) {
  EnvConfig c;
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const auto e = sample_training_episode(c, rng);
    EXPECT_EQ(e.max_hl_steps, 300);
    EXPECT_GE(e.alpha, 0.0);
    EXPECT_LE(e.alpha, c.curriculum.alpha_max);
    EXPECT_TRUE(e.disturbances.empty());
    ASSERT_EQ(e.v_profile.segments.size(), 3u);
    for (std::size_t i = 0; i < e.v_profile.segments.size(); ++i) {
      EXPECT_DOUBLE_EQ(e.v_profile.segments[i].first, 3.0 * i);
      EXPECT_LE(std::abs(e.v_profile.segments[i].second), 1.0);
    }
  }
}

TEST(VelocityProfileTest, PiecewiseConstant) {
  VelocityProfile p;
  p.segments = {{0.0, 0.0}, {2.0, 0.5}, {4.0, -0.5}};
  EXPECT_EQ(p.at(0.0), 0.0);
  EXPECT_EQ(p.at(1.999), 0.0);
  EXPECT_EQ(p.at(2.0), 0.5);
  EXPECT_EQ(p.at(100.0), -0.5);
}

}  // namespace
}  // namespace hlloco::env
