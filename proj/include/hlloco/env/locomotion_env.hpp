#pragma once

#include <random>

#include "hlloco/env/reward.hpp"
#include "hlloco/env/types.hpp"
#include "hlloco/rigid_body/simulator.hpp"

namespace hlloco::env {

/// Double-support pose with both feet on the slope, hip H0 above the terrain
/// at x = 0, flat soles parallel to the surface. The stance foot is the one
/// on the CoM side of the hip.
rigid_body::FullState standing_on_slope(const rigid_body::RobotModel& model,
                                        double alpha);

/// Samples one training episode from the curriculum.
EpisodeConfig sample_training_episode(const EnvConfig& config,
                                      std::mt19937_64& rng);

/// Episodic MDP: one hl_step applies an action through the gait generator
/// and runs ll_per_hl ticks of tracking control and simulation. Not
/// thread-safe; use one instance per worker.
class LocomotionEnv {
 public:
  LocomotionEnv(const EnvConfig& config, rigid_body::RobotModel model);

  /// Throws InvalidConfig.
  Observation reset(const EpisodeConfig& episode);

  StepResult hl_step(const gait::HLAction& action);
  /// Action in [-1, 1]^3, scaled by the action bounds.
  StepResult hl_step_normalized(const NormalizedAction& action);

  /// Replaces the simulator state inside an active episode.
  void set_state(const rigid_body::FullState& state) { state_ = state; }

  Observation observe() const;
  bool done() const { return done_; }

  const rigid_body::FullState& state() const { return state_; }
  const rigid_body::RobotModel& model() const { return model_; }
  const EnvConfig& config() const { return config_; }
  const EpisodeConfig& episode() const { return episode_; }
  const alip::AlipParams& alip_params() const { return alip_; }
  double time() const { return t_; }
  int hl_steps() const { return hl_steps_; }
  double average_velocity() const { return velocity_.average(); }
  /// Reduced state about the current stance contact, with the base x in
  /// place of the CoM (the observation's convention).
  alip::AlipState alip_state() const;
  /// Same with the true CoM x.
  alip::AlipState alip_state_com() const;
  /// CoM x minus base x.
  double com_offset() const;

 private:
  Vec2 swing_output() const;
  Vec2 disturbance_at(double t) const;
  FallCause check_fall() const;

  EnvConfig config_;
  rigid_body::RobotModel model_;
  tracking::TrackingController controller_;
  gait::GaitGenerator gait_;
  alip::AlipParams alip_;
  EpisodeConfig episode_;
  rigid_body::TerrainSpec terrain_;
  rigid_body::FullState state_;
  VelocityTracker velocity_;
  NormalizedAction prev_action_ = NormalizedAction::Zero();
  double t_ = 0.0;
  int hl_steps_ = 0;
  bool done_ = true;
};

}  // namespace hlloco::env
