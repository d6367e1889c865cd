#pragma once

#include "hlloco/env/locomotion_env.hpp"
#include "hlloco/ppo/checkpoint.hpp"

namespace hlloco::eval {

/// Source of HL actions for an episode: the learned policy or the ALIP
/// baseline.
class Planner {
 public:
  virtual ~Planner() = default;
  virtual void reset(const env::LocomotionEnv& env) { (void)env; }
  virtual gait::HLAction act(const env::LocomotionEnv& env) = 0;
  /// Called with every step result, including touchdown events.
  virtual void observe(const env::StepResult& result) { (void)result; }
};

/// One-step dead-beat ALIP footstep planner.
///
/// Runs on the CoM form of the reduced state, targets the end-of-step
/// momentum of the periodic gait with mean speed v_x^d, and predicts over the
/// last realized step time. Torso pitch and height offsets stay at zero.
class AlipBaseline : public Planner {
 public:
  explicit AlipBaseline(const alip::AlipParams& params);

  void reset(const env::LocomotionEnv& env) override;
  gait::HLAction act(const env::LocomotionEnv& env) override;
  void observe(const env::StepResult& result) override;

  double step_time() const { return step_time_; }

 private:
  alip::AlipParams params_;
  double step_time_;
};

/// Deterministic learned policy: the action is the network mean.
class PolicyPlanner : public Planner {
 public:
  PolicyPlanner(ppo::Policy policy, ppo::Normalizer normalizer);
  explicit PolicyPlanner(const ppo::Checkpoint& ckpt);

  gait::HLAction act(const env::LocomotionEnv& env) override;

 private:
  ppo::Policy policy_;
  ppo::Normalizer normalizer_;
};

}  // namespace hlloco::eval
