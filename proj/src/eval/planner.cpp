#include "hlloco/eval/planner.hpp"

#include <algorithm>

namespace hlloco::eval {

AlipBaseline::AlipBaseline(const alip::AlipParams& params)
    : params_(params), step_time_(params.T) {}

void AlipBaseline::reset(const env::LocomotionEnv& env) {
  (void)env;
  step_time_ = params_.T;
}

gait::HLAction AlipBaseline::act(const env::LocomotionEnv& env) {
  alip::AlipParams p = params_;
  p.T = step_time_;
  const double v = env.episode().v_profile.at(env.time());
  const double unbounded = 1e3;
  const double landing =
      alip::alip_planner_step(env.alip_state_com(), env.state().t_step,
                              alip::periodic_end_velocity(v, p), p, unbounded) +
      env.com_offset();
  const double bound = env.config().bounds.p_sw_x;
  return {std::clamp(landing, -bound, bound), 0.0, 0.0};
}

void AlipBaseline::observe(const env::StepResult& result) {
  for (const auto& td : result.touchdowns) step_time_ = td.step_duration;
}

PolicyPlanner::PolicyPlanner(ppo::Policy policy, ppo::Normalizer normalizer)
    : policy_(std::move(policy)), normalizer_(std::move(normalizer)) {}

PolicyPlanner::PolicyPlanner(const ppo::Checkpoint& ckpt)
    : PolicyPlanner(ckpt.policy, ckpt.normalizer) {}

gait::HLAction PolicyPlanner::act(const env::LocomotionEnv& env) {
  const Eigen::VectorXd mu = policy_.mean(normalizer_.normalize(env.observe()));
  return env.config().bounds.denormalize(mu);
}

}  // namespace hlloco::eval
