#include "hlloco/env/locomotion_env.hpp"

#include <cmath>

#include "hlloco/common/errors.hpp"
#include "hlloco/rigid_body/pose.hpp"

namespace hlloco::env {

using rigid_body::FullState;

FullState standing_on_slope(const rigid_body::RobotModel& model, double alpha) {
  FullState s = rigid_body::standing_state(model);
  const double w = model.stance_width;
  const double slope = std::tan(alpha);
  const double pitch = model.has_feet() ? -alpha : 0.0;
  rigid_body::solve_leg_ik(model, Side::kLeft, Vec2(-0.5 * w, -0.5 * w * slope),
                           pitch, s.q);
  rigid_body::solve_leg_ik(model, Side::kRight, Vec2(0.5 * w, 0.5 * w * slope),
                           pitch, s.q);
  // Stand on the foot under the CoM so the first swing starts near balance.
  s.stance = rigid_body::com_state(model, s).position.x() >= 0.0
                 ? Side::kRight
                 : Side::kLeft;
  const auto kin = rigid_body::forward_kinematics(model, s.q);
  s.contact_point = rigid_body::foot_position(model, kin, s.stance);
  return s;
}

EpisodeConfig sample_training_episode(const EnvConfig& config,
                                      std::mt19937_64& rng) {
  const Curriculum& c = config.curriculum;
  std::uniform_real_distribution<double> v(c.v_min, c.v_max);
  std::uniform_real_distribution<double> a(c.alpha_min, c.alpha_max);
  EpisodeConfig e;
  e.max_hl_steps = config.max_hl_steps;
  const double horizon = config.max_hl_steps * config.ll_per_hl * config.ll_dt;
  e.v_profile.segments.clear();
  for (double t = 0.0; t < horizon; t += c.resample_period) {
    e.v_profile.segments.emplace_back(t, v(rng));
  }
  e.alpha = a(rng);
  if (c.disturbances) {
    std::uniform_real_distribution<double> f(-c.force_max, c.force_max);
    std::uniform_real_distribution<double> when(1.0, std::max(1.0, horizon - 1.0));
    e.disturbances.push_back({when(rng), 0.15, f(rng)});
  }
  e.seed = rng();
  return e;
}

LocomotionEnv::LocomotionEnv(const EnvConfig& config,
                             rigid_body::RobotModel model)
    : config_(config),
      model_(std::move(model)),
      gait_(config.gait, model_.output_dim()),
      velocity_(config.velocity_window, config.ll_dt) {
  config_.gait.nominal_height = model_.nominal_base_height;
  gait_ = gait::GaitGenerator(config_.gait, model_.output_dim());
  controller_.kind = config_.controller;
  controller_.gains =
      tracking::GainSet::from_name(config_.gains, model_.output_dim());
  controller_.weights = tracking::QPWeights::defaults(model_.output_dim());
  controller_.weights.torque = config_.torque_weight;
  controller_.weights.unilateral = config_.unilateral;
  alip_ = alip::params_for(model_, config_.gait.step_time);
}

Observation LocomotionEnv::reset(const EpisodeConfig& episode) {
  if (std::abs(episode.alpha) > 0.35) {
    throw InvalidConfig("terrain slope must satisfy |alpha| <= 0.35 rad");
  }
  if (episode.max_hl_steps <= 0 || episode.v_profile.segments.empty()) {
    throw InvalidConfig("episode needs a velocity profile and max_hl_steps > 0");
  }
  for (const auto& d : episode.disturbances) {
    if (std::abs(d.force_x) > 80.0 || d.duration < 0.0) {
      throw InvalidConfig("disturbance force must satisfy |F_x| <= 80 N");
    }
  }
  episode_ = episode;
  terrain_ = {episode.alpha};
  state_ = standing_on_slope(model_, episode.alpha);

  if (episode.reset_noise) {
    std::mt19937_64 rng(episode.seed);
    std::normal_distribution<double> nq(0.0, config_.q_noise);
    std::normal_distribution<double> nv(0.0, config_.qd_noise);
    for (int i = 2; i < model_.dof(); ++i) state_.q[i] += nq(rng);
    for (int i = 0; i < model_.dof(); ++i) state_.qd[i] += nv(rng);
    rigid_body::project_to_contact(model_, state_);
  }

  t_ = 0.0;
  hl_steps_ = 0;
  done_ = false;
  prev_action_.setZero();
  velocity_.reset();
  gait_.reset(0.0, 0.0, 0.0, swing_output(), episode.alpha);
  return observe();
}

Vec2 LocomotionEnv::swing_output() const {
  const auto kin = rigid_body::forward_kinematics(model_, state_.q);
  const Vec2 p = rigid_body::foot_position(model_, kin, state_.swing());
  return {p.x() - state_.q[0],
          p.y() - state_.q[1] + model_.nominal_base_height};
}

Vec2 LocomotionEnv::disturbance_at(double t) const {
  Vec2 f = Vec2::Zero();
  for (const auto& d : episode_.disturbances) {
    if (t >= d.t_start && t < d.t_start + d.duration) f.x() += d.force_x;
  }
  return f;
}

alip::AlipState LocomotionEnv::alip_state() const {
  return {state_.q[0] - state_.contact_point.x(),
          rigid_body::angular_momentum(model_, state_, state_.contact_point)};
}

alip::AlipState LocomotionEnv::alip_state_com() const {
  alip::AlipState a = alip_state();
  a.p += com_offset();
  return a;
}

double LocomotionEnv::com_offset() const {
  return rigid_body::com_state(model_, state_).position.x() - state_.q[0];
}

Observation LocomotionEnv::observe() const {
  const auto a = alip_state();
  const double v_des = episode_.v_profile.at(t_);
  Observation o;
  o << a.p, a.L, velocity_.average() - v_des, v_des, episode_.alpha;
  return o;
}

FallCause LocomotionEnv::check_fall() const {
  if (std::abs(state_.q[2]) >= config_.pitch_limit) return FallCause::kPitch;
  if (state_.q[1] - terrain_.height(state_.q[0]) <= config_.height_limit) {
    return FallCause::kHeight;
  }
  if (state_.t_step > config_.step_timeout * config_.gait.step_time) {
    return FallCause::kStepTimeout;
  }
  return FallCause::kNone;
}

StepResult LocomotionEnv::hl_step_normalized(const NormalizedAction& action) {
  return hl_step(config_.bounds.denormalize(action.cwiseMax(-1.0).cwiseMin(1.0)));
}

StepResult LocomotionEnv::hl_step(const gait::HLAction& raw) {
  StepResult r;
  const gait::HLAction action = config_.bounds.clamp(raw);
  const NormalizedAction a_norm = config_.bounds.normalize(action);
  gait_.set_action(action, t_, state_.t_step, episode_.alpha);

  FallCause fall = FallCause::kNone;
  const double H0 = model_.nominal_base_height;
  try {
    for (int tick = 0; tick < config_.ll_per_hl; ++tick) {
      const auto desired = gait_.evaluate(t_, state_.t_step);
      const auto terms = rigid_body::dynamics_terms(model_, state_);
      const auto errors = tracking::output_eval(model_, terms.kin, state_,
                                                desired, episode_.alpha, H0);
      const auto control = controller_.compute(model_, terms, errors);
      FullState pre;
      const Side stance = state_.stance;
      const double step_time = state_.t_step;
      state_ = rigid_body::step(model_, state_, control.u, config_.ll_dt,
                                terrain_, disturbance_at(t_), {}, &pre);
      t_ += config_.ll_dt;
      velocity_.add(state_.qd[0]);
      if (state_.stance != stance) {
        velocity_.touchdown();
        Touchdown td;
        td.t = t_;
        td.step_duration = step_time + config_.ll_dt;
        td.before = {pre.q[0] - pre.contact_point.x(),
                     rigid_body::angular_momentum(model_, pre, pre.contact_point)};
        td.after = alip_state();
        td.after_com = alip_state_com();
        r.touchdowns.push_back(td);
        gait_.start_step(swing_output(), episode_.alpha);
      }
      fall = check_fall();
      if (fall != FallCause::kNone) break;
    }
  } catch (const NumericalError&) {
    fall = FallCause::kNumerical;
  }
  ++hl_steps_;

  Diagnostics& d = r.diag;
  d.t = t_;
  d.v_des = episode_.v_profile.at(t_);
  d.v_bar = velocity_.average();
  d.pitch = state_.q[2];
  d.height = state_.q[1] - terrain_.height(state_.q[0]);
  d.action = action;
  d.fall = fall;
  d.action_delta = (a_norm - prev_action_).norm();
  if (fall != FallCause::kNumerical) {
    d.L_contact = rigid_body::angular_momentum(model_, state_, state_.contact_point);
    const auto com = rigid_body::com_state(model_, state_);
    d.L_com = rigid_body::angular_momentum(model_, state_, com.position);
  }
  d.terms = reward_terms(d.v_bar, d.v_des, d.L_com, prev_action_, a_norm);
  r.reward = reward(d.terms, config_.reward);
  prev_action_ = a_norm;

  r.terminated = fall != FallCause::kNone;
  r.truncated = !r.terminated && hl_steps_ >= episode_.max_hl_steps;
  done_ = r.terminated || r.truncated;
  r.obs = r.terminated && fall == FallCause::kNumerical ? Observation::Zero()
                                                        : observe();
  return r;
}

}  // namespace hlloco::env
