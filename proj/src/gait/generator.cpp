#include "hlloco/gait/generator.hpp"

#include <algorithm>
#include <cmath>

namespace hlloco::gait {

HLAction ActionBounds::clamp(const HLAction& a) const {
  return {std::clamp(a.p_sw_x, -p_sw_x, p_sw_x),
          std::clamp(a.q_phi, -q_phi, q_phi), std::clamp(a.h_d, -h_d, h_d)};
}

Eigen::Vector3d ActionBounds::normalize(const HLAction& a) const {
  return {a.p_sw_x / p_sw_x, a.q_phi / q_phi, a.h_d / h_d};
}

HLAction ActionBounds::denormalize(const Eigen::Vector3d& v) const {
  return {v[0] * p_sw_x, v[1] * q_phi, v[2] * h_d};
}

Sample GaitGenerator::Ramp::at(double t) const {
  const double gap = target - start;
  const double reach = rate * std::max(0.0, t - t0);
  if (std::abs(gap) <= reach) return {target, 0.0, 0.0};
  const double dir = gap > 0 ? 1.0 : -1.0;
  return {start + dir * reach, dir * rate, 0.0};
}

GaitGenerator::GaitGenerator(const GaitConfig& config, int output_dim)
    : config_(config), output_dim_(output_dim) {
  pitch_.rate = config.pitch_rate;
  height_.rate = config.height_rate;
}

void GaitGenerator::reset(double t, double q_phi, double h_d,
                          const Vec2& swing0, double alpha) {
  action_ = {swing0.x(), q_phi, h_d};
  pitch_ = {q_phi, t, q_phi, config_.pitch_rate};
  height_ = {h_d, t, h_d, config_.height_rate};
  start_step(swing0, alpha);
}

void GaitGenerator::start_step(const Vec2& swing0, double alpha) {
  alpha_ = alpha;
  p0_ = swing0;
  target_ = {action_.p_sw_x, landing_height(action_.h_d, action_.p_sw_x,
                                            alpha, config_.z_offset)};
  z_points_ = swing_control_points(
      p0_.y(), target_.y(), std::max(p0_.y(), target_.y()) + config_.clearance);
  fade_x_ = Fade{};
  fade_z_ = Fade{};
  fade_x_.tau0 = fade_z_.tau0 = 1.0;
}

void GaitGenerator::set_action(const HLAction& action, double t, double t_step,
                               double alpha) {
  alpha_ = alpha;
  pitch_ = {pitch_.at(t).pos, t, action.q_phi, config_.pitch_rate};
  height_ = {height_.at(t).pos, t, action.h_d, config_.height_rate};
  const double tau = t_step / config_.step_time;
  action_.q_phi = action.q_phi;
  action_.h_d = action.h_d;
  if (tau >= config_.retarget_freeze) return;
  action_.p_sw_x = action.p_sw_x;
  retarget({action.p_sw_x, landing_height(action.h_d, action.p_sw_x, alpha,
                                          config_.z_offset)},
           tau);
}

void GaitGenerator::retarget(const Vec2& target, double tau) {
  const double t_step = tau * config_.step_time;
  const Sample x_old = swing_x(tau, t_step);
  const Sample z_old = swing_z(tau, t_step);
  target_ = target;
  z_points_ = swing_control_points(
      p0_.y(), target_.y(), std::max(p0_.y(), target_.y()) + config_.clearance);
  const Sample x_new = nominal_x(tau);
  const Sample z_new = nominal_z(tau);
  fade_x_ = Fade::from({x_old.pos - x_new.pos, x_old.vel - x_new.vel,
                        x_old.acc - x_new.acc},
                       tau, config_.step_time);
  fade_z_ = Fade::from({z_old.pos - z_new.pos, z_old.vel - z_new.vel,
                        z_old.acc - z_new.acc},
                       tau, config_.step_time);
}

Sample GaitGenerator::nominal_x(double tau) const {
  return min_jerk(p0_.x(), target_.x(), tau, config_.step_time);
}

Sample GaitGenerator::nominal_z(double tau) const {
  return bezier5(z_points_, tau, config_.step_time);
}

Sample GaitGenerator::swing_x(double tau, double t_step) const {
  if (t_step >= config_.step_time) return {target_.x(), 0.0, 0.0};
  const Sample n = nominal_x(tau);
  const Sample f = fade_x_.at(tau);
  return {n.pos + f.pos, n.vel + f.vel, n.acc + f.acc};
}

Sample GaitGenerator::swing_z(double tau, double t_step) const {
  if (t_step >= config_.step_time) {
    const double over = t_step - config_.step_time;
    return {target_.y() - config_.overrun_descent * over,
            -config_.overrun_descent, 0.0};
  }
  const Sample n = nominal_z(tau);
  const Sample f = fade_z_.at(tau);
  return {n.pos + f.pos, n.vel + f.vel, n.acc + f.acc};
}

DesiredOutputs GaitGenerator::evaluate(double t, double t_step) const {
  DesiredOutputs d;
  d.y = OutputVector::Zero(output_dim_);
  d.yd = OutputVector::Zero(output_dim_);
  d.ydd = OutputVector::Zero(output_dim_);
  const double tau_raw = t_step / config_.step_time;
  d.tau = std::clamp(tau_raw, 0.0, 1.0);
  const Sample samples[4] = {
      pitch_.at(t), height_.at(t), swing_x(d.tau, t_step),
      swing_z(d.tau, t_step)};
  for (int i = 0; i < 4; ++i) {
    d.y[i] = samples[i].pos;
    d.yd[i] = samples[i].vel;
    d.ydd[i] = samples[i].acc;
  }
  d.y[1] += config_.nominal_height;
  if (output_dim_ > 4) d.y[4] = -alpha_;
  return d;
}

}  // namespace hlloco::gait
