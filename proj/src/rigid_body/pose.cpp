#include "hlloco/rigid_body/pose.hpp"

#include <algorithm>
#include <cmath>

#include "hlloco/rigid_body/kinematics.hpp"

namespace hlloco::rigid_body {

bool solve_leg_ik(const RobotModel& model, Side side, const Vec2& foot_target,
                  double foot_pitch, DofVector& q) {
  const Leg& leg = model.leg(side);
  const int thigh = leg.hip_link;
  // The shin is the thigh's child on the path to the foot.
  int shin = leg.foot.link;
  while (model.links[shin].parent != thigh) shin = model.links[shin].parent;
  const bool has_foot = leg.foot.link != shin;

  // Target for the shin tip. With a foot, back out the ankle from the sole.
  Vec2 ankle = foot_target;
  if (has_foot) {
    ankle = foot_target - rotate(foot_pitch, leg.foot.reference());
  } else {
    ankle = foot_target - (leg.foot.point - model.links[shin].tip);
  }
  const double l1 = model.links[thigh].tip.norm();
  const double l2 = model.links[shin].tip.norm();
  const Vec2 hip(q[0], q[1]);
  const Vec2 d = ankle - hip;
  const double D = d.norm();
  if (D >= l1 + l2 || D <= std::abs(l1 - l2)) return false;

  // Absolute angle of a downward-pointing link aimed along d.
  const double theta_d = std::atan2(-d.x(), -d.y());
  const double beta =
      std::acos(std::clamp((l1 * l1 + D * D - l2 * l2) / (2 * l1 * D), -1.0, 1.0));
  const double gamma =
      std::acos(std::clamp((l2 * l2 + D * D - l1 * l1) / (2 * l2 * D), -1.0, 1.0));
  const double theta_thigh = theta_d - beta;
  const double theta_shin = theta_d + gamma;
  q[model.coordinate[thigh]] = theta_thigh - q[2];
  q[model.coordinate[shin]] = theta_shin - theta_thigh;
  if (has_foot) q[model.coordinate[leg.foot.link]] = foot_pitch - theta_shin;
  return true;
}

FullState standing_state(const RobotModel& model, double height,
                         double width) {
  FullState s;
  s.q = DofVector::Zero(model.dof());
  s.qd = DofVector::Zero(model.dof());
  s.q[1] = height;
  solve_leg_ik(model, Side::kLeft, Vec2(-0.5 * width, 0.0), 0.0, s.q);
  solve_leg_ik(model, Side::kRight, Vec2(0.5 * width, 0.0), 0.0, s.q);
  s.stance = Side::kLeft;
  s.t_step = 0.0;
  const Kinematics kin = forward_kinematics(model, s.q);
  s.contact_point = foot_position(model, kin, s.stance);
  return s;
}

FullState standing_state(const RobotModel& model) {
  return standing_state(model, model.nominal_base_height, model.stance_width);
}

}  // namespace hlloco::rigid_body
