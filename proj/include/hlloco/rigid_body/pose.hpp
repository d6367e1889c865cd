#pragma once

#include "hlloco/rigid_body/robot_model.hpp"
#include "hlloco/rigid_body/state.hpp"

namespace hlloco::rigid_body {

/// Two-link leg inverse kinematics with the knee bent forward. Writes the hip,
/// knee (and ankle, keeping the sole at `foot_pitch`) joint angles of `side`
/// into q so that the foot reference lands on `foot_target`. Returns false if
/// the target is out of reach.
bool solve_leg_ik(const RobotModel& model, Side side, const Vec2& foot_target,
                  double foot_pitch, DofVector& q);

/// Double-support standing pose: hip at (0, height), torso upright, feet at
/// -+ width/2 on flat ground. The rear (left) foot is the stance.
FullState standing_state(const RobotModel& model);
FullState standing_state(const RobotModel& model, double height,
                         double width);

}  // namespace hlloco::rigid_body
