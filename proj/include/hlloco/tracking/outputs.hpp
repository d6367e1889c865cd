#pragma once

#include "hlloco/gait/generator.hpp"
#include "hlloco/rigid_body/dynamics.hpp"

namespace hlloco::tracking {

/// Actual outputs and their Jacobians at one state.
struct OutputJacobians {
  OutputVector y_a;
  OutputJacobian Jy;
  OutputVector Jy_dot_qd;
};

/// y_a in the gait generator's frame: torso pitch, base height above the
/// terrain under the base, swing x - base x, swing z - base z + H0 and, for
/// flat feet, the swing sole pitch. `kin` must carry velocities.
OutputJacobians actual_outputs(const rigid_body::RobotModel& model,
                               const rigid_body::Kinematics& kin,
                               const rigid_body::FullState& state,
                               double terrain_slope, double nominal_height);

/// Tracking errors y = y_a - y_d, dy = Jy qd - yd_d.
struct OutputErrors {
  OutputJacobians jac;
  OutputVector y;
  OutputVector dy;
  OutputVector ydd_d;
};

OutputErrors output_eval(const rigid_body::RobotModel& model,
                         const rigid_body::Kinematics& kin,
                         const rigid_body::FullState& state,
                         const gait::DesiredOutputs& desired,
                         double terrain_slope, double nominal_height);

}  // namespace hlloco::tracking
