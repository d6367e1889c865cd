#pragma once

#include "hlloco/rigid_body/dynamics.hpp"

namespace hlloco::rigid_body {

struct StepOptions {
  double contact_threshold = 1e-4;  ///< m, touchdown surface tolerance
  double min_swing_time = 0.1;      ///< s, touchdown disabled right after liftoff
};

/// One semi-implicit Euler tick of the single-support dynamics with a
/// horizontal/vertical disturbance force at the torso CoM. Fires
/// impact_reset() when the swing foot reaches the terrain while descending;
/// the state just before the impact is copied to `pre_impact` if given.
/// The input state is not modified. Propagates SingularConstraint.
FullState step(const RobotModel& model, const FullState& state,
               const ActuatorVector& u, double dt, const TerrainSpec& terrain,
               const Vec2& disturbance, const StepOptions& options = {},
               FullState* pre_impact = nullptr);

/// Translates the base so the stance foot sits on contact_point, then
/// projects qd onto J qd = 0 in the metric of M (the mass matrix is
/// recomputed when not given).
void project_to_contact(const RobotModel& model, FullState& state,
                        const DofMatrix* mass = nullptr);

/// Classic RK4 of the constrained continuous dynamics, no events. Used as a
/// reference integrator.
FullState rk4_step(const RobotModel& model, const FullState& state,
                   const ActuatorVector& u, double dt,
                   const Vec2& disturbance = Vec2::Zero());

/// Mechanical energy KE + PE.
double total_energy(const RobotModel& model, const FullState& state);

}  // namespace hlloco::rigid_body
