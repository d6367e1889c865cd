#include "hlloco/rigid_body/simulator.hpp"

#include <cmath>

namespace hlloco::rigid_body {

double TerrainSpec::height(double x) const { return std::tan(slope) * x; }

Vec2 TerrainSpec::normal() const { return {-std::sin(slope), std::cos(slope)}; }

namespace {

DofVector accelerations(const RobotModel& model, const FullState& s,
                        const ActuatorVector& u, const Vec2& disturbance) {
  const DynamicsTerms terms = dynamics_terms(model, s);
  const DofVector ext = torso_force(model, terms.kin, disturbance);
  return contact_dynamics(model, terms, s.qd, u, &ext).qdd;
}

}  // namespace

void project_to_contact(const RobotModel& model, FullState& state,
                        const DofMatrix* mass) {
  Kinematics kin = forward_kinematics(model, state.q);
  const Vec2 drift =
      foot_position(model, kin, state.stance) - state.contact_point;
  state.q[0] -= drift.x();
  state.q[1] -= drift.y();
  kin = forward_kinematics(model, state.q);
  const DofMatrix M = mass != nullptr ? *mass : mass_matrix(model, state.q);
  const ConstraintJacobian J = contact_jacobian(model, kin, state.stance);
  const ConstrainedSolver solver(M, J);
  DofVector projected;
  ConstraintVector impulse;
  solver.solve(M * state.qd, ConstraintVector::Zero(J.rows()), projected,
               impulse);
  state.qd = projected;
}

FullState step(const RobotModel& model, const FullState& state,
               const ActuatorVector& u, double dt, const TerrainSpec& terrain,
               const Vec2& disturbance, const StepOptions& options,
               FullState* pre_impact) {
  const DynamicsTerms terms = dynamics_terms(model, state);
  const DofVector ext = torso_force(model, terms.kin, disturbance);
  const ContactSolution sol = contact_dynamics(model, terms, state.qd, u, &ext);

  FullState next = state;
  next.qd = state.qd + dt * sol.qdd;
  next.q = state.q + dt * next.qd;
  next.t_step = state.t_step + dt;

  project_to_contact(model, next, &terms.M);
  const Kinematics kin = forward_kinematics(model, next.q, next.qd);

  if (next.t_step >= options.min_swing_time) {
    const FootClearance c =
        foot_clearance(model, kin, state.swing(), terrain.slope);
    if (c.height <= options.contact_threshold && c.normal_velocity < 0.0) {
      if (pre_impact != nullptr) *pre_impact = next;
      return impact_reset(model, next);
    }
  }
  return next;
}

FullState rk4_step(const RobotModel& model, const FullState& state,
                   const ActuatorVector& u, double dt,
                   const Vec2& disturbance) {
  auto shifted = [&](const DofVector& dq, const DofVector& dqd, double h) {
    FullState s = state;
    s.q = state.q + h * dq;
    s.qd = state.qd + h * dqd;
    return s;
  };
  const DofVector k1q = state.qd;
  const DofVector k1v = accelerations(model, state, u, disturbance);
  const FullState s2 = shifted(k1q, k1v, 0.5 * dt);
  const DofVector k2q = s2.qd;
  const DofVector k2v = accelerations(model, s2, u, disturbance);
  const FullState s3 = shifted(k2q, k2v, 0.5 * dt);
  const DofVector k3q = s3.qd;
  const DofVector k3v = accelerations(model, s3, u, disturbance);
  const FullState s4 = shifted(k3q, k3v, dt);
  const DofVector k4q = s4.qd;
  const DofVector k4v = accelerations(model, s4, u, disturbance);

  FullState next = state;
  next.q = state.q + dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
  next.qd = state.qd + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  next.t_step = state.t_step + dt;
  return next;
}

double total_energy(const RobotModel& model, const FullState& state) {
  return kinetic_energy(model, state.q, state.qd) +
         potential_energy(model, state.q);
}

}  // namespace hlloco::rigid_body
