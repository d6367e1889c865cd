#pragma once

#include <vector>

#include "hlloco/common/types.hpp"
#include "hlloco/rigid_body/kinematics.hpp"
#include "hlloco/rigid_body/robot_model.hpp"
#include "hlloco/rigid_body/state.hpp"

namespace hlloco::rigid_body {

/// M(q) of M(q) qdd + H(q, qd) = B u + J^T lambda.
DofMatrix mass_matrix(const RobotModel& model, const DofVector& q);

/// H(q, qd) = C(q, qd) qd + G(q). No joint friction.
DofVector bias_forces(const RobotModel& model, const DofVector& q,
                      const DofVector& qd);

DofVector gravity_forces(const RobotModel& model, const DofVector& q);

/// Coriolis matrix built from Christoffel symbols of M, so that
/// Mdot - 2C is skew-symmetric.
DofMatrix coriolis_matrix(const RobotModel& model, const DofVector& q,
                          const DofVector& qd);

/// dM/dt along qd.
DofMatrix mass_matrix_derivative(const RobotModel& model, const DofVector& q,
                                 const DofVector& qd);

double kinetic_energy(const RobotModel& model, const DofVector& q,
                      const DofVector& qd);
double potential_energy(const RobotModel& model, const DofVector& q);

/// Everything the controllers and the integrator need at one state.
struct DynamicsTerms {
  Kinematics kin;
  DofMatrix M;
  DofVector H;
  ConstraintJacobian J;
  ConstraintVector J_dot_qd;
};

DynamicsTerms dynamics_terms(const RobotModel& model, const FullState& state);

/// Solves the stance KKT system [M, -J^T; J, 0][x; y] = [a; b] through the
/// Schur complement J M^-1 J^T. Factorizations are reused across right-hand
/// sides.
class ConstrainedSolver {
 public:
  ConstrainedSolver(const DofMatrix& M, const ConstraintJacobian& J);

  void solve(const DofVector& a, const ConstraintVector& b, DofVector& x,
             ConstraintVector& y) const;

 private:
  Eigen::LLT<DofMatrix> m_llt_;
  ConstraintJacobian J_;
  DofMatrix minv_jt_;  ///< M^-1 J^T, n x c
  Eigen::LDLT<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0,
                            kMaxConstraints, kMaxConstraints>>
      schur_;
};

/// Clamps u into the model's torque limits.
ActuatorVector clamp_torques(const RobotModel& model, const ActuatorVector& u);

/// Constrained forward dynamics in single support. `external` is an optional
/// generalized force added to the right-hand side. Torques are clamped.
/// Throws SingularConstraint.
ContactSolution contact_dynamics(const RobotModel& model,
                                 const FullState& state,
                                 const ActuatorVector& u,
                                 const DofVector* external = nullptr);
ContactSolution contact_dynamics(const RobotModel& model,
                                 const DynamicsTerms& terms,
                                 const DofVector& qd, const ActuatorVector& u,
                                 const DofVector* external = nullptr);

/// Rigid plastic touchdown of the swing foot. Positions are unchanged, the
/// stance label swaps, t_step resets. Throws ImpactInfeasible when the ground
/// would have to pull.
FullState impact_reset(const RobotModel& model, const FullState& pre);

/// Impulse of the last impact, for diagnostics and tests.
struct ImpactResult {
  FullState post;
  ConstraintVector impulse;
};
ImpactResult impact_map(const RobotModel& model, const FullState& pre);

/// Planar pitch angular momentum (kg m^2/s) about a world point.
double angular_momentum(const RobotModel& model, const FullState& state,
                        const Vec2& about);
double angular_momentum(const RobotModel& model, const Kinematics& kin,
                        const Vec2& about);

struct ComState {
  Vec2 position;
  Vec2 velocity;
};
ComState com_state(const RobotModel& model, const FullState& state);
ComState com_state(const RobotModel& model, const Kinematics& kin);

/// Generalized force of a world force applied at the torso CoM.
DofVector torso_force(const RobotModel& model, const Kinematics& kin,
                      const Vec2& force);

}  // namespace hlloco::rigid_body
