#pragma once

#include <string>

#include "hlloco/tracking/outputs.hpp"
#include "hlloco/tracking/qp.hpp"

namespace hlloco::tracking {

enum class GainProfile { kNominal, kHighGain };

struct GainSet {
  OutputVector Kp;
  OutputVector Kd;
  GainProfile profile = GainProfile::kNominal;

  static GainSet nominal(int output_dim);    ///< Kp 400, Kd 40
  static GainSet high_gain(int output_dim);  ///< Kp 2500, Kd 100
  static GainSet from_name(const std::string& name, int output_dim);
};

struct QPWeights {
  OutputVector task;       ///< per-output weights
  double torque = 1e-9;    ///< w_u
  bool unilateral = true;  ///< enforce vertical contact force >= 0

  static QPWeights defaults(int output_dim);
};

/// ydd_cmd = ydd_d - Kp y - Kd dy.
OutputVector commanded_accel(const OutputErrors& e, const GainSet& gains);

/// Affine map from torques to output accelerations through the constrained
/// dynamics: ydd = drift + A u.
struct OutputDynamics {
  OutputVector drift;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxOutputs,
                kMaxActuators>
      A;
};

OutputDynamics output_dynamics(const rigid_body::RobotModel& model,
                               const rigid_body::DynamicsTerms& terms,
                               const OutputJacobians& jac);

struct ControlResult {
  ActuatorVector u;  ///< clamped torques
  ActuatorVector u_unclamped;
  OutputVector ydd_cmd;
  bool unilateral_relaxed = false;  ///< ID-QP only, see idqp_controller
};

/// Feedback linearization. Solves A u = ydd_cmd - drift (minimum-norm when
/// there are more actuators than outputs). Throws DecouplingSingular when
/// cond(A) > 1e8.
ControlResult fl_controller(const rigid_body::RobotModel& model,
                            const rigid_body::DynamicsTerms& terms,
                            const OutputErrors& errors, const GainSet& gains);

/// Inverse-dynamics QP over (qdd, u, lambda) with dynamics and contact
/// equalities, torque box and optional lambda_z >= 0. When no torque inside
/// the box keeps lambda_z >= 0 the stance contact would break; the simulated
/// contact is holonomic, so the QP is re-solved without the unilateral bound
/// and the result is flagged. Throws QPInfeasible if that also fails.
ControlResult idqp_controller(const rigid_body::RobotModel& model,
                              const rigid_body::DynamicsTerms& terms,
                              const OutputErrors& errors, const GainSet& gains,
                              const QPWeights& weights);

enum class ControllerKind { kFL, kIDQP };

ControllerKind controller_from_name(const std::string& name);
const char* to_string(ControllerKind kind);

/// Controller choice plus its parameters, as used by the environment.
struct TrackingController {
  ControllerKind kind = ControllerKind::kFL;
  GainSet gains;
  QPWeights weights;

  ControlResult compute(const rigid_body::RobotModel& model,
                        const rigid_body::DynamicsTerms& terms,
                        const OutputErrors& errors) const;
};

}  // namespace hlloco::tracking
