#include "hlloco/tracking/controllers.hpp"

#include <limits>

#include "hlloco/common/errors.hpp"

namespace hlloco::tracking {

GainSet GainSet::nominal(int output_dim) {
  return {OutputVector::Constant(output_dim, 400.0),
          OutputVector::Constant(output_dim, 40.0), GainProfile::kNominal};
}

GainSet GainSet::high_gain(int output_dim) {
  return {OutputVector::Constant(output_dim, 2500.0),
          OutputVector::Constant(output_dim, 100.0), GainProfile::kHighGain};
}

GainSet GainSet::from_name(const std::string& name, int output_dim) {
  if (name == "nominal") return nominal(output_dim);
  if (name == "high_gain" || name == "high") return high_gain(output_dim);
  throw InvalidConfig("unknown gain profile '" + name + "'");
}

QPWeights QPWeights::defaults(int output_dim) {
  QPWeights w;
  w.task = OutputVector::Ones(output_dim);
  return w;
}

OutputVector commanded_accel(const OutputErrors& e, const GainSet& gains) {
  return e.ydd_d - gains.Kp.cwiseProduct(e.y) - gains.Kd.cwiseProduct(e.dy);
}

OutputDynamics output_dynamics(const rigid_body::RobotModel& model,
                               const rigid_body::DynamicsTerms& terms,
                               const OutputJacobians& jac) {
  const int n = model.dof();
  const int m = model.num_actuators();
  const rigid_body::ConstrainedSolver solver(terms.M, terms.J);
  DofVector x(n);
  ConstraintVector y(terms.J.rows());
  solver.solve(-terms.H, -terms.J_dot_qd, x, y);
  OutputDynamics od;
  od.drift = jac.Jy * x + jac.Jy_dot_qd;
  od.A.resize(jac.Jy.rows(), m);
  const ConstraintVector zero = ConstraintVector::Zero(terms.J.rows());
  for (int k = 0; k < m; ++k) {
    solver.solve(model.B.col(k), zero, x, y);
    od.A.col(k) = jac.Jy * x;
  }
  return od;
}

ControlResult fl_controller(const rigid_body::RobotModel& model,
                            const rigid_body::DynamicsTerms& terms,
                            const OutputErrors& errors, const GainSet& gains) {
  const OutputDynamics od = output_dynamics(model, terms, errors.jac);
  ControlResult r;
  r.ydd_cmd = commanded_accel(errors, gains);
  const Eigen::MatrixXd A = od.A;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[s.size() - 1] <= 0 || s[0] / s[s.size() - 1] > 1e8) {
    throw DecouplingSingular("decoupling matrix is ill conditioned");
  }
  const Eigen::VectorXd rhs = r.ydd_cmd - od.drift;
  r.u_unclamped = svd.solve(rhs);
  r.u = rigid_body::clamp_torques(model, r.u_unclamped);
  return r;
}

ControlResult idqp_controller(const rigid_body::RobotModel& model,
                              const rigid_body::DynamicsTerms& terms,
                              const OutputErrors& errors, const GainSet& gains,
                              const QPWeights& weights) {
  const int n = model.dof();
  const int m = model.num_actuators();
  const int c = static_cast<int>(terms.J.rows());
  const int nv = n + m + c;
  ControlResult r;
  r.ydd_cmd = commanded_accel(errors, gains);

  const Eigen::MatrixXd Jy = errors.jac.Jy;
  const Eigen::VectorXd W = weights.task;
  const Eigen::VectorXd target = r.ydd_cmd - errors.jac.Jy_dot_qd;

  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(nv, nv);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(nv);
  H.topLeftCorner(n, n) = Jy.transpose() * W.asDiagonal() * Jy;
  H.block(n, n, m, m).diagonal().setConstant(weights.torque);
  f.head(n) = -Jy.transpose() * W.asDiagonal() * target;

  Eigen::MatrixXd A_eq = Eigen::MatrixXd::Zero(n + c, nv);
  Eigen::VectorXd b_eq(n + c);
  A_eq.topLeftCorner(n, n) = terms.M;
  A_eq.block(0, n, n, m) = -Eigen::MatrixXd(model.B);
  A_eq.block(0, n + m, n, c) = -Eigen::MatrixXd(terms.J.transpose());
  A_eq.block(n, 0, c, n) = terms.J;
  b_eq.head(n) = -terms.H;
  b_eq.tail(c) = -terms.J_dot_qd;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  Eigen::VectorXd lower = Eigen::VectorXd::Constant(nv, -kInf);
  Eigen::VectorXd upper = Eigen::VectorXd::Constant(nv, kInf);
  lower.segment(n, m) = -model.torque_limits;
  upper.segment(n, m) = model.torque_limits;
  if (weights.unilateral) {
    // Vertical rows of the contact: index 1 (point or toe) and 2 (heel).
    for (int i = 1; i < c; ++i) lower[n + m + i] = 0.0;
  }

  // An infeasible box plus unilateral set can also show up as cycling to the
  // iteration cap, so anything short of optimal triggers the relaxed solve.
  QPResult qp;
  bool solved = false;
  try {
    qp = qp_solve(H, f, A_eq, b_eq, lower, upper);
    solved = qp.status == QPStatus::kOptimal;
  } catch (const QPInfeasible&) {
    if (!weights.unilateral) throw;
  }
  if (!solved && weights.unilateral) {
    lower.tail(c).setConstant(-kInf);
    qp = qp_solve(H, f, A_eq, b_eq, lower, upper);
    r.unilateral_relaxed = true;
  }
  if (qp.status == QPStatus::kInfeasible)
    throw QPInfeasible("ID-QP infeasible");
  r.u_unclamped = qp.x.segment(n, m);
  r.u = rigid_body::clamp_torques(model, r.u_unclamped);
  return r;
}

ControllerKind controller_from_name(const std::string& name) {
  if (name == "fl") return ControllerKind::kFL;
  if (name == "idqp") return ControllerKind::kIDQP;
  throw InvalidConfig("unknown controller '" + name + "' (fl | idqp)");
}

const char* to_string(ControllerKind kind) {
  return kind == ControllerKind::kFL ? "fl" : "idqp";
}

ControlResult TrackingController::compute(
    const rigid_body::RobotModel& model, const rigid_body::DynamicsTerms& terms,

    const OutputErrors& errors) const {
  if (kind == ControllerKind::kFL) {
    return fl_controller(model, terms, errors, gains);
  }
  return idqp_controller(model, terms, errors, gains, weights);
}

}  // namespace hlloco::tracking
