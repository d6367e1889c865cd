#include "hlloco/rigid_body/dynamics.hpp"

#include <cmath>

#include "hlloco/common/errors.hpp"

namespace hlloco::rigid_body {

namespace {

constexpr double kSingularTolerance = 1e-10;

void add_rotational_inertia(const RobotModel& model, int link, DofMatrix& M) {
  const double I = model.links[link].inertia;
  for (int a : model.chain[link]) {
    for (int b : model.chain[link]) {
      M(model.coordinate[a], model.coordinate[b]) += I;
    }
  }
}

// dM/dq_k for every k.
std::vector<DofMatrix> mass_matrix_partials(const RobotModel& model,
                                            const DofVector& q) {
  const int n = model.dof();
  const Kinematics kin = forward_kinematics(model, q);
  std::vector<PointJacobian> origin_jac(model.num_links());
  for (int j = 0; j < model.num_links(); ++j) {
    origin_jac[j] = point_jacobian(model, kin, j, Vec2::Zero());
  }
  std::vector<DofMatrix> dM(n, DofMatrix::Zero(n, n));
  for (int i = 0; i < model.num_links(); ++i) {
    const auto& link = model.links[i];
    const PointJacobian Jc = point_jacobian(model, kin, i, link.com);
    for (int k = 0; k < n; ++k) {
      PointJacobian dJ = PointJacobian::Zero(2, n);
      for (int j : model.chain[i]) {
        dJ.col(model.coordinate[j]) =
            perp(Vec2(Jc.col(k) - origin_jac[j].col(k)));
      }
      const DofMatrix t = link.mass * (dJ.transpose() * Jc);
      dM[k] += t + t.transpose();
    }
  }
  return dM;
}

}  // namespace

DofMatrix mass_matrix(const RobotModel& model, const DofVector& q) {
  const int n = model.dof();
  const Kinematics kin = forward_kinematics(model, q);
  DofMatrix M = DofMatrix::Zero(n, n);
  for (int i = 0; i < model.num_links(); ++i) {
    const PointJacobian Jc = point_jacobian(model, kin, i, model.links[i].com);
    M.noalias() += model.links[i].mass * (Jc.transpose() * Jc);
    add_rotational_inertia(model, i, M);
  }
  return M;
}

DofVector bias_forces(const RobotModel& model, const DofVector& q,
                      const DofVector& qd) {
  const Kinematics kin = forward_kinematics(model, q, qd);
  DofVector H = DofVector::Zero(model.dof());
  const Vec2 g(0.0, model.gravity);
  for (int i = 0; i < model.num_links(); ++i) {
    const auto& link = model.links[i];
    const PointJacobian Jc = point_jacobian(model, kin, i, link.com);
    const Vec2 a = point_accel_bias(kin, i, link.com) + g;
    H.noalias() += link.mass * (Jc.transpose() * a);
  }
  return H;
}

DofVector gravity_forces(const RobotModel& model, const DofVector& q) {
  return bias_forces(model, q, DofVector::Zero(q.size()));
}

DofMatrix mass_matrix_derivative(const RobotModel& model, const DofVector& q,
                                 const DofVector& qd) {
  const auto dM = mass_matrix_partials(model, q);
  DofMatrix Mdot = DofMatrix::Zero(model.dof(), model.dof());
  for (int k = 0; k < model.dof(); ++k) Mdot += dM[k] * qd[k];
  return Mdot;
}

DofMatrix coriolis_matrix(const RobotModel& model, const DofVector& q,
                          const DofVector& qd) {
  const int n = model.dof();
  const auto dM = mass_matrix_partials(model, q);
  DofMatrix C = DofMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double c = 0.0;
      for (int k = 0; k < n; ++k) {
        c += 0.5 * (dM[k](i, j) + dM[j](i, k) - dM[i](j, k)) * qd[k];
      }
      C(i, j) = c;
    }
  }
  return C;
}

double kinetic_energy(const RobotModel& model, const DofVector& q,
                      const DofVector& qd) {
  return 0.5 * qd.dot(mass_matrix(model, q) * qd);
}

double potential_energy(const RobotModel& model, const DofVector& q) {
  const Kinematics kin = forward_kinematics(model, q);
  double pe = 0.0;
  for (int i = 0; i < model.num_links(); ++i) {
    const auto& link = model.links[i];
    pe += link.mass * model.gravity * point_position(kin, i, link.com).y();
  }
  return pe;
}

DynamicsTerms dynamics_terms(const RobotModel& model, const FullState& state) {
  DynamicsTerms t;
  t.kin = forward_kinematics(model, state.q, state.qd);
  const int n = model.dof();
  t.M = DofMatrix::Zero(n, n);
  t.H = DofVector::Zero(n);
  const Vec2 g(0.0, model.gravity);
  for (int i = 0; i < model.num_links(); ++i) {
    const auto& link = model.links[i];
    const PointJacobian Jc = point_jacobian(model, t.kin, i, link.com);
    t.M.noalias() += link.mass * (Jc.transpose() * Jc);
    add_rotational_inertia(model, i, t.M);
    const Vec2 a = point_accel_bias(t.kin, i, link.com) + g;
    t.H.noalias() += link.mass * (Jc.transpose() * a);
  }
  t.J = contact_jacobian(model, t.kin, state.stance);
  t.J_dot_qd = contact_accel_bias(model, t.kin, state.stance);
  return t;
}

ConstrainedSolver::ConstrainedSolver(const DofMatrix& M,
                                     const ConstraintJacobian& J)
    : m_llt_(M), J_(J) {
  minv_jt_ = m_llt_.solve(DofMatrix(J.transpose()));
  const auto S = (J * minv_jt_).eval();
  schur_.compute(S);
  const auto d = schur_.vectorD().cwiseAbs();
  const double scale = std::max(S.diagonal().cwiseAbs().maxCoeff(), 1e-300);
  if (m_llt_.info() != Eigen::Success || schur_.info() != Eigen::Success ||
      d.minCoeff() < kSingularTolerance * scale) {
    throw SingularConstraint("stance constraint Jacobian is rank deficient");
  }
}

void ConstrainedSolver::solve(const DofVector& a, const ConstraintVector& b,
                              DofVector& x, ConstraintVector& y) const {
  const DofVector minv_a = m_llt_.solve(a);
  y = schur_.solve(ConstraintVector(b - J_ * minv_a));
  x = minv_a + minv_jt_ * y;
}

ActuatorVector clamp_torques(const RobotModel& model, const ActuatorVector& u) {
  return u.cwiseMax(-model.torque_limits).cwiseMin(model.torque_limits);
}

ContactSolution contact_dynamics(const RobotModel& model,
                                 const DynamicsTerms& terms,
                                 const DofVector& qd, const ActuatorVector& u,
                                 const DofVector* external) {
  (void)qd;
  DofVector rhs = model.B * clamp_torques(model, u) - terms.H;
  if (external != nullptr) rhs += *external;
  const ConstrainedSolver solver(terms.M, terms.J);
  ContactSolution sol;
  solver.solve(rhs, ConstraintVector(-terms.J_dot_qd), sol.qdd, sol.lambda);
  return sol;
}

ContactSolution contact_dynamics(const RobotModel& model,
                                 const FullState& state,
                                 const ActuatorVector& u,
                                 const DofVector* external) {
  return contact_dynamics(model, dynamics_terms(model, state), state.qd, u,
                          external);
}

ImpactResult impact_map(const RobotModel& model, const FullState& pre) {
  const Side new_stance = pre.swing();
  const Kinematics kin = forward_kinematics(model, pre.q, pre.qd);
  const DofMatrix M = mass_matrix(model, pre.q);
  const ConstraintJacobian J = contact_jacobian(model, kin, new_stance);
  const ConstrainedSolver solver(M, J);
  ImpactResult r;
  r.post = pre;
  solver.solve(M * pre.qd, ConstraintVector::Zero(J.rows()), r.post.qd,
               r.impulse);
  r.post.stance = new_stance;
  r.post.t_step = 0.0;
  r.post.contact_point = foot_position(model, kin, new_stance);
  return r;
}

FullState impact_reset(const RobotModel& model, const FullState& pre) {
  ImpactResult r = impact_map(model, pre);
  double vertical = r.impulse[1];
  if (model.constraint_dim() == 3) vertical += r.impulse[2];
  if (vertical < 0.0) {
    throw ImpactInfeasible("touchdown impulse would pull the foot down");
  }
  return r.post;
}

double angular_momentum(const RobotModel& model, const Kinematics& kin,
                        const Vec2& about) {
  double L = 0.0;
  for (int i = 0; i < model.num_links(); ++i) {
    const auto& link = model.links[i];
    const Vec2 r = point_position(kin, i, link.com) - about;
    const Vec2 v = point_velocity(kin, i, link.com);
    L += link.mass * (r.y() * v.x() - r.x() * v.y()) +
         link.inertia * kin.frame(i).rate;
  }
  return L;
}

double angular_momentum(const RobotModel& model, const FullState& state,
                        const Vec2& about) {
  return angular_momentum(model, forward_kinematics(model, state.q, state.qd),
                          about);
}

ComState com_state(const RobotModel& model, const Kinematics& kin) {
  ComState c{Vec2::Zero(), Vec2::Zero()};
  double m = 0.0;
  for (int i = 0; i < model.num_links(); ++i) {
    const auto& link = model.links[i];
    c.position += link.mass * point_position(kin, i, link.com);
    c.velocity += link.mass * point_velocity(kin, i, link.com);
    m += link.mass;
  }
  c.position /= m;
  c.velocity /= m;
  return c;
}

ComState com_state(const RobotModel& model, const FullState& state) {
  return com_state(model, forward_kinematics(model, state.q, state.qd));
}

DofVector torso_force(const RobotModel& model, const Kinematics& kin,
                      const Vec2& force) {
  const PointJacobian J = point_jacobian(model, kin, 0, model.links[0].com);
  return J.transpose() * force;
}

}  // namespace hlloco::rigid_body
