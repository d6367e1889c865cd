#include "hlloco/tracking/outputs.hpp"

#include <cmath>

namespace hlloco::tracking {

using rigid_body::FootType;

OutputJacobians actual_outputs(const rigid_body::RobotModel& model,
                               const rigid_body::Kinematics& kin,
                               const rigid_body::FullState& state,
                               double terrain_slope, double nominal_height) {
  const int n = model.dof();
  const int p = model.output_dim();
  OutputJacobians out;
  out.y_a = OutputVector::Zero(p);
  out.Jy = OutputJacobian::Zero(p, n);
  out.Jy_dot_qd = OutputVector::Zero(p);

  const double slope = std::tan(terrain_slope);
  out.y_a[0] = state.q[2];
  out.Jy(0, 2) = 1.0;

  out.y_a[1] = state.q[1] - slope * state.q[0];
  out.Jy(1, 0) = -slope;
  out.Jy(1, 1) = 1.0;

  const auto& foot = model.leg(state.swing()).foot;
  const Vec2 ref = foot.reference();
  const Vec2 pos = rigid_body::point_position(kin, foot.link, ref);
  const PointJacobian Jp = rigid_body::point_jacobian(model, kin, foot.link, ref);
  const Vec2 bias = rigid_body::point_accel_bias(kin, foot.link, ref);
  out.y_a[2] = pos.x() - state.q[0];
  out.y_a[3] = pos.y() - state.q[1] + nominal_height;
  out.Jy.row(2) = Jp.row(0);
  out.Jy.row(3) = Jp.row(1);
  out.Jy(2, 0) -= 1.0;
  out.Jy(3, 1) -= 1.0;
  out.Jy_dot_qd[2] = bias.x();
  out.Jy_dot_qd[3] = bias.y();

  if (p > 4) {
    out.y_a[4] = kin.frame(foot.link).angle;
    for (int link : model.chain[foot.link]) out.Jy(4, model.coordinate[link]) = 1.0;
  }
  return out;
}

OutputErrors output_eval(const rigid_body::RobotModel& model,
                         const rigid_body::Kinematics& kin,
                         const rigid_body::FullState& state,
                         const gait::DesiredOutputs& desired,
                         double terrain_slope, double nominal_height) {
  OutputErrors e;
  e.jac = actual_outputs(model, kin, state, terrain_slope, nominal_height);
  e.y = e.jac.y_a - desired.y;
  e.dy = e.jac.Jy * state.qd - desired.yd;
  e.ydd_d = desired.ydd;
  return e;
}

}  // namespace hlloco::tracking
