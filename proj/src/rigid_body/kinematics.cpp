#include "hlloco/rigid_body/kinematics.hpp"

#include <cmath>

namespace hlloco::rigid_body {

Kinematics forward_kinematics(const RobotModel& model, const DofVector& q,
                              const DofVector& qd) {
  Kinematics kin;
  kin.num_links = model.num_links();
  for (int i = 0; i < kin.num_links; ++i) {
    const auto& link = model.links[i];
    LinkFrame& f = kin.frames[i];
    const int c = model.coordinate[i];
    if (link.parent < 0) {
      f.angle = q[2];
      f.rate = qd[2];
      f.origin = {q[0], q[1]};
      f.origin_velocity = {qd[0], qd[1]};
      f.origin_accel_bias.setZero();
      continue;
    }
    const LinkFrame& p = kin.frames[link.parent];
    const Vec2 attach =
        link.attach_at_tip ? model.links[link.parent].tip : Vec2::Zero();
    const Vec2 r = rotate(p.angle, attach);
    f.angle = p.angle + q[c];
    f.rate = p.rate + qd[c];
    f.origin = p.origin + r;
    f.origin_velocity = p.origin_velocity + p.rate * perp(r);
    f.origin_accel_bias = p.origin_accel_bias - p.rate * p.rate * r;
  }
  return kin;
}

Kinematics forward_kinematics(const RobotModel& model, const DofVector& q) {
  return forward_kinematics(model, q, DofVector::Zero(q.size()));
}

Vec2 point_position(const Kinematics& kin, int link, const Vec2& local) {
  const LinkFrame& f = kin.frame(link);
  return f.origin + rotate(f.angle, local);
}

Vec2 point_velocity(const Kinematics& kin, int link, const Vec2& local) {
  const LinkFrame& f = kin.frame(link);
  return f.origin_velocity + f.rate * perp(rotate(f.angle, local));
}

Vec2 point_accel_bias(const Kinematics& kin, int link, const Vec2& local) {
  const LinkFrame& f = kin.frame(link);
  return f.origin_accel_bias - f.rate * f.rate * rotate(f.angle, local);
}

PointJacobian point_jacobian(const RobotModel& model, const Kinematics& kin,
                             int link, const Vec2& local) {
  PointJacobian J = PointJacobian::Zero(2, model.dof());
  J(0, 0) = 1.0;
  J(1, 1) = 1.0;
  const Vec2 p = point_position(kin, link, local);
  for (int j : model.chain[link]) {
    J.col(model.coordinate[j]) = perp(p - kin.frame(j).origin);
  }
  return J;
}

ConstraintJacobian contact_jacobian(const RobotModel& model,
                                    const Kinematics& kin, Side side) {
  const FootGeometry& foot = model.leg(side).foot;
  ConstraintJacobian J(model.constraint_dim(), model.dof());
  if (foot.type == FootType::kPoint) {
    J = point_jacobian(model, kin, foot.link, foot.point);
  } else {
    const PointJacobian toe = point_jacobian(model, kin, foot.link, foot.toe);
    const PointJacobian heel = point_jacobian(model, kin, foot.link, foot.heel);
    J.topRows(2) = toe;
    J.row(2) = heel.row(1);
  }
  return J;
}

ConstraintVector contact_accel_bias(const RobotModel& model,
                                    const Kinematics& kin, Side side) {
  const FootGeometry& foot = model.leg(side).foot;
  ConstraintVector b(model.constraint_dim());
  if (foot.type == FootType::kPoint) {
    b = point_accel_bias(kin, foot.link, foot.point);
  } else {
    b.head(2) = point_accel_bias(kin, foot.link, foot.toe);
    b[2] = point_accel_bias(kin, foot.link, foot.heel).y();
  }
  return b;
}

ConstraintVector contact_position(const RobotModel& model,
                                  const Kinematics& kin, Side side) {
  const FootGeometry& foot = model.leg(side).foot;
  ConstraintVector p(model.constraint_dim());
  if (foot.type == FootType::kPoint) {
    p = point_position(kin, foot.link, foot.point);
  } else {
    p.head(2) = point_position(kin, foot.link, foot.toe);
    p[2] = point_position(kin, foot.link, foot.heel).y();
  }
  return p;
}

Vec2 foot_position(const RobotModel& model, const Kinematics& kin, Side side) {
  const FootGeometry& foot = model.leg(side).foot;
  return point_position(kin, foot.link, foot.reference());
}

Vec2 foot_velocity(const RobotModel& model, const Kinematics& kin, Side side) {
  const FootGeometry& foot = model.leg(side).foot;
  return point_velocity(kin, foot.link, foot.reference());
}

FootClearance foot_clearance(const RobotModel& model, const Kinematics& kin,
                             Side side, double terrain_slope) {
  const FootGeometry& foot = model.leg(side).foot;
  const double t = std::tan(terrain_slope);
  // Distance along the vertical, velocity along the surface normal.
  const Vec2 n = Vec2(-std::sin(terrain_slope), std::cos(terrain_slope));
  auto eval = [&](const Vec2& local) {
    const Vec2 p = point_position(kin, foot.link, local);
    const Vec2 v = point_velocity(kin, foot.link, local);
    return FootClearance{p.y() - t * p.x(), n.dot(v)};
  };
  if (foot.type == FootType::kPoint) return eval(foot.point);
  const FootClearance toe = eval(foot.toe);
  const FootClearance heel = eval(foot.heel);
  return toe.height <= heel.height ? toe : heel;
}

}  // namespace hlloco::rigid_body
