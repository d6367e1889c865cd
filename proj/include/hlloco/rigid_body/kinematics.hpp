#pragma once

#include <array>

#include "hlloco/common/types.hpp"
#include "hlloco/rigid_body/robot_model.hpp"

namespace hlloco::rigid_body {

/// Rotation by a pitch angle: local (x, z) -> world.
inline Vec2 rotate(double angle, const Vec2& v) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x() + s * v.y(), -s * v.x() + c * v.y()};
}

/// d/dtheta of rotate(theta, v) expressed on the rotated vector r.
inline Vec2 perp(const Vec2& r) { return {r.y(), -r.x()}; }

struct LinkFrame {
  double angle = 0.0;
  double rate = 0.0;
  Vec2 origin = Vec2::Zero();
  Vec2 origin_velocity = Vec2::Zero();
  Vec2 origin_accel_bias = Vec2::Zero();  ///< origin acceleration at qdd = 0
};

/// Link frames for one (q, qd). Cheap to copy.
struct Kinematics {
  std::array<LinkFrame, kMaxLinks> frames{};
  int num_links = 0;

  const LinkFrame& frame(int link) const { return frames[link]; }
};

Kinematics forward_kinematics(const RobotModel& model, const DofVector& q,
                              const DofVector& qd);
Kinematics forward_kinematics(const RobotModel& model, const DofVector& q);

Vec2 point_position(const Kinematics& kin, int link, const Vec2& local);
Vec2 point_velocity(const Kinematics& kin, int link, const Vec2& local);
/// Jdot * qd for the point.
Vec2 point_accel_bias(const Kinematics& kin, int link, const Vec2& local);
PointJacobian point_jacobian(const RobotModel& model, const Kinematics& kin,
                             int link, const Vec2& local);

/// Stance constraint rows: (x, z) of a point foot, or toe (x, z) plus heel z
/// for a flat foot.
ConstraintJacobian contact_jacobian(const RobotModel& model,
                                    const Kinematics& kin, Side side);
ConstraintVector contact_accel_bias(const RobotModel& model,
                                    const Kinematics& kin, Side side);
ConstraintVector contact_position(const RobotModel& model,
                                  const Kinematics& kin, Side side);

/// World position of the foot reference point (point foot or sole centre).
Vec2 foot_position(const RobotModel& model, const Kinematics& kin, Side side);
Vec2 foot_velocity(const RobotModel& model, const Kinematics& kin, Side side);
/// Lowest sole point height above the terrain and its vertical velocity.
struct FootClearance {
  double height = 0.0;
  double normal_velocity = 0.0;
};
FootClearance foot_clearance(const RobotModel& model, const Kinematics& kin,
                             Side side, double terrain_slope);

}  // namespace hlloco::rigid_body
