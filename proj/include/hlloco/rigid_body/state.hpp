#pragma once

#include "hlloco/common/types.hpp"

namespace hlloco::rigid_body {

struct FullState {
  DofVector q;
  DofVector qd;
  Side stance = Side::kLeft;
  double t_step = 0.0;  ///< s since the last touchdown
  Vec2 contact_point = Vec2::Zero();  ///< world position of the stance contact

  Side swing() const { return other(stance); }
};

struct ContactSolution {
  DofVector qdd;
  ConstraintVector lambda;  ///< N, rows follow contact_jacobian()
};

struct TerrainSpec {
  double slope = 0.0;  ///< rad, |slope| <= 0.35

  double height(double x) const;
  /// Unit normal of the surface.
  Vec2 normal() const;
};

}  // namespace hlloco::rigid_body
