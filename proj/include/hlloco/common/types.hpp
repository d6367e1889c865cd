#pragma once

#include <Eigen/Dense>

namespace hlloco {

// Upper bounds for the planar robots this library supports (Walker2D is the
// largest). Fixed maximum sizes keep the per-tick hot path off the heap.
inline constexpr int kMaxDof = 9;
inline constexpr int kMaxLinks = 7;
inline constexpr int kMaxActuators = 6;
inline constexpr int kMaxConstraints = 3;
inline constexpr int kMaxOutputs = 5;

using Vec2 = Eigen::Vector2d;

using DofVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDof, 1>;
using DofMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDof, kMaxDof>;

using ActuatorVector =
    Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxActuators, 1>;
using ActuationMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                      0, kMaxDof, kMaxActuators>;

using ConstraintVector =
    Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxConstraints, 1>;
using ConstraintJacobian = Eigen::Matrix<double, Eigen::Dynamic,
                                         Eigen::Dynamic, 0, kMaxConstraints,
                                         kMaxDof>;

using OutputVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxOutputs, 1>;
using OutputJacobian = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                     0, kMaxOutputs, kMaxDof>;

using PointJacobian =
    Eigen::Matrix<double, 2, Eigen::Dynamic, 0, 2, kMaxDof>;

enum class Side { kLeft = 0, kRight = 1 };

constexpr Side other(Side s) {
  return s == Side::kLeft ? Side::kRight : Side::kLeft;
}

constexpr int index(Side s) { return static_cast<int>(s); }

const char* to_string(Side s);

}  // namespace hlloco
