#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hlloco/common/types.hpp"

namespace hlloco::rigid_body {

enum class Variant { kRabbit, kWalker2D, kRabbitIdeal };
enum class FootType { kPoint, kFlat };

const char* to_string(Variant v);

/// One rigid link. Local frame origin sits at the joint connecting the link to
/// its parent (the hip for the torso, which doubles as the floating base).
/// Points are expressed in the link frame as (x forward, z up) at zero angle.
struct LinkParams {
  std::string name;
  int parent = -1;           ///< -1 for the torso
  bool attach_at_tip = false;  ///< joint sits at the parent's tip, else origin
  double mass = 0.0;         ///< kg
  double inertia = 0.0;      ///< about the CoM, kg m^2
  double length = 0.0;       ///< m
  Vec2 com = Vec2::Zero();
  Vec2 tip = Vec2::Zero();

  // Revolute joint to the parent; unused for the torso.
  std::string joint_name;
  bool actuated = false;
  double torque_limit = 0.0;  ///< N m
};

struct FootGeometry {
  FootType type = FootType::kPoint;
  int link = -1;
  Vec2 point = Vec2::Zero();  ///< point foot contact
  Vec2 toe = Vec2::Zero();    ///< flat foot sole corners
  Vec2 heel = Vec2::Zero();

  /// Local point used as "the" contact for momentum and output purposes.
  Vec2 reference() const {
    return type == FootType::kPoint ? point : Vec2(0.5 * (toe + heel));
  }
};

struct Leg {
  std::string name;
  int hip_link = -1;
  FootGeometry foot;
};

/// Kinematic and inertial description of a planar serial-branched biped.
///
/// Generalized coordinates are q = (x, z, pitch, joint angles...) where
/// (x, z) is the hip and pitch the torso angle. All angles rotate about the
/// world y axis: positive pitch tilts the torso forward, positive hip angles
/// swing the leg backward.
struct RobotModel {
  std::string name;
  Variant variant = Variant::kRabbit;
  double gravity = 9.81;
  double nominal_base_height = 0.75;
  double stance_width = 0.1;
  std::vector<LinkParams> links;
  Leg legs[2];

  // Derived by finalize().
  std::vector<int> coordinate;               ///< q index driving each link
  std::vector<std::vector<int>> chain;       ///< root..self for each link
  std::vector<int> actuated_coordinates;
  ActuationMatrix B;
  ActuatorVector torque_limits;

  int dof() const { return 3 + static_cast<int>(links.size()) - 1; }
  int num_links() const { return static_cast<int>(links.size()); }
  int num_actuators() const {
    return static_cast<int>(actuated_coordinates.size());
  }
  /// Rows of the stance constraint: 2 for a point foot, 3 for a flat foot.
  int constraint_dim() const {
    return legs[0].foot.type == FootType::kPoint ? 2 : 3;
  }
  /// Task-space outputs tracked by the low-level controller.
  int output_dim() const {
    return legs[0].foot.type == FootType::kPoint ? 4 : 5;
  }
  bool has_feet() const { return legs[0].foot.type == FootType::kFlat; }
  const Leg& leg(Side s) const { return legs[index(s)]; }
  double total_mass() const;

  /// Checks physical invariants and builds the derived tables. Throws
  /// InvalidConfig.
  void finalize();
};

/// Parses the robot parameter file format (see data/robots/README.md).
RobotModel parse_robot_json(std::string_view json_text);

/// Loads a robot by embedded variant name ("rabbit", "rabbit_ideal",
/// "walker2d") or by path to a parameter file.
RobotModel load_robot(const std::string& name_or_path);

std::vector<std::string> embedded_robot_names();

}  // namespace hlloco::rigid_body
