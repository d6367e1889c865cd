#pragma once

#include <random>
#include <string>

#include "hlloco/rigid_body/dynamics.hpp"
#include "hlloco/rigid_body/pose.hpp"
#include "hlloco/rigid_body/robot_model.hpp"

namespace hlloco::testing {

inline std::string data_path(const std::string& rel) {
  return std::string(HLLOCO_SOURCE_DIR) + "/data/" + rel;
}

inline rigid_body::RobotModel robot_from_file(const std::string& name) {
  return rigid_body::load_robot(data_path("robots/" + name + ".json"));
}

/// Random configuration near the walking envelope with the stance foot pinned
/// at its current position.
inline rigid_body::FullState random_state(const rigid_body::RobotModel& model,
                                          std::mt19937_64& rng,
                                          double angle_spread = 0.4,
                                          double rate_spread = 1.5) {
  std::uniform_real_distribution<double> a(-angle_spread, angle_spread);
  std::uniform_real_distribution<double> r(-rate_spread, rate_spread);
  rigid_body::FullState s = rigid_body::standing_state(model);
  for (int i = 2; i < model.dof(); ++i) s.q[i] += a(rng);
  for (int i = 0; i < model.dof(); ++i) s.qd[i] = r(rng);
  const auto kin = rigid_body::forward_kinematics(model, s.q);
  s.contact_point = rigid_body::foot_position(model, kin, s.stance);
  return s;
}

/// Projects qd onto the stance constraint so the state is feasible.
inline void make_feasible(const rigid_body::RobotModel& model,
                          rigid_body::FullState& s) {
  const auto kin = rigid_body::forward_kinematics(model, s.q);
  const auto J = rigid_body::contact_jacobian(model, kin, s.stance);
  const Eigen::MatrixXd Jd = J;
  const Eigen::MatrixXd N = Jd.fullPivLu().kernel();
  const Eigen::VectorXd qd = s.qd;
  // Euclidean projection onto the null space.
  const Eigen::VectorXd z = (N.transpose() * N).ldlt().solve(N.transpose() * qd);
  s.qd = N * z;
}

}  // namespace hlloco::testing
