#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hlloco/alip/alip.hpp"
#include "hlloco/gait/generator.hpp"
#include "hlloco/tracking/controllers.hpp"

namespace hlloco::env {

inline constexpr int kObsDim = 5;
inline constexpr int kActDim = 3;

/// (x, L^y, e_vx, v_x^d, alpha): base x relative to the stance contact,
/// angular momentum about the contact, average-velocity error, command and
/// terrain slope.
using Observation = Eigen::Matrix<double, kObsDim, 1>;
using NormalizedAction = Eigen::Matrix<double, kActDim, 1>;

/// Weights over (r_vx, r_vy, r_LCoM, r_a).
struct RewardWeights {
  std::array<double, 4> w{0.6, 0.0, 0.2, 0.2};
  double sum() const { return w[0] + w[1] + w[2] + w[3]; }
};

enum class FallCause { kNone, kPitch, kHeight, kStepTimeout, kNumerical };
const char* to_string(FallCause cause);

/// Horizontal push at the torso CoM.
struct Disturbance {
  double t_start = 0.0;  ///< s
  double duration = 0.0;  ///< s
  double force_x = 0.0;  ///< N
};

/// Piecewise-constant command: v(t) is the value of the last segment whose
/// start time is <= t.
struct VelocityProfile {
  std::vector<std::pair<double, double>> segments{{0.0, 0.0}};

  double at(double t) const;
  static VelocityProfile constant(double v);
};

struct EpisodeConfig {
  VelocityProfile v_profile;
  double alpha = 0.0;  ///< rad
  std::vector<Disturbance> disturbances;
  int max_hl_steps = 300;
  std::uint64_t seed = 0;
  bool reset_noise = true;
};

/// Training curriculum.
struct Curriculum {
  double v_min = -1.0;
  double v_max = 1.0;
  double resample_period = 3.0;  ///< s
  double alpha_min = 0.0;        ///< rad
  double alpha_max = 0.17453292519943295;  ///< rad (10 deg)
  bool disturbances = false;
  double force_max = 40.0;  ///< N, when disturbances are on
};

struct EnvConfig {
  std::string robot = "rabbit";
  tracking::ControllerKind controller = tracking::ControllerKind::kFL;
  std::string gains = "nominal";
  double torque_weight = 1e-9;
  bool unilateral = true;
  gait::GaitConfig gait;  ///< nominal_height is taken from the robot file
  gait::ActionBounds bounds;
  RewardWeights reward;
  int ll_per_hl = 30;
  double ll_dt = 1e-3;
  int max_hl_steps = 300;
  double q_noise = 0.03;   ///< rad
  double qd_noise = 0.05;  ///< rad/s
  double pitch_limit = 1.0;   ///< rad
  double height_limit = 0.5;  ///< m above the terrain under the base
  double step_timeout = 2.0;  ///< in units of the nominal step time
  double velocity_window = 0.4;  ///< s, fallback averaging window
  Curriculum curriculum;
};

struct RewardTerms {
  double r_vx = 1.0;
  double r_vy = 1.0;
  double r_lcom = 1.0;
  double r_a = 1.0;
};

struct Diagnostics {
  double t = 0.0;
  double v_des = 0.0;
  double v_bar = 0.0;
  double pitch = 0.0;
  double height = 0.0;
  double L_contact = 0.0;
  double L_com = 0.0;
  double action_delta = 0.0;
  RewardTerms terms;
  gait::HLAction action;
  FallCause fall = FallCause::kNone;
};

/// Touchdown event seen inside an HL step.
struct Touchdown {
  double t = 0.0;
  double step_duration = 0.0;
  alip::AlipState before;  ///< about the old contact, just before impact
  alip::AlipState after;   ///< about the new contact, just after impact
  alip::AlipState after_com;  ///< as `after` with the CoM x
};

struct StepResult {
  Observation obs;
  double reward = 0.0;
  bool terminated = false;  ///< fall or numerical failure
  bool truncated = false;   ///< episode cap reached
  Diagnostics diag;
  std::vector<Touchdown> touchdowns;
};

}  // namespace hlloco::env
