#pragma once

#include <Eigen/Core>

#include "hlloco/common/types.hpp"
#include "hlloco/gait/trajectory.hpp"

namespace hlloco::gait {

/// High-level command, in physical units.
struct HLAction {
  double p_sw_x = 0.0;  ///< m, swing landing x relative to the base
  double q_phi = 0.0;   ///< rad, torso pitch target
  double h_d = 0.0;     ///< m, offset on the nominal base height
};

struct ActionBounds {
  double p_sw_x = 0.6;
  double q_phi = 0.5;
  double h_d = 0.1;

  HLAction clamp(const HLAction& a) const;
  /// Maps into [-1, 1]^3.
  Eigen::Vector3d normalize(const HLAction& a) const;
  HLAction denormalize(const Eigen::Vector3d& v) const;
};

struct GaitConfig {
  double step_time = 0.4;         ///< s, T
  double clearance = 0.12;        ///< m, apex above the higher endpoint
  double nominal_height = 0.75;   ///< m, H0
  double pitch_rate = 2.0;        ///< rad/s slew of the torso pitch target
  double height_rate = 0.5;       ///< m/s slew of the height target
  double retarget_freeze = 0.85;  ///< tau after which the landing is fixed
  double overrun_descent = 0.3;   ///< m/s swing descent after tau = 1
  double z_offset = 0.005;        ///< m, landing target below the surface
};

/// Desired outputs in the order torso pitch, base height above the terrain
/// under the base, swing x - base x, swing z - base z + H0, and for flat feet
/// the swing sole pitch.
struct DesiredOutputs {
  OutputVector y;
  OutputVector yd;
  OutputVector ydd;
  double tau = 0.0;  ///< t_step / T clamped to [0, 1]
};

/// Builds y_d(t) from the latest action. Holds the swing start point from the
/// last touchdown, the current landing target, and fades that keep the
/// trajectory continuous when the target moves mid-step.
class GaitGenerator {
 public:
  GaitGenerator(const GaitConfig& config, int output_dim);

  /// New episode: ramps start at the given values, `swing0` is the swing foot
  /// (x, z) in the output frame.
  void reset(double t, double q_phi, double h_d, const Vec2& swing0,
             double alpha);

  /// Touchdown: the swing trajectory restarts from `swing0`.
  void start_step(const Vec2& swing0, double alpha);

  /// HL tick at absolute time t and step time t_step.
  void set_action(const HLAction& action, double t, double t_step,
                  double alpha);

  DesiredOutputs evaluate(double t, double t_step) const;

  const HLAction& action() const { return action_; }
  const GaitConfig& config() const { return config_; }
  double landing_x() const { return target_.x(); }
  double landing_z() const { return target_.y(); }

 private:
  struct Ramp {
    double start = 0.0;
    double t0 = 0.0;
    double target = 0.0;
    double rate = 1.0;
    Sample at(double t) const;
  };

  Sample nominal_x(double tau) const;
  Sample nominal_z(double tau) const;
  Sample swing_x(double tau, double t_step) const;
  Sample swing_z(double tau, double t_step) const;
  void retarget(const Vec2& target, double tau);

  GaitConfig config_;
  int output_dim_;
  HLAction action_;
  double alpha_ = 0.0;
  Ramp pitch_;
  Ramp height_;
  Vec2 p0_ = Vec2::Zero();
  Vec2 target_ = Vec2::Zero();
  std::array<double, 6> z_points_{};
  Fade fade_x_;
  Fade fade_z_;
};

}  // namespace hlloco::gait
