#pragma once

#include <array>

namespace hlloco::gait {

/// Position with first and second time derivatives.
struct Sample {
  double pos = 0.0;
  double vel = 0.0;
  double acc = 0.0;
};

/// Minimum-jerk blend p0 -> pT with s = 10t^3 - 15t^4 + 6t^5. tau in [0, 1];
/// derivatives are per second for a step of duration T.
Sample min_jerk(double p0, double pT, double tau, double T);

/// Fifth-order Bezier curve in Bernstein form. Derivatives per second for a
/// step of duration T.
Sample bezier5(const std::array<double, 6>& b, double tau, double T);

/// Swing height profile b = (z0, z0, c, c, zT, zT) whose value at tau = 0.5 is
/// `apex`.
std::array<double, 6> swing_control_points(double z0, double zT, double apex);

/// Quintic on [tau0, 1] that starts from (value, rate, accel) = start, given
/// per second, and ends at zero with zero derivatives. Used to blend a
/// trajectory onto a new target without jumps.
struct Fade {
  double tau0 = 0.0;
  double T = 1.0;
  std::array<double, 6> c{};  ///< coefficients in s = (tau - tau0)/(1 - tau0)

  static Fade from(const Sample& start, double tau0, double T);
  Sample at(double tau) const;
};

/// Landing height of the swing foot in the output frame:
/// -h_d + p_x tan(alpha) - z_off.
double landing_height(double h_d, double p_sw_x, double alpha,
                      double z_off = 0.005);

}  // namespace hlloco::gait
