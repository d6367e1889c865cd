#include "hlloco/gait/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace hlloco::gait {

Sample min_jerk(double p0, double pT, double tau, double T) {
  const double t = tau, t2 = t * t, t3 = t2 * t;
  const double s = t3 * (10.0 - 15.0 * t + 6.0 * t2);
  const double ds = 30.0 * t2 * (1.0 - 2.0 * t + t2);
  const double dds = 60.0 * t * (1.0 - 3.0 * t + 2.0 * t2);
  const double d = pT - p0;
  return {p0 + d * s, d * ds / T, d * dds / (T * T)};
}

Sample bezier5(const std::array<double, 6>& b, double tau, double T) {
  const double t = tau, u = 1.0 - tau;
  // Bernstein basis of degree 5, 4 and 3.
  const double pos = u * u * u * u * u * b[0] + 5 * t * u * u * u * u * b[1] +
                     10 * t * t * u * u * u * b[2] +
                     10 * t * t * t * u * u * b[3] +
                     5 * t * t * t * t * u * b[4] + t * t * t * t * t * b[5];
  std::array<double, 5> d1{};
  for (int i = 0; i < 5; ++i) d1[i] = 5 * (b[i + 1] - b[i]);
  const double vel = u * u * u * u * d1[0] + 4 * t * u * u * u * d1[1] +
                     6 * t * t * u * u * d1[2] + 4 * t * t * t * u * d1[3] +
                     t * t * t * t * d1[4];
  std::array<double, 4> d2{};
  for (int i = 0; i < 4; ++i) d2[i] = 4 * (d1[i + 1] - d1[i]);
  const double acc = u * u * u * d2[0] + 3 * t * u * u * d2[1] +
                     3 * t * t * u * d2[2] + t * t * t * d2[3];
  return {pos, vel / T, acc / (T * T)};
}

std::array<double, 6> swing_control_points(double z0, double zT, double apex) {
  // z(0.5) = (6 z0 + 20 c + 6 zT) / 32.
  const double c = (32.0 * apex - 6.0 * (z0 + zT)) / 20.0;
  return {z0, z0, c, c, zT, zT};
}

Fade Fade::from(const Sample& start, double tau0, double T) {
  Fade f;
  f.tau0 = tau0;
  f.T = T;
  const double span = (1.0 - tau0) * T;  // seconds covered by s in [0, 1]
  const double a0 = start.pos;
  const double a1 = start.vel * span;
  const double a2 = start.acc * span * span;
  f.c = {a0,
         a1,
         0.5 * a2,
         -10.0 * a0 - 6.0 * a1 - 1.5 * a2,
         15.0 * a0 + 8.0 * a1 + 1.5 * a2,
         -6.0 * a0 - 3.0 * a1 - 0.5 * a2};
  return f;
}

Sample Fade::at(double tau) const {
  if (tau >= 1.0 || tau0 >= 1.0) return {};
  const double span = (1.0 - tau0) * T;
  const double s = std::max(0.0, (tau - tau0) / (1.0 - tau0));
  const double pos =
      c[0] + s * (c[1] + s * (c[2] + s * (c[3] + s * (c[4] + s * c[5]))));
  const double vel =
      c[1] + s * (2 * c[2] + s * (3 * c[3] + s * (4 * c[4] + s * 5 * c[5])));
  const double acc = 2 * c[2] + s * (6 * c[3] + s * (12 * c[4] + s * 20 * c[5]));
  return {pos, vel / span, acc / (span * span)};
}

double landing_height(double h_d, double p_sw_x, double alpha, double z_off) {
  return -h_d + p_sw_x * std::tan(alpha) - z_off;
}

}  // namespace hlloco::gait
