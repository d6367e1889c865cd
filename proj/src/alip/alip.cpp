#include "hlloco/alip/alip.hpp"

#include <algorithm>
#include <cmath>

#include "hlloco/common/errors.hpp"
#include "hlloco/rigid_body/dynamics.hpp"
#include "hlloco/rigid_body/pose.hpp"

namespace hlloco::alip {

double AlipParams::ell() const { return std::sqrt(g / H); }

void AlipParams::validate() const {
  if (!(m > 0) || !(H > 0) || !(T > 0) || !(g > 0)) {
    throw InvalidConfig("ALIP parameters must be positive");
  }
}

AlipParams params_for(const rigid_body::RobotModel& model, double step_time) {
  const auto standing = rigid_body::standing_state(model);
  AlipParams p;
  p.m = model.total_mass();
  p.H = rigid_body::com_state(model, standing).position.y();
  p.g = model.gravity;
  p.T = step_time;
  p.validate();
  return p;
}

AlipState alip_derivative(const AlipState& s, const AlipParams& params) {
  return {s.L / (params.m * params.H), params.m * params.g * s.p};
}

AlipState alip_flow(const AlipState& s0, double t, const AlipParams& params) {
  const double l = params.ell();
  const double mhl = params.m * params.H * l;
  const double c = std::cosh(l * t);
  const double sh = std::sinh(l * t);
  return {s0.p * c + s0.L * sh / mhl, mhl * s0.p * sh + s0.L * c};
}

double orbital_energy(const AlipState& s, const AlipParams& params) {
  const double mh = params.m * params.H;
  return s.L * s.L / (2 * mh * mh) - params.g * s.p * s.p / (2 * params.H);
}

double deadbeat_stance_position(double L_end, double v_des,
                                const AlipParams& params) {
  const double l = params.ell();
  const double L_des = params.m * params.H * v_des;
  return (L_des - std::cosh(l * params.T) * L_end) /
         (params.m * params.H * l * std::sinh(l * params.T));
}

double alip_planner_step(const AlipState& current, double t_step, double v_des,
                         const AlipParams& params, double bound) {
  const double remaining = std::max(0.0, params.T - t_step);
  const double L_end = alip_flow(current, remaining, params).L;
  const double p_next = deadbeat_stance_position(L_end, v_des, params);
  return std::clamp(-p_next, -bound, bound);
}

double periodic_end_velocity(double v_avg, const AlipParams& params) {
  const double h = 0.5 * params.ell() * params.T;
  return v_avg * h / std::tanh(h);
}

std::vector<PredictionRow> prediction_error_study(
    const std::vector<StepSample>& log, const AlipParams& params) {
  if (log.empty()) throw EmptyLog("prediction study needs at least one step");
  const double scale = 1.0 / (params.m * params.H);
  std::vector<PredictionRow> rows;
  rows.reserve(log.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    const double t = log[i].duration > 0.0 ? log[i].duration : params.T;
    const AlipState end = alip_flow(log[i].start, t, params);
    rows.push_back({static_cast<int>(i), end.L * scale,
                    log[i].actual_L * scale});
  }
  return rows;
}

double mean_abs_error(const std::vector<PredictionRow>& rows) {
  if (rows.empty()) throw EmptyLog("no prediction rows");
  double sum = 0.0;
  for (const auto& r : rows) sum += std::abs(r.predicted - r.actual);
  return sum / static_cast<double>(rows.size());
}

}  // namespace hlloco::alip
