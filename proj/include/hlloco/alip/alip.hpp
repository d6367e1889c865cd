#pragma once

#include <vector>

#include "hlloco/rigid_body/robot_model.hpp"

namespace hlloco::alip {

/// Reduced state about the stance contact.
struct AlipState {
  double p = 0.0;  ///< m, horizontal CoM (or base) position minus contact x
  double L = 0.0;  ///< kg m^2/s, pitch angular momentum about the contact
};

struct AlipParams {
  double m = 32.0;
  double H = 0.8;
  double g = 9.81;
  double T = 0.4;  ///< s, nominal step duration

  double ell() const;
  void validate() const;  ///< throws InvalidConfig
};

/// m from the model's total mass, H from the CoM height of the standing pose.
AlipParams params_for(const rigid_body::RobotModel& model, double step_time);

AlipState alip_derivative(const AlipState& s, const AlipParams& params);

/// Closed-form solution of the ALIP ODE after time t >= 0.
AlipState alip_flow(const AlipState& s0, double t, const AlipParams& params);

/// L^2/(2 m^2 H^2) - g p^2/(2H); constant along alip_flow.
double orbital_energy(const AlipState& s, const AlipParams& params);

/// One-step dead-beat placement. Predicts L at the end of the current step
/// (remaining time T - t_step), then picks the next stance position p' so
/// that the following step ends with L = m H v_des:
///   p' = (L_des - cosh(lT) L_end) / (m H l sinh(lT)).
/// Returns the swing landing x relative to the base, i.e. -p', clamped to
/// [-bound, bound].
double alip_planner_step(const AlipState& current, double t_step, double v_des,
                         const AlipParams& params, double bound = 0.6);

/// What the planner would place without clamping, as p' (CoM minus the new
/// contact).
double deadbeat_stance_position(double L_end, double v_des,
                                const AlipParams& params);

/// End-of-step L/(mH) of the period-one ALIP gait whose mean CoM velocity
/// over a step of length T is v_avg: v_avg (lT/2) coth(lT/2).
double periodic_end_velocity(double v_avg, const AlipParams& params);

/// One gait step of a closed-loop log.
struct StepSample {
  AlipState start;  ///< reduced state just after the touchdown opening the step
  double actual_L = 0.0;  ///< full-order L^y about the stance contact at the next touchdown
  double duration = 0.0;  ///< s, realized step time; 0 predicts over params.T
};

struct PredictionRow {
  int step_index = 0;
  double predicted = 0.0;  ///< m/s, L/(mH)
  double actual = 0.0;     ///< m/s
};

/// Compares alip_flow(start, duration or T) with the measured momentum for every step.
/// Throws EmptyLog.
std::vector<PredictionRow> prediction_error_study(
    const std::vector<StepSample>& log, const AlipParams& params);

double mean_abs_error(const std::vector<PredictionRow>& rows);

}  // namespace hlloco::alip
