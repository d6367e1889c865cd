#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hlloco/eval/episode.hpp"

namespace hlloco::eval {

/// Robot, controller and gains of one Fig. 2 condition.
struct Fig2Setup {
  std::string robot;
  tracking::ControllerKind controller;
  std::string gains;
};

/// ideal: thin-link Rabbit with high-gain FL. Non-ideal: Rabbit with ID-QP.
Fig2Setup fig2_setup(bool ideal);

struct Fig2Result {
  std::vector<alip::PredictionRow> rows;
  double mean_abs_error = 0.0;
  env::FallCause fall = env::FallCause::kNone;
};

/// Walks with the ALIP baseline at speed v, skips `skip` touchdowns, then
/// compares for `steps` consecutive steps the closed-form prediction from
/// the post-impact CoM state (over the previous step's duration, the horizon
/// known at step start) with the momentum just before the next impact.
Fig2Result fig2_study(const Fig2Setup& setup, std::uint64_t seed,
                      int steps = 20, double v = 0.3, int skip = 5);

void write_fig2_csv(std::ostream& out, const Fig2Result& result,
                    const TableMeta& meta);

struct PerturbCell {
  double force = 0.0;     ///< N
  double duration = 0.0;  ///< s
  int trials = 0;
  int survived = 0;
  int recovered = 0;  ///< survived and back within tolerance in time
};

struct PerturbConfig {
  double v = 0.5;
  double t_push = 3.0;       ///< s, pulse start
  double recovery = 2.0;     ///< s after the pulse ends
  double tolerance = 0.15;   ///< m/s
  int trials = 10;
  std::uint64_t seed = 1;
};

/// Torso pushes during steady walking. Recovery means the mean v_bar over
/// the last 0.5 s of the recovery window is within tolerance of v. Cells run
/// in parallel, each trial seeded from (seed, cell, trial).
std::vector<PerturbCell> perturb_grid(const env::EnvConfig& config,
                                      const rigid_body::RobotModel& model,
                                      const PlannerFactory& planner,
                                      const std::vector<double>& forces,
                                      const std::vector<double>& durations,
                                      const PerturbConfig& pc);

void write_perturb_csv(std::ostream& out, const std::vector<PerturbCell>& cells,
                       const TableMeta& meta);

struct SlopeCell {
  double v = 0.0;
  double alpha = 0.0;  ///< rad
  double error = 0.0;  ///< steady-state |mean v_bar - v|
  double rmse = 0.0;
  bool fell = false;
};

/// Constant-speed episodes on each (v, alpha) pair, 300 HL steps each.
std::vector<SlopeCell> slope_grid(const env::EnvConfig& config,
                                  const rigid_body::RobotModel& model,
                                  const PlannerFactory& planner,
                                  const std::vector<double>& speeds,
                                  const std::vector<double>& alphas,
                                  std::uint64_t seed, double settle = 2.0);

void write_slope_csv(std::ostream& out, const std::vector<SlopeCell>& cells,
                     const TableMeta& meta);

}  // namespace hlloco::eval
