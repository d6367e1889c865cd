#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hlloco/eval/planner.hpp"

namespace hlloco::eval {

struct EpisodeLog {
  std::vector<env::Diagnostics> steps;
  std::vector<env::Touchdown> touchdowns;
  double total_reward = 0.0;
  env::FallCause fall = env::FallCause::kNone;

  bool fell() const { return fall != env::FallCause::kNone; }
};

EpisodeLog run_episode(env::LocomotionEnv& env,
                       const env::EpisodeConfig& episode, Planner& planner);

using PlannerFactory = std::function<std::unique_ptr<Planner>()>;

struct SegmentError {
  double t_start = 0.0;
  double t_end = 0.0;
  double v_des = 0.0;
  double v_mean = 0.0;  ///< mean of v_bar over the steady window
  double error = 0.0;   ///< |v_mean - v_des|
  int samples = 0;
};

/// Steady-state error per command segment, skipping the first `settle`
/// seconds after each switch. Segments with no samples are dropped.
std::vector<SegmentError> segment_errors(const EpisodeLog& log,
                                         const env::VelocityProfile& profile,
                                         double settle = 1.5);

/// Root mean square of v_bar - v_des over HL steps with t >= settle.
double tracking_rmse(const EpisodeLog& log, double settle = 1.0);

/// Stable 64-bit FNV-1a, used to tag tables with the config that made them.
std::uint64_t fnv1a64(std::string_view text);

struct TableMeta {
  std::string command;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

/// "# hlloco <version> command=<c> config=<hex> seed=<n>"
void write_meta(std::ostream& out, const TableMeta& meta);

/// One row per HL step: t, v_x_d, v_bar, reward terms, action, pitch, h,
/// L_y, L_com, terminated.
void write_episode_csv(std::ostream& out, const EpisodeLog& log,
                       const TableMeta& meta);

}  // namespace hlloco::eval
