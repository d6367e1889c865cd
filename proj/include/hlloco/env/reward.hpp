#pragma once

#include "hlloco/env/types.hpp"

namespace hlloco::env {

/// Terms of the weighted reward; actions are normalized to [-1, 1].
RewardTerms reward_terms(double v_bar, double v_des, double L_com,
                         const NormalizedAction& prev_action,
                         const NormalizedAction& action);

double reward(const RewardTerms& terms, const RewardWeights& weights);

/// Mean base velocity over the last completed step, or over a trailing window
/// before the first touchdown.
class VelocityTracker {
 public:
  explicit VelocityTracker(double window = 0.4, double dt = 1e-3);

  void reset();
  void add(double vx);
  void touchdown();
  double average() const;
  bool has_step() const { return has_step_; }

 private:
  int window_ticks_;
  std::vector<double> ring_;
  int ring_pos_ = 0;
  int ring_count_ = 0;
  double step_sum_ = 0.0;
  int step_ticks_ = 0;
  double last_step_mean_ = 0.0;
  bool has_step_ = false;
};

/// Offline version of VelocityTracker over a per-tick log: `touchdown_after`
/// lists tick indices after which a touchdown happened.
double average_velocity(const std::vector<double>& vx,
                        const std::vector<int>& touchdown_after,
                        int window_ticks);

}  // namespace hlloco::env
