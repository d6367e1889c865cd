#include "hlloco/env/reward.hpp"

#include <algorithm>
#include <cmath>

namespace hlloco::env {

const char* to_string(FallCause cause) {
  switch (cause) {
    case FallCause::kNone: return "none";
    case FallCause::kPitch: return "pitch";
    case FallCause::kHeight: return "height";
    case FallCause::kStepTimeout: return "step_timeout";
    case FallCause::kNumerical: return "numerical";
  }
  return "unknown";
}

double VelocityProfile::at(double t) const {
  double v = segments.empty() ? 0.0 : segments.front().second;
  for (const auto& [start, value] : segments) {
    if (start <= t) v = value;
  }
  return v;
}

VelocityProfile VelocityProfile::constant(double v) {
  VelocityProfile p;
  p.segments = {{0.0, v}};
  return p;
}

RewardTerms reward_terms(double v_bar, double v_des, double L_com,
                         const NormalizedAction& prev_action,
                         const NormalizedAction& action) {
  RewardTerms r;
  const double ev = v_bar - v_des;
  r.r_vx = std::exp(-ev * ev);
  r.r_vy = 1.0;
  r.r_lcom = std::exp(-L_com * L_com);
  r.r_a = std::exp(-(action - prev_action).squaredNorm());
  return r;
}

double reward(const RewardTerms& t, const RewardWeights& weights) {
  return weights.w[0] * t.r_vx + weights.w[1] * t.r_vy +
         weights.w[2] * t.r_lcom + weights.w[3] * t.r_a;
}

VelocityTracker::VelocityTracker(double window, double dt)
    : window_ticks_(std::max(1, static_cast<int>(std::lround(window / dt)))),
      ring_(window_ticks_, 0.0) {}

void VelocityTracker::reset() {
  std::fill(ring_.begin(), ring_.end(), 0.0);
  ring_pos_ = ring_count_ = 0;
  step_sum_ = 0.0;
  step_ticks_ = 0;
  last_step_mean_ = 0.0;
  has_step_ = false;
}

void VelocityTracker::add(double vx) {
  ring_[ring_pos_] = vx;
  ring_pos_ = (ring_pos_ + 1) % window_ticks_;
  ring_count_ = std::min(ring_count_ + 1, window_ticks_);
  step_sum_ += vx;
  ++step_ticks_;
}

void VelocityTracker::touchdown() {
  if (step_ticks_ > 0) {
    last_step_mean_ = step_sum_ / step_ticks_;
    has_step_ = true;
  }
  step_sum_ = 0.0;
  step_ticks_ = 0;
}

double VelocityTracker::average() const {
  if (has_step_) return last_step_mean_;
  if (ring_count_ == 0) return 0.0;
  double sum = 0.0;
  for (int i = 0; i < ring_count_; ++i) sum += ring_[i];
  return sum / ring_count_;
}

double average_velocity(const std::vector<double>& vx,
                        const std::vector<int>& touchdown_after,
                        int window_ticks) {
  if (touchdown_after.empty()) {
    const int n = static_cast<int>(vx.size());
    const int from = std::max(0, n - window_ticks);
    if (n == from) return 0.0;
    double sum = 0.0;
    for (int i = from; i < n; ++i) sum += vx[i];
    return sum / (n - from);
  }
  const int end = touchdown_after.back();
  const int begin =
      touchdown_after.size() > 1 ? touchdown_after[touchdown_after.size() - 2] + 1 : 0;
  double sum = 0.0;
  for (int i = begin; i <= end; ++i) sum += vx[i];
  return sum / (end - begin + 1);
}

}  // namespace hlloco::env
