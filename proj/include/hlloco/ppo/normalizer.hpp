#pragma once

#include <Eigen/Dense>

namespace hlloco::ppo {

/// Running per-dimension mean and variance (Welford updates, Chan merge).
class Normalizer {
 public:
  static constexpr double kEps = 1e-8;
  static constexpr double kClip = 5.0;

  Normalizer() = default;
  explicit Normalizer(int dim);

  void update(const Eigen::VectorXd& x);
  /// Combines statistics of disjoint sample sets.
  void merge(const Normalizer& other);

  /// (x - mean) / sqrt(var + eps), clipped to +-kClip. Identity while empty.
  Eigen::VectorXd normalize(const Eigen::VectorXd& x) const;

  int dim() const { return static_cast<int>(mean_.size()); }
  double count() const { return count_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  /// Population variance, floored at kEps.
  Eigen::VectorXd var() const;

  /// Raw state for serialization.
  const Eigen::VectorXd& m2() const { return m2_; }
  static Normalizer from_state(double count, Eigen::VectorXd mean,
                               Eigen::VectorXd m2);

 private:
  double count_ = 0.0;
  Eigen::VectorXd mean_;
  Eigen::VectorXd m2_;  ///< sum of squared deviations
};

}  // namespace hlloco::ppo
