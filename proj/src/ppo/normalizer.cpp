#include "hlloco/ppo/normalizer.hpp"

namespace hlloco::ppo {

Normalizer::Normalizer(int dim)
    : mean_(Eigen::VectorXd::Zero(dim)), m2_(Eigen::VectorXd::Zero(dim)) {}

void Normalizer::update(const Eigen::VectorXd& x) {
  count_ += 1.0;
  const Eigen::VectorXd d = x - mean_;
  mean_ += d / count_;
  m2_ += d.cwiseProduct(x - mean_);
}

void Normalizer::merge(const Normalizer& other) {
  if (other.count_ == 0.0) return;
  if (count_ == 0.0) {
    *this = other;
    return;
  }
  const double n = count_ + other.count_;
  const Eigen::VectorXd d = other.mean_ - mean_;
  mean_ += d * (other.count_ / n);
  m2_ += other.m2_ + d.cwiseAbs2() * (count_ * other.count_ / n);
  count_ = n;
}

Eigen::VectorXd Normalizer::var() const {
  if (count_ == 0.0) return Eigen::VectorXd::Ones(mean_.size());
  return (m2_ / count_).cwiseMax(kEps);
}

Eigen::VectorXd Normalizer::normalize(const Eigen::VectorXd& x) const {
  if (count_ == 0.0) return x;
  const Eigen::VectorXd z =
      (x - mean_).cwiseQuotient((var().array() + kEps).sqrt().matrix());
  return z.cwiseMax(-kClip).cwiseMin(kClip);
}

Normalizer Normalizer::from_state(double count, Eigen::VectorXd mean,
                                  Eigen::VectorXd m2) {
  Normalizer n;
  n.count_ = count;
  n.mean_ = std::move(mean);
  n.m2_ = std::move(m2);
  return n;
}

}  // namespace hlloco::ppo
