#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "hlloco/ppo/network.hpp"

namespace hlloco::ppo {

struct PPOConfig {
  double clip = 0.2;
  double lr = 3e-4;
  double gamma = 0.99;
  double lambda = 0.95;
  int epochs = 4;
  int minibatch = 512;
  int workers = 8;
  int steps_per_iteration = 8192;
  double sigma = 0.15;  ///< fixed action std, normalized units
  double value_coef = 0.5;
  double max_grad_norm = 1.0;
  std::vector<int> hidden{128, 128};
  std::uint64_t seed = 1;

  void validate() const;  ///< throws InvalidConfig
};

/// Transitions as seen by the sampling policy: obs are already normalized,
/// actions are the unclipped draws.
struct RolloutBatch {
  MatrixXd obs;      ///< obs_dim x N
  MatrixXd actions;  ///< act_dim x N
  VectorXd log_probs;
  VectorXd rewards;
  VectorXd values;
  std::vector<std::uint8_t> dones;  ///< 1 at a terminal transition
  VectorXd advantages;
  VectorXd returns;

  Eigen::Index size() const { return rewards.size(); }
  /// Column-wise concatenation in argument order.
  static RolloutBatch concat(const std::vector<RolloutBatch>& parts);
};

/// values has one more entry than rewards (the bootstrap value after the
/// last transition).
///   delta_t = r_t + gamma V_{t+1} (1 - done_t) - V_t
///   A_t = delta_t + gamma lambda (1 - done_t) A_{t+1}
/// Returns (advantages, advantages + values).
std::pair<VectorXd, VectorXd> gae(const VectorXd& rewards,
                                  const VectorXd& values,
                                  const std::vector<std::uint8_t>& dones,
                                  double gamma, double lambda);

/// Shifts and scales advantages to zero mean and unit std.
void normalize_advantages(RolloutBatch& batch);

struct LossInfo {
  double policy_loss = 0.0;  ///< clipped surrogate, to minimize
  double value_loss = 0.0;   ///< 0.5 mean (V - R)^2
  double kl = 0.0;           ///< mean (r - 1) - log r
  double clip_fraction = 0.0;
  VectorXd actor_grad;
  VectorXd critic_grad;  ///< of value_coef * value_loss
};

/// Loss and gradients over the given columns of the batch.
LossInfo ppo_loss(const Policy& policy, const RolloutBatch& batch,
                  const std::vector<int>& idx, const PPOConfig& config);

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double kl = 0.0;
  double clip_fraction = 0.0;
};

/// `epochs` passes of shuffled minibatch Adam steps. Throws NonFiniteLoss
/// before touching the parameters of the offending minibatch.
UpdateStats ppo_update(Policy& policy, Adam& actor_opt, Adam& critic_opt,
                       const RolloutBatch& batch, const PPOConfig& config,
                       std::mt19937_64& rng);

}  // namespace hlloco::ppo
