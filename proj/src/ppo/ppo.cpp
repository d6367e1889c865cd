#include "hlloco/ppo/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hlloco/common/errors.hpp"

namespace hlloco::ppo {

void PPOConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidConfig("gamma must be in (0, 1)");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidConfig("lambda must be in [0, 1]");
  if (!(clip > 0.0 && clip <= 0.5)) throw InvalidConfig("clip must be in (0, 0.5]");
  if (!(lr > 0.0) || !(sigma > 0.0)) throw InvalidConfig("lr and sigma must be positive");
  if (epochs < 1 || minibatch < 1 || workers < 1 || steps_per_iteration < workers) {
    throw InvalidConfig("epochs, minibatch, workers and steps must be positive");
  }
  if (hidden.empty()) throw InvalidConfig("at least one hidden layer");
}

RolloutBatch RolloutBatch::concat(const std::vector<RolloutBatch>& parts) {
  RolloutBatch b;
  Eigen::Index n = 0;
  for (const auto& p : parts) n += p.size();
  if (parts.empty()) return b;
  b.obs.resize(parts[0].obs.rows(), n);
  b.actions.resize(parts[0].actions.rows(), n);
  b.log_probs.resize(n);
  b.rewards.resize(n);
  b.values.resize(n);
  b.advantages.resize(n);
  b.returns.resize(n);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    const Eigen::Index k = p.size();
    b.obs.middleCols(at, k) = p.obs;
    b.actions.middleCols(at, k) = p.actions;
    b.log_probs.segment(at, k) = p.log_probs;
    b.rewards.segment(at, k) = p.rewards;
    b.values.segment(at, k) = p.values;
    b.advantages.segment(at, k) = p.advantages;
    b.returns.segment(at, k) = p.returns;
    b.dones.insert(b.dones.end(), p.dones.begin(), p.dones.end());
    at += k;
  }
  return b;
}

std::pair<VectorXd, VectorXd> gae(const VectorXd& rewards,
                                  const VectorXd& values,
                                  const std::vector<std::uint8_t>& dones,
                                  double gamma, double lambda) {
  const Eigen::Index n = rewards.size();
  VectorXd adv(n);
  double next = 0.0;
  for (Eigen::Index t = n - 1; t >= 0; --t) {
    const double live = dones[t] ? 0.0 : 1.0;
    const double delta = rewards[t] + gamma * values[t + 1] * live - values[t];
    next = delta + gamma * lambda * live * next;
    adv[t] = next;
  }
  return {adv, adv + values.head(n)};
}

void normalize_advantages(RolloutBatch& batch) {
  const Eigen::Index n = batch.size();
  if (n == 0) return;
  const double mean = batch.advantages.mean();
  const double var = (batch.advantages.array() - mean).square().sum() / n;
  batch.advantages = (batch.advantages.array() - mean) / (std::sqrt(var) + 1e-8);
}

LossInfo ppo_loss(const Policy& policy, const RolloutBatch& batch,
                  const std::vector<int>& idx, const PPOConfig& config) {
  const int B = static_cast<int>(idx.size());
  const int A = policy.act_dim();
  MatrixXd obs(policy.obs_dim(), B);
  MatrixXd act(A, B);
  for (int i = 0; i < B; ++i) {
    obs.col(i) = batch.obs.col(idx[i]);
    act.col(i) = batch.actions.col(idx[i]);
  }

  LossInfo out;
  Mlp::Cache ca, cc;
  const MatrixXd mu = policy.mean(obs, &ca);
  const MatrixXd v = policy.value(obs, &cc);
  const double s2 = policy.sigma * policy.sigma;
  MatrixXd d_z = MatrixXd::Zero(A, B);
  MatrixXd d_v(1, B);
  for (int i = 0; i < B; ++i) {
    const int k = idx[i];
    const double lp = log_prob(act.col(i), mu.col(i), policy.sigma);
    const double ratio = std::exp(lp - batch.log_probs[k]);
    const double adv = batch.advantages[k];
    const double clipped =
        std::clamp(ratio, 1.0 - config.clip, 1.0 + config.clip);
    out.policy_loss -= std::min(ratio * adv, clipped * adv);
    out.kl += (ratio - 1.0) - std::log(ratio);
    const bool active = (adv >= 0.0 && ratio > 1.0 + config.clip) ||
                        (adv < 0.0 && ratio < 1.0 - config.clip);
    if (std::abs(ratio - 1.0) > config.clip) out.clip_fraction += 1.0;
    if (!active) {
      // d(-r A)/dmu = -A r (a - mu) / sigma^2; dmu/dz = (1 - mu^2) / 2.
      const double g = -adv * ratio / B;
      for (int j = 0; j < A; ++j) {
        const double m = mu(j, i);
        d_z(j, i) = g * (act(j, i) - m) / s2 * 0.5 * (1.0 - m * m);
      }
    }
    const double err = v(0, i) - batch.returns[k];
    out.value_loss += 0.5 * err * err;
    d_v(0, i) = config.value_coef * err / B;
  }
  out.policy_loss /= B;
  out.value_loss /= B;
  out.kl /= B;
  out.clip_fraction /= B;
  out.actor_grad = VectorXd::Zero(policy.actor.num_params());
  out.critic_grad = VectorXd::Zero(policy.critic.num_params());
  policy.actor.backward(ca, d_z, out.actor_grad);
  policy.critic.backward(cc, d_v, out.critic_grad);
  return out;
}

namespace {

void clip_norm(VectorXd& g, double max_norm) {
  const double n = g.norm();
  if (max_norm > 0.0 && n > max_norm) g *= max_norm / n;
}

}  // namespace

UpdateStats ppo_update(Policy& policy, Adam& actor_opt, Adam& critic_opt,
                       const RolloutBatch& batch, const PPOConfig& config,
                       std::mt19937_64& rng) {
  UpdateStats stats;
  const int n = static_cast<int>(batch.size());
  if (n == 0) return stats;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  int count = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (int start = 0; start < n; start += config.minibatch) {
      const int end = std::min(n, start + config.minibatch);
      const std::vector<int> idx(order.begin() + start, order.begin() + end);
      LossInfo l = ppo_loss(policy, batch, idx, config);
      if (!std::isfinite(l.policy_loss) || !std::isfinite(l.value_loss) ||
          !l.actor_grad.allFinite() || !l.critic_grad.allFinite()) {
        throw NonFiniteLoss("non-finite PPO loss or gradient");
      }
      clip_norm(l.actor_grad, config.max_grad_norm);
      clip_norm(l.critic_grad, config.max_grad_norm);
      actor_opt.step(policy.actor.params(), l.actor_grad);
      critic_opt.step(policy.critic.params(), l.critic_grad);
      stats.policy_loss += l.policy_loss;
      stats.value_loss += l.value_loss;
      stats.kl += l.kl;
      stats.clip_fraction += l.clip_fraction;
      ++count;
    }
  }
  stats.policy_loss /= count;
  stats.value_loss /= count;
  stats.kl /= count;
  stats.clip_fraction /= count;
  return stats;
}

}  // namespace hlloco::ppo
