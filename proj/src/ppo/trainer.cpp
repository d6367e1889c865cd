#include "hlloco/ppo/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace hlloco::ppo {

Worker::Worker(const env::EnvConfig& config,
               const rigid_body::RobotModel& model, std::uint64_t seed)
    : env_(config, model), rng_(seed) {
  start_episode();
}

void Worker::start_episode() {
  obs_ = env_.reset(env::sample_training_episode(env_.config(), rng_));
  episode_return_ = 0.0;
  episode_length_ = 0;
}

Worker::Output Worker::collect(const Policy& policy,
                               const Normalizer& normalizer, int steps,
                               double gamma, double lambda) {
  Output out;
  out.obs_stats = Normalizer(env::kObsDim);
  RolloutBatch& b = out.batch;
  b.obs.resize(env::kObsDim, steps);
  b.actions.resize(env::kActDim, steps);
  b.log_probs.resize(steps);
  b.rewards.resize(steps);
  b.values.resize(steps);
  b.dones.assign(steps, 0);
  b.advantages.resize(steps);
  b.returns.resize(steps);

  int seg_start = 0;
  auto close_segment = [&](int end, double bootstrap) {
    const int n = end - seg_start;
    VectorXd v(n + 1);
    v.head(n) = b.values.segment(seg_start, n);
    v[n] = bootstrap;
    const std::vector<std::uint8_t> d(b.dones.begin() + seg_start,
                                      b.dones.begin() + end);
    auto [adv, ret] =
        gae(b.rewards.segment(seg_start, n), v, d, gamma, lambda);
    b.advantages.segment(seg_start, n) = adv;
    b.returns.segment(seg_start, n) = ret;
    seg_start = end;
  };
  auto value_of = [&](const env::Observation& o) {
    return policy.value(normalizer.normalize(o))(0, 0);
  };

  for (int t = 0; t < steps; ++t) {
    out.obs_stats.update(obs_);
    const VectorXd x = normalizer.normalize(obs_);
    const VectorXd mu = policy.mean(x);
    const ActionSample a = sample_action(mu, policy.sigma, rng_);
    b.obs.col(t) = x;
    b.actions.col(t) = a.raw;
    b.log_probs[t] = a.log_prob;
    b.values[t] = policy.value(x)(0, 0);

    const env::StepResult r =
        env_.hl_step_normalized(env::NormalizedAction(a.action));
    b.rewards[t] = r.reward;
    b.dones[t] = r.terminated ? 1 : 0;
    episode_return_ += r.reward;
    ++episode_length_;
    obs_ = r.obs;

    if (r.terminated || r.truncated) {
      close_segment(t + 1, r.terminated ? 0.0 : value_of(r.obs));
      out.episode_returns.push_back(episode_return_);
      out.episode_lengths.push_back(episode_length_);
      start_episode();
    }
  }
  if (seg_start < steps) close_segment(steps, value_of(obs_));
  return out;
}

std::vector<Worker::Output> collect_all(std::vector<Worker>& workers,
                                        const Policy& policy,
                                        const Normalizer& normalizer,
                                        int steps_per_worker, double gamma,
                                        double lambda, Execution exec) {
  const int n = static_cast<int>(workers.size());
  std::vector<Worker::Output> out(n);
  if (exec == Execution::kParallel) {
#pragma omp parallel for schedule(static)
    for (int w = 0; w < n; ++w) {
      out[w] = workers[w].collect(policy, normalizer, steps_per_worker, gamma,
                                  lambda);
    }
  } else {
    for (int w = 0; w < n; ++w) {
      out[w] = workers[w].collect(policy, normalizer, steps_per_worker, gamma,
                                  lambda);
    }
  }
  return out;
}

Trainer::Trainer(const env::EnvConfig& env_config,
                 const rigid_body::RobotModel& model, const PPOConfig& config,
                 Execution exec)
    : env_config_(env_config),
      config_(config),
      exec_(exec),
      normalizer_(env::kObsDim),
      rng_(config.seed) {
  config_.validate();
  policy_ = Policy::create(env::kObsDim, env::kActDim, config_.hidden,
                           config_.sigma, rng_);
  actor_opt_ = Adam(policy_.actor.num_params(), config_.lr);
  critic_opt_ = Adam(policy_.critic.num_params(), config_.lr);
  std::seed_seq seq{config_.seed, std::uint64_t{0x776f726b}};
  std::vector<std::uint64_t> seeds(config_.workers);
  seq.generate(seeds.begin(), seeds.end());
  workers_.reserve(config_.workers);
  for (int w = 0; w < config_.workers; ++w) {
    workers_.emplace_back(env_config_, model, seeds[w]);
  }
}

CurvePoint Trainer::iterate() {
  const int per_worker = config_.steps_per_iteration / config_.workers;
  auto outputs = collect_all(workers_, policy_, normalizer_, per_worker,
                             config_.gamma, config_.lambda, exec_);

  std::vector<RolloutBatch> parts;
  CurvePoint p;
  double ret = 0.0, len = 0.0;
  int episodes = 0;
  for (auto& o : outputs) {
    parts.push_back(std::move(o.batch));
    normalizer_.merge(o.obs_stats);
    for (std::size_t i = 0; i < o.episode_returns.size(); ++i) {
      ret += o.episode_returns[i];
      len += o.episode_lengths[i];
      ++episodes;
    }
  }
  RolloutBatch batch = RolloutBatch::concat(parts);
  normalize_advantages(batch);
  const UpdateStats u =
      ppo_update(policy_, actor_opt_, critic_opt_, batch, config_, rng_);

  ++iteration_;
  env_steps_ += batch.size();
  p.iteration = iteration_;
  p.env_steps = env_steps_;
  p.mean_reward = episodes ? ret / episodes : std::nan("");
  p.mean_length = episodes ? len / episodes : std::nan("");
  p.policy_loss = u.policy_loss;
  p.value_loss = u.value_loss;
  p.kl = u.kl;
  p.clip_fraction = u.clip_fraction;
  return p;
}

void write_curve_header(std::ostream& out) {
  out << "iteration,env_steps,mean_reward,mean_episode_length,policy_loss,"
         "value_loss,kl\n";
}

void write_curve_row(std::ostream& out, const CurvePoint& p) {
  char line[256];
  std::snprintf(line, sizeof line, "%d,%ld,%.6f,%.3f,%.6g,%.6g,%.6g\n",
                p.iteration, p.env_steps, p.mean_reward, p.mean_length,
                p.policy_loss, p.value_loss, p.kl);
  out << line;
}

ReturnStats random_policy_returns(const env::EnvConfig& env_config,
                                  const rigid_body::RobotModel& model,
                                  int episodes, std::uint64_t seed) {
  env::LocomotionEnv env(env_config, model);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> returns;
  for (int e = 0; e < episodes; ++e) {
    env.reset(env::sample_training_episode(env_config, rng));
    double total = 0.0;
    while (!env.done()) {
      env::NormalizedAction a;
      for (int i = 0; i < env::kActDim; ++i) a[i] = u(rng);
      total += env.hl_step_normalized(a).reward;
    }
    returns.push_back(total);
  }
  ReturnStats s;
  s.episodes = episodes;
  for (double r : returns) s.mean += r;
  s.mean /= episodes;
  for (double r : returns) s.stddev += (r - s.mean) * (r - s.mean);
  s.stddev = std::sqrt(s.stddev / std::max(1, episodes - 1));
  return s;
}

}  // namespace hlloco::ppo
