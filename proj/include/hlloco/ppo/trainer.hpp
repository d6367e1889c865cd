#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "hlloco/env/locomotion_env.hpp"
#include "hlloco/ppo/normalizer.hpp"
#include "hlloco/ppo/ppo.hpp"

namespace hlloco::ppo {

/// Experience collector owning one environment. Episodes continue across
/// iterations; a fresh curriculum episode starts whenever one ends.
class Worker {
 public:
  Worker(const env::EnvConfig& config, const rigid_body::RobotModel& model,
         std::uint64_t seed);

  struct Output {
    RolloutBatch batch;  ///< advantages/returns filled by GAE
    Normalizer obs_stats;  ///< raw observations seen this call
    std::vector<double> episode_returns;
    std::vector<int> episode_lengths;
  };

  /// Runs `steps` transitions with the frozen policy and normalizer.
  Output collect(const Policy& policy, const Normalizer& normalizer, int steps,
                 double gamma, double lambda);

 private:
  void start_episode();

  env::LocomotionEnv env_;
  std::mt19937_64 rng_;
  env::Observation obs_;
  double episode_return_ = 0.0;
  int episode_length_ = 0;
};

struct CurvePoint {
  int iteration = 0;
  long env_steps = 0;
  double mean_reward = 0.0;  ///< mean return of episodes finished this iteration
  double mean_length = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double kl = 0.0;
  double clip_fraction = 0.0;
};

enum class Execution { kSerial, kParallel };

/// Collects one batch from all workers. Each worker's output depends only on
/// its own state, so the serial and OpenMP paths give identical batches.
/// Normalizer deltas are merged in worker order.
std::vector<Worker::Output> collect_all(std::vector<Worker>& workers,
                                        const Policy& policy,
                                        const Normalizer& normalizer,
                                        int steps_per_worker, double gamma,
                                        double lambda, Execution exec);

class Trainer {
 public:
  Trainer(const env::EnvConfig& env_config, const rigid_body::RobotModel& model,
          const PPOConfig& config, Execution exec = Execution::kParallel);

  /// One collect + update round.
  CurvePoint iterate();

  const Policy& policy() const { return policy_; }
  const Normalizer& normalizer() const { return normalizer_; }
  const PPOConfig& config() const { return config_; }
  int iteration() const { return iteration_; }
  long env_steps() const { return env_steps_; }

 private:
  env::EnvConfig env_config_;
  PPOConfig config_;
  Execution exec_;
  Policy policy_;
  Normalizer normalizer_;
  Adam actor_opt_;
  Adam critic_opt_;
  std::vector<Worker> workers_;
  std::mt19937_64 rng_;
  int iteration_ = 0;
  long env_steps_ = 0;
};

void write_curve_header(std::ostream& out);
void write_curve_row(std::ostream& out, const CurvePoint& p);

/// Mean and std of the episodic return of the uniform random policy over
/// curriculum episodes.
struct ReturnStats {
  double mean = 0.0;
  double stddev = 0.0;
  int episodes = 0;
};
ReturnStats random_policy_returns(const env::EnvConfig& env_config,
                                  const rigid_body::RobotModel& model,
                                  int episodes, std::uint64_t seed);

}  // namespace hlloco::ppo
