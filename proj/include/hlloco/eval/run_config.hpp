#pragma once

#include <cstdint>
#include <string>

#include "hlloco/env/types.hpp"
#include "hlloco/ppo/ppo.hpp"

namespace hlloco::eval {

/// Everything a train or eval run depends on. JSON keys:
///   robot, controller, gains, torque_weight, reward_weights[4],
///   curriculum {v_min, v_max, resample_period, alpha_min_deg, alpha_max_deg,
///               disturbances, force_max},
///   ppo {clip, lr, gamma, lambda, epochs, minibatch, workers,
///        steps_per_iteration, sigma, value_coef, max_grad_norm, hidden[]},
///   seed, iterations, checkpoint_every.
/// Every key is optional; unknown keys are rejected.
struct RunConfig {
  env::EnvConfig env;
  ppo::PPOConfig ppo;
  std::uint64_t seed = 1;
  int iterations = 1800;
  int checkpoint_every = 50;

  /// Canonical JSON (sorted keys, all fields), the input of the config hash.
  std::string to_json() const;
  std::uint64_t hash() const;
  void validate() const;  ///< throws InvalidConfig
};

/// Parses JSON text on top of the defaults. Throws InvalidConfig.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

}  // namespace hlloco::eval
