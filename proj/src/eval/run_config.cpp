#include "hlloco/eval/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hlloco/common/errors.hpp"
#include "hlloco/eval/episode.hpp"
#include "json.hpp"

namespace hlloco::eval {

using nlohmann::json;

namespace {

constexpr double kDeg = M_PI / 180.0;

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!j.is_object()) throw InvalidConfig(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) {
      throw InvalidConfig("unknown key '" + k + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

std::string RunConfig::to_json() const {
  json j;
  j["robot"] = env.robot;
  j["controller"] = tracking::to_string(env.controller);
  j["gains"] = env.gains;
  j["torque_weight"] = env.torque_weight;
  j["reward_weights"] = env.reward.w;
  const auto& c = env.curriculum;
  j["curriculum"] = {{"v_min", c.v_min},
                     {"v_max", c.v_max},
                     {"resample_period", c.resample_period},
                     {"alpha_min_deg", c.alpha_min / kDeg},
                     {"alpha_max_deg", c.alpha_max / kDeg},
                     {"disturbances", c.disturbances},
                     {"force_max", c.force_max}};
  j["ppo"] = {{"clip", ppo.clip},
              {"lr", ppo.lr},
              {"gamma", ppo.gamma},
              {"lambda", ppo.lambda},
              {"epochs", ppo.epochs},
              {"minibatch", ppo.minibatch},
              {"workers", ppo.workers},
              {"steps_per_iteration", ppo.steps_per_iteration},
              {"sigma", ppo.sigma},
              {"value_coef", ppo.value_coef},
              {"max_grad_norm", ppo.max_grad_norm},
              {"hidden", ppo.hidden}};
  j["seed"] = seed;
  j["iterations"] = iterations;
  j["checkpoint_every"] = checkpoint_every;
  return j.dump();
}

std::uint64_t RunConfig::hash() const { return fnv1a64(to_json()); }

void RunConfig::validate() const {
  ppo.validate();
  for (double w : env.reward.w) {
    if (!(w >= 0.0)) throw InvalidConfig("reward weights must be >= 0");
  }
  const auto& c = env.curriculum;
  if (c.v_min > c.v_max || c.alpha_min > c.alpha_max) {
    throw InvalidConfig("curriculum ranges must be ordered");
  }
  if (std::abs(c.alpha_min) > 0.35 || std::abs(c.alpha_max) > 0.35) {
    throw InvalidConfig("curriculum slopes must satisfy |alpha| <= 20 deg");
  }
  if (!(c.resample_period > 0.0)) throw InvalidConfig("resample_period must be > 0");
  if (c.force_max < 0.0 || c.force_max > 80.0) {
    throw InvalidConfig("force_max must be in [0, 80] N");
  }
  if (iterations < 0 || checkpoint_every < 1) {
    throw InvalidConfig("iterations >= 0 and checkpoint_every >= 1 required");
  }
}

RunConfig parse_run_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidConfig(std::string("run config is not valid JSON: ") + e.what());
  }
  check_keys(j,
             {"robot", "controller", "gains", "torque_weight",
              "reward_weights", "curriculum", "ppo", "seed", "iterations",
              "checkpoint_every"},
             "run config");
  RunConfig r;
  read(j, "robot", r.env.robot);
  if (j.contains("controller")) {
    r.env.controller =
        tracking::controller_from_name(j.at("controller").get<std::string>());
  }
  read(j, "gains", r.env.gains);
  tracking::GainSet::from_name(r.env.gains, 1);
  read(j, "torque_weight", r.env.torque_weight);
  read(j, "reward_weights", r.env.reward.w);
  if (j.contains("curriculum")) {
    const json& c = j.at("curriculum");
    check_keys(c,
               {"v_min", "v_max", "resample_period", "alpha_min_deg",
                "alpha_max_deg", "disturbances", "force_max"},
               "curriculum");
    auto& cur = r.env.curriculum;
    read(c, "v_min", cur.v_min);
    read(c, "v_max", cur.v_max);
    read(c, "resample_period", cur.resample_period);
    double a = cur.alpha_min / kDeg;
    read(c, "alpha_min_deg", a);
    cur.alpha_min = a * kDeg;
    a = cur.alpha_max / kDeg;
    read(c, "alpha_max_deg", a);
    cur.alpha_max = a * kDeg;
    read(c, "disturbances", cur.disturbances);
    read(c, "force_max", cur.force_max);
  }
  if (j.contains("ppo")) {
    const json& p = j.at("ppo");
    check_keys(p,
               {"clip", "lr", "gamma", "lambda", "epochs", "minibatch",
                "workers", "steps_per_iteration", "sigma", "value_coef",
                "max_grad_norm", "hidden"},
               "ppo");
    read(p, "clip", r.ppo.clip);
    read(p, "lr", r.ppo.lr);
    read(p, "gamma", r.ppo.gamma);
    read(p, "lambda", r.ppo.lambda);
    read(p, "epochs", r.ppo.epochs);
    read(p, "minibatch", r.ppo.minibatch);
    read(p, "workers", r.ppo.workers);
    read(p, "steps_per_iteration", r.ppo.steps_per_iteration);
    read(p, "sigma", r.ppo.sigma);
    read(p, "value_coef", r.ppo.value_coef);
    read(p, "max_grad_norm", r.ppo.max_grad_norm);
    read(p, "hidden", r.ppo.hidden);
  }
  read(j, "seed", r.seed);
  read(j, "iterations", r.iterations);
  read(j, "checkpoint_every", r.checkpoint_every);
  r.ppo.seed = r.seed;
  r.validate();
  return r;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open run config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace hlloco::eval
