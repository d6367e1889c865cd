// hlloco: training, evaluation, baselines and robustness sweeps.
//
// Exit codes: 0 ok, 2 configuration or usage error, 3 numerical failure.
// Tables go to --out (a file, or a directory for commands writing several
// files), else to $HLLOCO_LOG_DIR, else to stdout.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hlloco/common/errors.hpp"
#include "hlloco/eval/episode.hpp"
#include "hlloco/eval/run_config.hpp"
#include "hlloco/eval/studies.hpp"
#include "hlloco/ppo/checkpoint.hpp"
#include "hlloco/ppo/trainer.hpp"
#include "hlloco/rigid_body/robot_model.hpp"

namespace fs = std::filesystem;
using namespace hlloco;

namespace {

constexpr double kDeg = M_PI / 180.0;

struct Common {
  std::string config;
  std::string robot;
  std::string controller;
  std::string gains;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
};

eval::RunConfig resolve(const Common& c) {
  eval::RunConfig r = c.config.empty() ? eval::RunConfig{}
                                       : eval::load_run_config(c.config);
  if (!c.robot.empty()) r.env.robot = c.robot;
  if (!c.controller.empty()) {
    r.env.controller = tracking::controller_from_name(c.controller);
  }
  if (!c.gains.empty()) {
    tracking::GainSet::from_name(c.gains, 1);
    r.env.gains = c.gains;
  }
  if (c.seed_set) r.seed = c.seed;
  r.ppo.seed = r.seed;
  r.validate();
  return r;
}

/// "0.3" or "t0:v0,t1:v1,..." with times in seconds.
env::VelocityProfile parse_profile(const std::string& text) {
  env::VelocityProfile p;
  p.segments.clear();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    try {
      if (colon == std::string::npos) {
        p.segments.emplace_back(0.0, std::stod(item));
      } else {
        p.segments.emplace_back(std::stod(item.substr(0, colon)),
                                std::stod(item.substr(colon + 1)));
      }
    } catch (const std::exception&) {
      throw InvalidConfig("bad velocity profile entry '" + item + "'");
    }
  }
  if (p.segments.empty() || p.segments.front().first != 0.0) {
    throw InvalidConfig("velocity profile must start at t = 0");
  }
  for (std::size_t i = 1; i < p.segments.size(); ++i) {
    if (p.segments[i].first <= p.segments[i - 1].first) {
      throw InvalidConfig("velocity profile times must increase");
    }
  }
  return p;
}

std::string describe(const env::VelocityProfile& p) {
  std::ostringstream s;
  for (const auto& [t, v] : p.segments) s << t << ':' << v << ';';
  return s.str();
}

/// Output stream for one table: `name` inside --out when it is a directory
/// (or inside $HLLOCO_LOG_DIR), --out itself when it names a file, stdout
/// otherwise.
class Sink {
 public:
  Sink(const std::string& out, const std::string& name) {
    fs::path path;
    if (!out.empty()) {
      path = fs::is_directory(out) || out.back() == '/' ? fs::path(out) / name
                                                         : fs::path(out);
    } else if (const char* dir = std::getenv("HLLOCO_LOG_DIR")) {
      path = fs::path(dir) / name;
    }
    if (!path.empty()) {
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      file_.open(path);
      if (!file_) throw InvalidConfig("cannot write '" + path.string() + "'");
      path_ = path.string();
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  const std::string& path() const { return path_; }

 private:
  std::ofstream file_;
  std::string path_;
};

fs::path out_dir(const std::string& out) {
  if (!out.empty()) return out;
  if (const char* dir = std::getenv("HLLOCO_LOG_DIR")) return dir;
  return ".";
}

void add_common(CLI::App* app, Common& c, bool with_robot = true) {
  app->add_option("--config", c.config, "run config JSON");
  if (with_robot) {
    app->add_option("--robot", c.robot, "rabbit | rabbit_ideal | walker2d | path");
    app->add_option("--controller", c.controller, "fl | idqp");
    app->add_option("--gains", c.gains, "nominal | high_gain");
  }
  app->add_option_function<std::uint64_t>(
      "--seed",
      [&c](const std::uint64_t& s) {
        c.seed = s;
        c.seed_set = true;
      },
      "random seed");
  app->add_option("--out", c.out, "output file or directory");
}

int episode_steps(const env::EnvConfig& e, double duration) {
  return static_cast<int>(std::ceil(duration / (e.ll_per_hl * e.ll_dt) - 1e-9));
}

void print_summary(const eval::EpisodeLog& log,
                   const env::VelocityProfile& profile) {
  std::cerr << "rmse " << eval::tracking_rmse(log) << " m/s, falls "
            << (log.fell() ? 1 : 0);
  if (log.fell()) {
    std::cerr << " (" << env::to_string(log.fall) << " at t = "
              << log.steps.back().t << " s)";
  }
  std::cerr << '\n';
  for (const auto& s : eval::segment_errors(log, profile)) {
    std::cerr << "  segment t = " << s.t_start << " v_x_d = " << s.v_des
              << ": mean v_bar " << s.v_mean << ", error " << s.error << '\n';
  }
}

int cmd_train(const Common& c, int iters, bool serial, int every) {
  eval::RunConfig r = resolve(c);
  if (iters >= 0) r.iterations = iters;
  if (every > 0) r.checkpoint_every = every;
  const auto model = rigid_body::load_robot(r.env.robot);
  const fs::path dir = out_dir(c.out);
  fs::create_directories(dir);
  std::cerr << "robot " << model.name << ": " << model.dof() << " dof, "
            << model.output_dim() << " task outputs, obs " << env::kObsDim
            << ", action " << env::kActDim << '\n';

  ppo::Trainer trainer(r.env, model, r.ppo,
                       serial ? ppo::Execution::kSerial
                              : ppo::Execution::kParallel);
  std::ofstream curve(dir / "curve.csv");
  eval::write_meta(curve, {"train", r.hash(), r.seed});
  ppo::write_curve_header(curve);
  const auto save = [&] {
    ppo::save_checkpoint((dir / "policy.ckpt").string(),
                         {model.name, trainer.policy(), trainer.normalizer()});
  };
  try {
    for (int i = 0; i < r.iterations; ++i) {
      const auto p = trainer.iterate();
      ppo::write_curve_row(curve, p);
      curve.flush();
      if (p.iteration % r.checkpoint_every == 0) save();
      std::cerr << "iter " << p.iteration << " steps " << p.env_steps
                << " reward " << p.mean_reward << " len " << p.mean_length
                << " kl " << p.kl << '\n';
    }
  } catch (const NonFiniteLoss&) {
    save();
    throw;
  }
  save();
  std::cerr << "wrote " << (dir / "policy.ckpt").string() << " and "
            << (dir / "curve.csv").string() << '\n';
  return 0;
}

struct EpisodeArgs {
  std::string profile = "0:0,3:0.5,6:1.0,9:-0.5";
  double duration = 12.0;
  double alpha_deg = 0.0;
  std::string log = "full";
};

int write_episode(const Common& c, const eval::RunConfig& r,
                  eval::Planner& planner, const EpisodeArgs& a,
                  const std::string& command) {
  const auto model = rigid_body::load_robot(r.env.robot);
  env::LocomotionEnv env(r.env, model);
  env::EpisodeConfig ep;
  ep.v_profile = parse_profile(a.profile);
  ep.alpha = a.alpha_deg * kDeg;
  ep.seed = r.seed;
  ep.max_hl_steps = episode_steps(r.env, a.duration);
  const auto log = eval::run_episode(env, ep, planner);
  Sink sink(c.out, command + ".csv");
  const eval::TableMeta meta{
      command, eval::fnv1a64(r.to_json() + "|" + describe(ep.v_profile) + "|" +
                             std::to_string(a.alpha_deg)),
      r.seed};
  if (a.log == "actions") {
    eval::write_meta(sink.stream(), meta);
    sink.stream() << "t,p_sw_x,q_phi,h_d\n";
    for (const auto& d : log.steps) {
      sink.stream() << d.t << ',' << d.action.p_sw_x << ',' << d.action.q_phi
                    << ',' << d.action.h_d << '\n';
    }
  } else {
    eval::write_episode_csv(sink.stream(), log, meta);
  }
  print_summary(log, ep.v_profile);
  return 0;
}

std::vector<double> parse_list(const std::string& text, double scale = 1.0) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item) * scale);
    } catch (const std::exception&) {
      throw InvalidConfig("bad number '" + item + "'");
    }
  }
  if (out.empty()) throw InvalidConfig("empty list");
  return out;
}

eval::PlannerFactory policy_factory(const ppo::Checkpoint& ckpt) {
  return [ckpt] { return std::make_unique<eval::PolicyPlanner>(ckpt); };
}

ppo::Checkpoint load_policy(const std::string& path, const eval::RunConfig& r) {
  auto ckpt = ppo::load_checkpoint(path);
  if (ckpt.policy.obs_dim() != env::kObsDim ||
      ckpt.policy.act_dim() != env::kActDim) {
    throw InvalidConfig("checkpoint dimensions do not match the environment");
  }
  if (ckpt.robot != rigid_body::load_robot(r.env.robot).name) {
    std::cerr << "note: checkpoint trained on " << ckpt.robot
              << ", evaluating on " << r.env.robot << '\n';
  }
  return ckpt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical ALIP-inspired planar biped locomotion"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(HLLOCO_VERSION));

  Common common;
  int iters = -1;
  int every = 0;
  bool serial = false;
  auto* train = app.add_subcommand("train", "train an HL policy with PPO");
  add_common(train, common);
  train->add_option("--iters", iters, "PPO iterations (overrides config)");
  train->add_option("--checkpoint-every", every, "iterations between saves");
  train->add_flag("--serial", serial, "collect rollouts without OpenMP");

  std::string checkpoint;
  EpisodeArgs ep;
  auto* evalc = app.add_subcommand("eval", "evaluate a trained policy");
  add_common(evalc, common);
  evalc->add_option("--checkpoint", checkpoint, "policy file")->required();
  evalc->add_option("--profile", ep.profile, "v or t:v,t:v,... (m/s)");
  evalc->add_option("--duration", ep.duration, "episode length (s)");
  evalc->add_option("--alpha", ep.alpha_deg, "terrain slope (deg)");
  evalc->add_option("--log", ep.log, "full | actions")
      ->check(CLI::IsMember({"full", "actions"}));

  EpisodeArgs base;
  base.profile = "0.3";
  base.duration = 10.0;
  auto* alipc = app.add_subcommand("alip-baseline", "ALIP footstep planner episode");
  add_common(alipc, common);
  alipc->add_option("--profile", base.profile, "v or t:v,t:v,... (m/s)");
  alipc->add_option("--duration", base.duration, "episode length (s)");
  alipc->add_option("--alpha", base.alpha_deg, "terrain slope (deg)");

  std::string variant = "ideal";
  int steps = 20;
  double fig2_v = 0.3;
  auto* fig2 = app.add_subcommand("fig2", "ALIP prediction error study");
  add_common(fig2, common, false);
  fig2->add_option("--variant", variant, "ideal | nonideal | self")
      ->check(CLI::IsMember({"ideal", "nonideal", "self"}));
  fig2->add_option("--steps", steps, "steps compared");
  fig2->add_option("--v", fig2_v, "walking speed (m/s)");

  std::string forces = "-40,-20,0,20,40";
  std::string durations = "0.15";
  int trials = 10;
  double push_v = 0.5;
  auto* perturb = app.add_subcommand("perturb", "torso push survival grid");
  add_common(perturb, common);
  perturb->add_option("--checkpoint", checkpoint, "policy file")->required();
  perturb->add_option("--forces", forces, "comma-separated N");
  perturb->add_option("--durations", durations, "comma-separated s");
  perturb->add_option("--trials", trials, "trials per cell");
  perturb->add_option("--v", push_v, "walking speed (m/s)");

  std::string speeds = "-0.5,0,0.5,1.0";
  std::string alphas = "-5,0,5,10";
  auto* slope = app.add_subcommand("slope-grid", "tracking error over speed x slope");
  add_common(slope, common);
  slope->add_option("--checkpoint", checkpoint, "policy file")->required();
  slope->add_option("--speeds", speeds, "comma-separated m/s");
  slope->add_option("--alphas", alphas, "comma-separated deg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*train) return cmd_train(common, iters, serial, every);

    if (*evalc) {
      const auto r = resolve(common);
      eval::PolicyPlanner planner(load_policy(checkpoint, r));
      return write_episode(common, r, planner, ep, "eval");
    }

    if (*alipc) {
      const auto r = resolve(common);
      env::LocomotionEnv probe(r.env, rigid_body::load_robot(r.env.robot));
      eval::AlipBaseline planner(probe.alip_params());
      return write_episode(common, r, planner, base, "alip-baseline");
    }

    if (*fig2) {
      const auto r = resolve(common);
      eval::Fig2Result res;
      if (variant == "self") {
        // The reduced model predicting its own closed-loop rollout.
        const auto prm = alip::params_for(rigid_body::load_robot("rabbit"),
                                          r.env.gait.step_time);
        std::vector<alip::StepSample> log;
        alip::AlipState s{-0.1, 0.0};
        for (int k = 0; k < steps; ++k) {
          const auto end = alip::alip_flow(s, prm.T, prm);
          log.push_back({s, end.L});
          s = {-alip::alip_planner_step(s, 0.0, fig2_v, prm), end.L};
        }
        res.rows = alip::prediction_error_study(log, prm);
        res.mean_abs_error = alip::mean_abs_error(res.rows);
      } else {
        res = eval::fig2_study(eval::fig2_setup(variant == "ideal"), r.seed,
                               steps, fig2_v);
      }
      Sink sink(common.out, "fig2_" + variant + ".csv");
      eval::write_fig2_csv(
          sink.stream(), res,
          {"fig2", eval::fnv1a64(variant + "|" + std::to_string(steps) + "|" +
                                 std::to_string(fig2_v)),
           r.seed});
      std::cerr << variant << ": mean |predicted - actual| = "
                << res.mean_abs_error << " m/s over " << res.rows.size()
                << " steps";
      if (res.fall != env::FallCause::kNone) {
        std::cerr << " (fell: " << env::to_string(res.fall) << ")";
      }
      std::cerr << '\n';
      return res.rows.empty() ? 3 : 0;
    }

    if (*perturb) {
      const auto r = resolve(common);
      const auto ckpt = load_policy(checkpoint, r);
      eval::PerturbConfig pc;
      pc.v = push_v;
      pc.trials = trials;
      pc.seed = r.seed;
      const auto f = parse_list(forces);
      const auto d = parse_list(durations);
      for (double x : f) {
        if (std::abs(x) > 80.0) throw InvalidConfig("|force| must be <= 80 N");
      }
      const auto cells = eval::perturb_grid(
          r.env, rigid_body::load_robot(r.env.robot), policy_factory(ckpt), f,
          d, pc);
      Sink sink(common.out, "perturb.csv");
      eval::write_perturb_csv(
          sink.stream(), cells,
          {"perturb", eval::fnv1a64(r.to_json() + "|" + forces + "|" +
                                    durations + "|" + std::to_string(trials)),
           r.seed});
      return 0;
    }

    if (*slope) {
      const auto r = resolve(common);
      const auto ckpt = load_policy(checkpoint, r);
      const auto cells = eval::slope_grid(
          r.env, rigid_body::load_robot(r.env.robot), policy_factory(ckpt),
          parse_list(speeds), parse_list(alphas, kDeg), r.seed);
      Sink sink(common.out, "slope_grid.csv");
      eval::write_slope_csv(
          sink.stream(), cells,
          {"slope-grid", eval::fnv1a64(r.to_json() + "|" + speeds + "|" + alphas),
           r.seed});
      return 0;
    }
  } catch (const InvalidConfig& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
