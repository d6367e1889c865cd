#include "hlloco/eval/studies.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "hlloco/rigid_body/robot_model.hpp"

namespace hlloco::eval {
namespace {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a * 0x9e3779b97f4a7c15ull + b + 0x632be59bd9b4e019ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

Fig2Setup fig2_setup(bool ideal) {
  if (ideal) return {"rabbit_ideal", tracking::ControllerKind::kFL, "high_gain"};
  return {"rabbit", tracking::ControllerKind::kIDQP, "nominal"};
}

Fig2Result fig2_study(const Fig2Setup& setup, std::uint64_t seed, int steps,
                      double v, int skip) {
  env::EnvConfig config;
  config.robot = setup.robot;
  config.controller = setup.controller;
  config.gains = setup.gains;
  env::LocomotionEnv env(config, rigid_body::load_robot(setup.robot));
  env::EpisodeConfig episode;
  episode.v_profile = env::VelocityProfile::constant(v);
  episode.seed = seed;
  const double step_time = config.gait.step_time;
  episode.max_hl_steps = static_cast<int>(
      std::ceil((skip + steps + 2) * step_time / (config.ll_per_hl * config.ll_dt)));
  AlipBaseline planner(env.alip_params());
  const EpisodeLog log = run_episode(env, episode, planner);

  Fig2Result out;
  out.fall = log.fall;
  std::vector<alip::StepSample> samples;
  for (std::size_t k = skip; k + 1 < log.touchdowns.size(); ++k) {
    if (static_cast<int>(samples.size()) == steps) break;
    const auto& td = log.touchdowns[k];
    samples.push_back({td.after_com, log.touchdowns[k + 1].before.L,
                       td.step_duration});
  }
  if (samples.empty()) return out;
  out.rows = alip::prediction_error_study(samples, env.alip_params());
  out.mean_abs_error = alip::mean_abs_error(out.rows);
  return out;
}

void write_fig2_csv(std::ostream& out, const Fig2Result& result,
                    const TableMeta& meta) {
  write_meta(out, meta);
  out << "step_index,predicted,actual\n";
  char line[128];
  for (const auto& r : result.rows) {
    std::snprintf(line, sizeof line, "%d,%.6f,%.6f\n", r.step_index,
                  r.predicted, r.actual);
    out << line;
  }
}

std::vector<PerturbCell> perturb_grid(const env::EnvConfig& config,
                                      const rigid_body::RobotModel& model,
                                      const PlannerFactory& planner,
                                      const std::vector<double>& forces,
                                      const std::vector<double>& durations,
                                      const PerturbConfig& pc) {
  std::vector<PerturbCell> cells;
  for (double d : durations) {
    for (double f : forces) cells.push_back({f, d, pc.trials, 0, 0});
  }
  const double hl_dt = config.ll_per_hl * config.ll_dt;
  const int n = static_cast<int>(cells.size());

#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < n; ++c) {
    PerturbCell& cell = cells[c];
    env::LocomotionEnv env(config, model);
    auto p = planner();
    const double t_end = pc.t_push + cell.duration + pc.recovery;
    for (int trial = 0; trial < pc.trials; ++trial) {
      env::EpisodeConfig episode;
      episode.v_profile = env::VelocityProfile::constant(pc.v);
      episode.seed = mix_seed(mix_seed(pc.seed, c), trial);
      episode.max_hl_steps = static_cast<int>(std::ceil(t_end / hl_dt));
      if (cell.force != 0.0) {
        episode.disturbances.push_back({pc.t_push, cell.duration, cell.force});
      }
      const EpisodeLog log = run_episode(env, episode, *p);
      if (log.fell()) continue;
      ++cell.survived;
      double sum = 0.0;
      int k = 0;
      for (const auto& s : log.steps) {
        if (s.t >= t_end - 0.5) {
          sum += s.v_bar;
          ++k;
        }
      }
      if (k > 0 && std::abs(sum / k - pc.v) <= pc.tolerance) ++cell.recovered;
    }
  }
  return cells;
}

void write_perturb_csv(std::ostream& out, const std::vector<PerturbCell>& cells,
                       const TableMeta& meta) {
  write_meta(out, meta);
  out << "force,duration,trials,survived,recovered\n";
  char line[128];
  for (const auto& c : cells) {
    std::snprintf(line, sizeof line, "%.3f,%.3f,%d,%d,%d\n", c.force,
                  c.duration, c.trials, c.survived, c.recovered);
    out << line;
  }
}

std::vector<SlopeCell> slope_grid(const env::EnvConfig& config,
                                  const rigid_body::RobotModel& model,
                                  const PlannerFactory& planner,
                                  const std::vector<double>& speeds,
                                  const std::vector<double>& alphas,
                                  std::uint64_t seed, double settle) {
  std::vector<SlopeCell> cells;
  for (double a : alphas) {
    for (double v : speeds) cells.push_back({v, a});
  }
  const int n = static_cast<int>(cells.size());

#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < n; ++c) {
    SlopeCell& cell = cells[c];
    env::LocomotionEnv env(config, model);
    auto p = planner();
    env::EpisodeConfig episode;
    episode.v_profile = env::VelocityProfile::constant(cell.v);
    episode.alpha = cell.alpha;
    episode.seed = mix_seed(seed, c);
    episode.max_hl_steps = config.max_hl_steps;
    const EpisodeLog log = run_episode(env, episode, *p);
    cell.fell = log.fell();
    const auto seg = segment_errors(log, episode.v_profile, settle);
    cell.error = seg.empty() ? std::abs(cell.v) : seg.front().error;
    cell.rmse = tracking_rmse(log, settle);
  }
  return cells;
}

void write_slope_csv(std::ostream& out, const std::vector<SlopeCell>& cells,
                     const TableMeta& meta) {
  write_meta(out, meta);
  out << "v_x_d,alpha_deg,error,rmse,fell\n";
  char line[128];
  for (const auto& c : cells) {
    std::snprintf(line, sizeof line, "%.3f,%.2f,%.6f,%.6f,%d\n", c.v,
                  c.alpha * 180.0 / M_PI, c.error, c.rmse, c.fell ? 1 : 0);
    out << line;
  }
}

}  // namespace hlloco::eval
