#include "hlloco/eval/episode.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace hlloco::eval {

EpisodeLog run_episode(env::LocomotionEnv& env,
                       const env::EpisodeConfig& episode, Planner& planner) {
  EpisodeLog log;
  env.reset(episode);
  planner.reset(env);
  while (!env.done()) {
    const env::StepResult r = env.hl_step(planner.act(env));
    planner.observe(r);
    log.steps.push_back(r.diag);
    log.touchdowns.insert(log.touchdowns.end(), r.touchdowns.begin(),
                          r.touchdowns.end());
    log.total_reward += r.reward;
    log.fall = r.diag.fall;
  }
  return log;
}

std::vector<SegmentError> segment_errors(const EpisodeLog& log,
                                         const env::VelocityProfile& profile,
                                         double settle) {
  std::vector<SegmentError> out;
  const auto& seg = profile.segments;
  const double t_last = log.steps.empty() ? 0.0 : log.steps.back().t;
  for (std::size_t i = 0; i < seg.size(); ++i) {
    SegmentError e;
    e.t_start = seg[i].first;
    e.t_end = i + 1 < seg.size() ? seg[i + 1].first : t_last + 1e-9;
    e.v_des = seg[i].second;
    double sum = 0.0;
    for (const auto& d : log.steps) {
      if (d.t >= e.t_start + settle && d.t < e.t_end) {
        sum += d.v_bar;
        ++e.samples;
      }
    }
    if (e.samples == 0) continue;
    e.v_mean = sum / e.samples;
    e.error = std::abs(e.v_mean - e.v_des);
    out.push_back(e);
  }
  return out;
}

double tracking_rmse(const EpisodeLog& log, double settle) {
  double sum = 0.0;
  int n = 0;
  for (const auto& d : log.steps) {
    if (d.t < settle) continue;
    sum += (d.v_bar - d.v_des) * (d.v_bar - d.v_des);
    ++n;
  }
  return n ? std::sqrt(sum / n) : 0.0;
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_meta(std::ostream& out, const TableMeta& meta) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(meta.config_hash));
  out << "# hlloco " << HLLOCO_VERSION << " command=" << meta.command
      << " config=" << hash << " seed=" << meta.seed << '\n';
}

void write_episode_csv(std::ostream& out, const EpisodeLog& log,
                       const TableMeta& meta) {
  write_meta(out, meta);
  out << "t,v_x_d,v_bar,r_vx,r_vy,r_lcom,r_a,p_sw_x,q_phi,h_d,pitch,h,L_y,"
         "L_com,terminated\n";
  char line[512];
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    const auto& d = log.steps[i];
    const bool last = i + 1 == log.steps.size();
    std::snprintf(line, sizeof line,
                  "%.3f,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,"
                  "%.6g,%.6g,%.6g,%d\n",
                  d.t, d.v_des, d.v_bar, d.terms.r_vx, d.terms.r_vy,
                  d.terms.r_lcom, d.terms.r_a, d.action.p_sw_x, d.action.q_phi,
                  d.action.h_d, d.pitch, d.height, d.L_contact, d.L_com,
                  last && log.fell() ? 1 : 0);
    out << line;
  }
}

}  // namespace hlloco::eval
