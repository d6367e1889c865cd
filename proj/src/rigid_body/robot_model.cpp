#include "hlloco/rigid_body/robot_model.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hlloco/common/errors.hpp"
#include "hlloco/embedded_robots.hpp"
#include "json.hpp"

namespace hlloco::rigid_body {

namespace {

using nlohmann::json;

Vec2 read_vec2(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 2) {
    throw InvalidConfig(std::string("robot file: '") + key +
                        "' must be a 2-element array");
  }
  return {j.at(key)[0].get<double>(), j.at(key)[1].get<double>()};
}

int link_index(const RobotModel& model, const std::string& name) {
  for (int i = 0; i < model.num_links(); ++i) {
    if (model.links[i].name == name) return i;
  }
  throw InvalidConfig("robot file: unknown link '" + name + "'");
}

Variant parse_variant(const std::string& s) {
  if (s == "rabbit") return Variant::kRabbit;
  if (s == "walker2d") return Variant::kWalker2D;
  if (s == "rabbit_ideal") return Variant::kRabbitIdeal;
  throw InvalidConfig("robot file: unknown variant '" + s + "'");
}

}  // namespace

const char* to_string(Variant v) {
  switch (v) {
    case Variant::kRabbit:
      return "rabbit";
    case Variant::kWalker2D:
      return "walker2d";
    case Variant::kRabbitIdeal:
      return "rabbit_ideal";
  }
  return "?";
}

double RobotModel::total_mass() const {
  double m = 0.0;
  for (const auto& l : links) m += l.mass;
  return m;
}

void RobotModel::finalize() {
  if (links.empty() || links[0].parent != -1) {
    throw InvalidConfig("robot file: first link must be the torso (no parent)");
  }
  if (num_links() > kMaxLinks || dof() > kMaxDof) {
    throw InvalidConfig("robot file: too many links");
  }
  for (const auto& l : links) {
    if (!(l.mass > 0.0) || !(l.inertia > 0.0) || !(l.length > 0.0)) {
      throw InvalidConfig("robot file: link '" + l.name +
                          "' needs positive mass, inertia and length");
    }
  }
  coordinate.assign(links.size(), 2);
  chain.assign(links.size(), {});
  actuated_coordinates.clear();
  for (int i = 1; i < num_links(); ++i) {
    const auto& l = links[i];
    if (l.parent < 0 || l.parent >= i) {
      throw InvalidConfig("robot file: link '" + l.name +
                          "' must come after its parent");
    }
    coordinate[i] = 3 + (i - 1);
    if (l.actuated) {
      if (!(l.torque_limit > 0.0)) {
        throw InvalidConfig("robot file: joint '" + l.joint_name +
                            "' needs a positive torque limit");
      }
      actuated_coordinates.push_back(coordinate[i]);
    }
  }
  for (int i = 0; i < num_links(); ++i) {
    std::vector<int> c;
    for (int j = i; j >= 0; j = links[j].parent) c.push_back(j);
    chain[i].assign(c.rbegin(), c.rend());
  }
  const int m = num_actuators();
  if (m > kMaxActuators) {
    throw InvalidConfig("robot file: unsupported actuator count");
  }
  B = ActuationMatrix::Zero(dof(), m);
  torque_limits.resize(m);
  for (int k = 0; k < m; ++k) {
    const int c = actuated_coordinates[k];
    B(c, k) = 1.0;
    torque_limits[k] = links[c - 2].torque_limit;
  }
  for (const auto& leg : legs) {
    if (leg.foot.link < 0 || leg.hip_link < 0) {
      throw InvalidConfig("robot file: both legs must be defined");
    }
  }
  if (legs[0].foot.type != legs[1].foot.type) {
    throw InvalidConfig("robot file: legs must share the foot type");
  }
  if (!(nominal_base_height > 0.0) || !(gravity > 0.0)) {
    throw InvalidConfig("robot file: nominal_base_height and gravity must be > 0");
  }
}

RobotModel parse_robot_json(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("robot file: ") + e.what());
  }
  try {
    RobotModel model;
    model.name = j.at("name").get<std::string>();
    model.variant = parse_variant(j.at("variant").get<std::string>());
    model.gravity = j.value("gravity", 9.81);
    model.nominal_base_height = j.at("nominal_base_height").get<double>();
    model.stance_width = j.value("stance_width", 0.1);
    for (const auto& jl : j.at("links")) {
      LinkParams l;
      l.name = jl.at("name").get<std::string>();
      l.mass = jl.at("mass").get<double>();
      l.inertia = jl.at("inertia").get<double>();
      l.length = jl.at("length").get<double>();
      l.com = read_vec2(jl, "com");
      l.tip = read_vec2(jl, "tip");
      if (!jl.at("parent").is_null()) {
        l.parent = link_index(model, jl.at("parent").get<std::string>());
        const auto attach = jl.value("attach", std::string("origin"));
        if (attach != "origin" && attach != "tip") {
          throw InvalidConfig("robot file: attach must be 'origin' or 'tip'");
        }
        l.attach_at_tip = attach == "tip";
        const auto& jj = jl.at("joint");
        l.joint_name = jj.at("name").get<std::string>();
        l.actuated = jj.value("actuated", true);
        l.torque_limit = jj.value("torque_limit", 0.0);
      }
      model.links.push_back(std::move(l));
    }
    const auto& jlegs = j.at("legs");
    if (jlegs.size() != 2) throw InvalidConfig("robot file: need two legs");
    for (int s = 0; s < 2; ++s) {
      const auto& jleg = jlegs[s];
      Leg leg;
      leg.name = jleg.at("name").get<std::string>();
      leg.hip_link = link_index(model, jleg.at("hip").get<std::string>());
      leg.foot.link = link_index(model, jleg.at("foot_link").get<std::string>());
      const auto& jf = jleg.at("foot");
      const auto type = jf.at("type").get<std::string>();
      if (type == "point") {
        leg.foot.type = FootType::kPoint;
        leg.foot.point = read_vec2(jf, "point");
      } else if (type == "flat") {
        leg.foot.type = FootType::kFlat;
        leg.foot.toe = read_vec2(jf, "toe");
        leg.foot.heel = read_vec2(jf, "heel");
      } else {
        throw InvalidConfig("robot file: unknown foot type '" + type + "'");
      }
      model.legs[s] = std::move(leg);
    }
    model.finalize();
    return model;
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("robot file: ") + e.what());
  }
}

RobotModel load_robot(const std::string& name_or_path) {
  for (const auto& r : embedded::kRobots) {
    if (r.name == name_or_path) return parse_robot_json(r.json);
  }
  std::ifstream in(name_or_path);
  if (!in) {
    throw InvalidConfig("unknown robot '" + name_or_path +
                        "' (not an embedded variant or readable file)");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_robot_json(ss.str());
}

std::vector<std::string> embedded_robot_names() {
  std::vector<std::string> names;
  for (const auto& r : embedded::kRobots) names.emplace_back(r.name);
  return names;
}

}  // namespace hlloco::rigid_body
