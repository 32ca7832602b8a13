#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "guidekit/cspace.hpp"
#include "guidekit/geometry.hpp"

namespace guidekit {

/// A named world: robot, bounds, obstacles and the start-goal task, plus the
/// optional generator tag for randomized families.
struct EnvironmentSpec {
  std::string name;
  RectRobot robot;
  Aabb bounds;
  std::vector<Polygon> obstacles;
  Pose start;
  Pose goal;
  CSpaceOptions options;

  std::string family;     // non-empty for randomized families
  uint64_t env_seed = 0;  // instance seed within the family
};

inline nlohmann::json environment_to_json(const EnvironmentSpec& spec) {
  nlohmann::json j;
  j["bounds"] = {spec.bounds.min.x, spec.bounds.min.y, spec.bounds.max.x, spec.bounds.max.y};
  j["robot"] = {{"half_length", spec.robot.half_length}, {"half_width", spec.robot.half_width}};
  nlohmann::json obs = nlohmann::json::array();
  for (const Polygon& p : spec.obstacles) {
    nlohmann::json poly = nlohmann::json::array();
    for (const Vec2& v : p.vertices()) poly.push_back({v.x, v.y});
    obs.push_back(std::move(poly));
  }
  j["obstacles"] = std::move(obs);
  j["start"] = {spec.start.x, spec.start.y, spec.start.theta};
  j["goal"] = {spec.goal.x, spec.goal.y, spec.goal.theta};
  if (!spec.name.empty()) j["name"] = spec.name;
  if (!spec.family.empty()) {
    j["family"] = spec.family;
    j["env_seed"] = spec.env_seed;
  }
  if (spec.options.theta_weight >= 0.0) j["theta_weight"] = spec.options.theta_weight;
  if (spec.options.edge_resolution > 0.0) j["edge_resolution"] = spec.options.edge_resolution;
  if (spec.options.goal_horizon > 0.0) j["goal_horizon"] = spec.options.goal_horizon;
  return j;
}

inline EnvironmentSpec environment_from_json(const nlohmann::json& j) {
  EnvironmentSpec spec;
  const auto& b = j.at("bounds");
  if (!b.is_array() || b.size() != 4)
    throw std::invalid_argument("environment: bounds must be [xmin, ymin, xmax, ymax]");
  spec.bounds = Aabb{{b[0].get<double>(), b[1].get<double>()},
                     {b[2].get<double>(), b[3].get<double>()}};
  spec.robot = RectRobot(j.at("robot").at("half_length").get<double>(),
                         j.at("robot").at("half_width").get<double>());
  for (const auto& poly : j.at("obstacles")) {
    std::vector<Vec2> verts;
    for (const auto& v : poly) verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    spec.obstacles.emplace_back(std::move(verts));
  }
  const auto& s = j.at("start");
  const auto& g = j.at("goal");
  spec.start = Pose(s.at(0).get<double>(), s.at(1).get<double>(), s.at(2).get<double>());
  spec.goal = Pose(g.at(0).get<double>(), g.at(1).get<double>(), g.at(2).get<double>());
  if (j.contains("name")) spec.name = j["name"].get<std::string>();
  if (j.contains("family")) spec.family = j["family"].get<std::string>();
  if (j.contains("env_seed")) spec.env_seed = j["env_seed"].get<uint64_t>();
  if (j.contains("theta_weight")) spec.options.theta_weight = j["theta_weight"].get<double>();
  if (j.contains("edge_resolution"))
    spec.options.edge_resolution = j["edge_resolution"].get<double>();
  if (j.contains("goal_horizon")) spec.options.goal_horizon = j["goal_horizon"].get<double>();
  return spec;
}

inline EnvironmentSpec load_environment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open environment file: " + path);
  nlohmann::json j;
  in >> j;
  return environment_from_json(j);
}

inline void save_environment(const EnvironmentSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write environment file: " + path);
  out << environment_to_json(spec).dump(2) << "\n";
}

inline CSpace make_cspace(const EnvironmentSpec& spec) {
  return CSpace(spec.robot, spec.obstacles, spec.bounds, spec.options);
}

inline Task make_task(const CSpace& cs, const EnvironmentSpec& spec) {
  return make_task(cs, spec.start, spec.goal);
}

/// FNV-1a of the canonical JSON encoding; used to key oracle cache files.
inline uint64_t environment_hash(const EnvironmentSpec& spec) {
  const std::string s = environment_to_json(spec).dump();
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace guidekit
