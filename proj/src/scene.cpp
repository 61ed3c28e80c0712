// scene.cpp
//
// Copyright 2026  The wasn-enhance Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "wasn/scene.hpp"

#include <cmath>

#include <json.hpp>

#include "wasn/rng.hpp"

namespace wasn::sim {

namespace {

bool inside_with_margin(const Vec3& p, const std::array<double, 3>& room,
                        double margin) {
  return p.x >= margin && p.x <= room[0] - margin && p.y >= margin &&
         p.y <= room[1] - margin && p.z >= margin && p.z <= room[2] - margin;
}

bool strictly_inside(const Vec3& p, const std::array<double, 3>& room) {
  return p.x > 0 && p.x < room[0] && p.y > 0 && p.y < room[1] && p.z > 0 &&
         p.z < room[2];
}

Vec3 sample_point(Rng& rng, const std::array<double, 3>& room, double margin) {
  return {rng.uniform(margin, room[0] - margin),
          rng.uniform(margin, room[1] - margin),
          rng.uniform(margin, room[2] - margin)};
}

}  // namespace

int SceneSpec::total_mics() const {
  int n = 0;
  for (const auto& m : node_mics) n += static_cast<int>(m.size());
  return n;
}

void SceneSpec::validate(const GeometryConfig& cfg) const {
  const double d = cfg.min_dist;
  if (node_centers.size() != node_mics.size())
    throw GeometryError("node_centers/node_mics size mismatch");
  std::vector<std::pair<const Vec3*, const char*>> points;
  points.push_back({&target_pos, "target"});
  points.push_back({&noise_pos, "noise"});
  for (const auto& c : node_centers) points.push_back({&c, "node"});
  for (const auto& [p, name] : points)
    if (!inside_with_margin(*p, room_dims, d))
      throw GeometryError(std::string(name) + " closer than min_dist to a wall");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (dist(*points[i].first, *points[j].first) < d)
        throw GeometryError("two scene entities closer than min_dist");
  for (const auto& mics : node_mics)
    for (const auto& m : mics)
      if (!strictly_inside(m, room_dims))
        throw GeometryError("microphone outside the room");
  if (sir_db < cfg.sir_min_db - 1e-9 || sir_db > cfg.sir_max_db + 1e-9)
    throw GeometryError("sir_db outside configured range");
  if (rt60 < cfg.rt60_min - 1e-9 || rt60 > cfg.rt60_max + 1e-9)
    throw GeometryError("rt60 outside configured range");
}

SceneSpec sample_scene(std::uint64_t seed, const GeometryConfig& cfg) {
  Rng rng(mix_seed(seed, 0x5ce9eULL));

  SceneSpec spec;
  spec.seed = seed;
  spec.sample_rate = cfg.sample_rate;
  for (int a = 0; a < 3; ++a)
    spec.room_dims[a] = rng.uniform(cfg.room_min[a], cfg.room_max[a]);

  // Feasibility of the wall margin alone.
  for (int a = 0; a < 3; ++a)
    if (spec.room_dims[a] <= 2.0 * cfg.min_dist)
      throw GenerationError("room dimension too small for min_dist margin");

  spec.rt60 = rng.uniform(cfg.rt60_min, cfg.rt60_max);
  spec.sir_db = rng.uniform(cfg.sir_min_db, cfg.sir_max_db);

  const int n_points = cfg.num_nodes + 2;  // target, noise, node centers
  std::vector<Vec3> pts(n_points);
  bool ok = false;
  for (int attempt = 0; attempt < cfg.max_retries && !ok; ++attempt) {
    for (int i = 0; i < n_points; ++i)
      pts[i] = sample_point(rng, spec.room_dims, cfg.min_dist);
    ok = true;
    for (int i = 0; i < n_points && ok; ++i)
      for (int j = i + 1; j < n_points && ok; ++j)
        if (dist(pts[i], pts[j]) < cfg.min_dist) ok = false;
  }
  if (!ok)
    throw GenerationError("scene constraints unsatisfiable after " +
                          std::to_string(cfg.max_retries) + " retries");

  spec.target_pos = pts[0];
  spec.noise_pos = pts[1];
  spec.node_centers.assign(pts.begin() + 2, pts.end());

  // Mics on a horizontal circle around the node center, random orientation.
  const double r = cfg.node_circle_diameter / 2.0;
  spec.node_mics.resize(cfg.num_nodes);
  for (int k = 0; k < cfg.num_nodes; ++k) {
    const double phase = rng.uniform(0.0, 2.0 * M_PI);
    spec.node_mics[k].resize(cfg.mics_per_node);
    for (int m = 0; m < cfg.mics_per_node; ++m) {
      const double ang = phase + 2.0 * M_PI * m / cfg.mics_per_node;
      spec.node_mics[k][m] = {spec.node_centers[k].x + r * std::cos(ang),
                              spec.node_centers[k].y + r * std::sin(ang),
                              spec.node_centers[k].z};
    }
  }

  spec.validate(cfg);
  return spec;
}

namespace {
nlohmann::json vec_json(const Vec3& v) { return {v.x, v.y, v.z}; }
Vec3 vec_from(const nlohmann::json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}
}  // namespace

std::string SceneSpec::to_json() const {
  nlohmann::json j;
  j["room_dims"] = {room_dims[0], room_dims[1], room_dims[2]};
  j["rt60"] = rt60;
  nlohmann::json nodes = nlohmann::json::array();
  for (int k = 0; k < num_nodes(); ++k) {
    nlohmann::json nj;
    nj["center"] = vec_json(node_centers[k]);
    nlohmann::json mics = nlohmann::json::array();
    for (const auto& m : node_mics[k]) mics.push_back(vec_json(m));
    nj["mics"] = mics;
    nodes.push_back(nj);
  }
  j["nodes"] = nodes;
  j["sources"] = nlohmann::json::array(
      {{{"role", "target"}, {"position", vec_json(target_pos)}},
       {{"role", "noise"}, {"position", vec_json(noise_pos)}}});
  j["sir_db"] = sir_db;
  j["seed"] = seed;
  j["sample_rate"] = sample_rate;
  return j.dump(2) + "\n";
}

SceneSpec SceneSpec::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SceneSpec spec;
  for (int a = 0; a < 3; ++a) spec.room_dims[a] = j.at("room_dims").at(a).get<double>();
  spec.rt60 = j.at("rt60").get<double>();
  for (const auto& nj : j.at("nodes")) {
    spec.node_centers.push_back(vec_from(nj.at("center")));
    std::vector<Vec3> mics;
    for (const auto& mj : nj.at("mics")) mics.push_back(vec_from(mj));
    spec.node_mics.push_back(std::move(mics));
  }
  for (const auto& sj : j.at("sources")) {
    const std::string role = sj.at("role").get<std::string>();
    if (role == "target") spec.target_pos = vec_from(sj.at("position"));
    else if (role == "noise") spec.noise_pos = vec_from(sj.at("position"));
    else throw ConfigError("unknown source role " + role);
  }
  spec.sir_db = j.at("sir_db").get<double>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  spec.sample_rate = j.at("sample_rate").get<int>();
  return spec;
}

}  // namespace wasn::sim
