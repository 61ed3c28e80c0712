// wasn/scene.hpp
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

#ifndef WASN_SCENE_HPP
#define WASN_SCENE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wasn/common.hpp"

namespace wasn::sim {

inline constexpr double kSpeedOfSound = 343.0;  // m/s

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

inline double dist(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct GeometryConfig {
  int num_nodes = 4;
  int mics_per_node = 4;
  double min_dist = 0.5;                         // m, wall/source/node separation
  std::array<double, 3> room_min = {4.0, 4.0, 2.5};
  std::array<double, 3> room_max = {8.0, 8.0, 3.5};
  double rt60_min = 0.15, rt60_max = 0.40;
  double sir_min_db = 0.0, sir_max_db = 6.0;
  double node_circle_diameter = 0.10;            // intra-node mic circle, m
  int sample_rate = 16000;
  int max_retries = 2000;
};

struct SceneSpec {
  std::array<double, 3> room_dims = {0, 0, 0};
  double rt60 = 0.0;
  std::vector<Vec3> node_centers;                // [K]
  std::vector<std::vector<Vec3>> node_mics;      // [K][M_k]
  Vec3 target_pos, noise_pos;
  double sir_db = 0.0;
  std::uint64_t seed = 0;
  int sample_rate = 16000;

  int num_nodes() const { return static_cast<int>(node_centers.size()); }
  int mics_at(int k) const { return static_cast<int>(node_mics[k].size()); }
  int total_mics() const;

  void validate(const GeometryConfig& cfg) const;  // all distance invariants
  std::string to_json() const;
  static SceneSpec from_json(const std::string& text);
};

// Rejection sampling of a scene layout; pure function of the seed.
SceneSpec sample_scene(std::uint64_t seed, const GeometryConfig& cfg);

// Image-source room impulse response with uniform Sabine absorption.
std::vector<double> simulate_rir(const SceneSpec& spec, const Vec3& src,
                                 const Vec3& mic, int max_order);

// Uniform absorption coefficient from Sabine's formula, clamped to (0, 1).
double sabine_absorption(const std::array<double, 3>& room_dims, double rt60);

enum class SourceKind { kSpeechShapedNoise, kWhite, kBabbleSurrogate };

// Deterministic synthetic sources. speech_shaped is white noise through a
// fixed FIR approximating the long-term speech spectrum (see sources.cpp for
// the curve); babble is a sum of independently modulated speech-shaped
// streams.
std::vector<double> synth_source(SourceKind kind, double duration_s,
                                 std::uint64_t seed, int sample_rate = 16000);

// Target-speech surrogate: speech-shaped noise with 4 Hz amplitude
// modulation, giving speech-like TF sparsity.
std::vector<double> synth_speech_surrogate(double duration_s, std::uint64_t seed,
                                           int sample_rate = 16000);

struct SceneSignals {
  int sample_rate = 16000;
  // [K][M_k][samples]
  std::vector<std::vector<std::vector<double>>> speech_images;
  std::vector<std::vector<std::vector<double>>> noise_images;
  std::vector<std::vector<std::vector<double>>> mixtures;  // speech + noise, exact
  std::vector<double> dry_speech;  // target source signal
  std::vector<double> dry_noise;   // noise source signal after SIR scaling

  std::size_t num_samples() const { return dry_speech.size(); }
};

// Renders component images per microphone; the noise source is pre-scaled so
// the dry-signal SIR equals spec.sir_db exactly.
SceneSignals render_scene(const SceneSpec& spec, const std::vector<double>& dry_speech,
                          const std::vector<double>& dry_noise, int max_order = 10);

}  // namespace wasn::sim

#endif  // WASN_SCENE_HPP
