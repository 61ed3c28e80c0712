// render.cpp
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

#include <cmath>

#include "wasn/fft.hpp"
#include "wasn/scene.hpp"

namespace wasn::sim {

namespace {
double energy(const std::vector<double>& x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}
}  // namespace

SceneSignals render_scene(const SceneSpec& spec, const std::vector<double>& dry_speech,
                          const std::vector<double>& dry_noise, int max_order) {
  if (dry_speech.size() != dry_noise.size())
    throw ShapeError("dry speech/noise length mismatch");
  if (dry_speech.empty()) throw LengthError("dry signals are empty");

  const double es = energy(dry_speech);
  const double en = energy(dry_noise);
  if (en <= 0.0 && es <= 0.0) throw LengthError("both dry signals are silent");

  // Pre-scale the noise so the dry-signal SIR is exactly spec.sir_db.
  double noise_gain = 0.0;
  if (en > 0.0 && es > 0.0)
    noise_gain = std::sqrt(es / (en * std::pow(10.0, spec.sir_db / 10.0)));

  SceneSignals out;
  out.sample_rate = spec.sample_rate;
  out.dry_speech = dry_speech;
  out.dry_noise.resize(dry_noise.size());
  for (std::size_t i = 0; i < dry_noise.size(); ++i)
    out.dry_noise[i] = noise_gain * dry_noise[i];

  const int K = spec.num_nodes();
  out.speech_images.resize(K);
  out.noise_images.resize(K);
  out.mixtures.resize(K);
  const std::size_t n = dry_speech.size();

  for (int k = 0; k < K; ++k) {
    const int M = spec.mics_at(k);
    out.speech_images[k].resize(M);
    out.noise_images[k].resize(M);
    out.mixtures[k].resize(M);
    for (int m = 0; m < M; ++m) {
      const Vec3& mic = spec.node_mics[k][m];
      std::vector<double> hs = simulate_rir(spec, spec.target_pos, mic, max_order);
      std::vector<double> hn = simulate_rir(spec, spec.noise_pos, mic, max_order);
      std::vector<double> s_img = dsp::fft_convolve(out.dry_speech, hs);
      std::vector<double> n_img = dsp::fft_convolve(out.dry_noise, hn);
      s_img.resize(n);
      n_img.resize(n);
      out.mixtures[k][m].resize(n);
      for (std::size_t i = 0; i < n; ++i)
        out.mixtures[k][m][i] = s_img[i] + n_img[i];
      out.speech_images[k][m] = std::move(s_img);
      out.noise_images[k][m] = std::move(n_img);
    }
  }
  return out;
}

}  // namespace wasn::sim
