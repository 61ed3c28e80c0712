// tests/test_scene.cpp
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

#include <doctest.h>

#include <cmath>

#include "wasn/fft.hpp"
#include "wasn/scene.hpp"

using namespace wasn;
using namespace wasn::sim;

namespace {

double band_energy(const std::vector<double>& x, int fs, double lo, double hi) {
  const std::size_t n = dsp::next_pow2(x.size());
  dsp::Fft fft(n);
  std::vector<cplx> buf(n);
  for (std::size_t i = 0; i < x.size(); ++i) buf[i] = x[i];
  fft.forward(buf.data());
  double e = 0.0;
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const double f = static_cast<double>(k) * fs / static_cast<double>(n);
    if (f >= lo && f <= hi) e += std::norm(buf[k]);
  }
  return e;
}

double energy(const std::vector<double>& x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

}  // namespace

TEST_CASE("sample_scene seed 7 satisfies the geometry contract") {
  GeometryConfig cfg;
  auto spec = sample_scene(7, cfg);
  CHECK(spec.num_nodes() == 4);
  for (int k = 0; k < 4; ++k) CHECK(spec.mics_at(k) == 4);

  // pairwise distances among sources and node centers
  std::vector<Vec3> pts = {spec.target_pos, spec.noise_pos};
  for (const auto& c : spec.node_centers) pts.push_back(c);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      CHECK(dist(pts[i], pts[j]) >= 0.5);
  CHECK_NOTHROW(spec.validate(cfg));
}

TEST_CASE("sample_scene is deterministic") {
  GeometryConfig cfg;
  auto a = sample_scene(123, cfg);
  auto b = sample_scene(123, cfg);
  CHECK(a.to_json() == b.to_json());
  auto c = sample_scene(124, cfg);
  CHECK(a.to_json() != c.to_json());
}

TEST_CASE("infeasible room fails with a generation error") {
  GeometryConfig cfg;
  cfg.room_min = {1.0, 1.0, 1.0};
  cfg.room_max = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(sample_scene(0, cfg), GenerationError);
}

TEST_CASE("scene spec JSON round trip") {
  GeometryConfig cfg;
  auto spec = sample_scene(42, cfg);
  auto text = spec.to_json();
  auto back = SceneSpec::from_json(text);
  CHECK(back.to_json() == text);
}

TEST_CASE("geometry holds across many seeds") {
  GeometryConfig cfg;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto spec = sample_scene(seed, cfg);
    CHECK_NOTHROW(spec.validate(cfg));
  }
}

TEST_CASE("free-field rir peaks at the propagation delay") {
  SceneSpec spec;
  spec.room_dims = {10.0, 8.0, 3.0};
  spec.rt60 = 0.3;
  spec.sample_rate = 16000;
  const Vec3 src{2.0, 4.0, 1.5};
  const Vec3 mic{5.43, 4.0, 1.5};  // 3.43 m apart
  auto rir = simulate_rir(spec, src, mic, 0);

  int peak = 0;
  double best = 0.0;
  for (std::size_t i = 0; i < rir.size(); ++i)
    if (std::abs(rir[i]) > best) {
      best = std::abs(rir[i]);
      peak = static_cast<int>(i);
    }
  // delay = 3.43 / 343 * 16000 = 160
  CHECK(std::abs(peak - 160) <= 1);
}

TEST_CASE("first-order images arrive at hand-enumerated delays") {
  SceneSpec spec;
  spec.room_dims = {5.0, 4.0, 3.0};
  spec.rt60 = 0.25;
  spec.sample_rate = 16000;
  const Vec3 src{1.2, 1.7, 1.5};
  const Vec3 mic{3.6, 2.9, 1.5};

  // hand enumeration of the six first-order images
  const std::vector<Vec3> images = {
      {-src.x, src.y, src.z},                         // x = 0 wall
      {2 * spec.room_dims[0] - src.x, src.y, src.z},  // x = Lx wall
      {src.x, -src.y, src.z},                         // y = 0 wall
      {src.x, 2 * spec.room_dims[1] - src.y, src.z},  // y = Ly wall
      {src.x, src.y, -src.z},                         // z = 0 wall
      {src.x, src.y, 2 * spec.room_dims[2] - src.z},  // z = Lz wall
  };

  auto rir0 = simulate_rir(spec, src, mic, 0);
  auto rir1 = simulate_rir(spec, src, mic, 1);

  // the difference contains exactly the six first-order reflections
  std::vector<double> diff(rir1.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = rir1[i] - rir0[i];

  const double alpha = sabine_absorption(spec.room_dims, spec.rt60);
  const double beta = std::sqrt(1.0 - alpha);
  for (const auto& img : images) {
    const double d = dist(img, mic);
    const int at = static_cast<int>(std::lround(d / kSpeedOfSound * 16000.0));
    const double expect_gain = beta / (4.0 * M_PI * d);
    // energy of the windowed sinc near the predicted delay
    double found = 0.0;
    for (int i = at - 2; i <= at + 2; ++i)
      if (i >= 0 && i < static_cast<int>(diff.size()))
        found = std::max(found, std::abs(diff[i]));
    CHECK(found == doctest::Approx(expect_gain).epsilon(0.35));
  }
}

TEST_CASE("sabine absorption matches the formula") {
  // independent evaluation: alpha = 0.161 V / (S rt60)
  const std::array<double, 3> room = {6.0, 5.0, 3.0};
  const double volume = 6.0 * 5.0 * 3.0;                      // 90
  const double surface = 2.0 * (30.0 + 18.0 + 15.0);          // 126
  const double oracle = 0.161 * volume / (surface * 0.3);
  CHECK(sabine_absorption(room, 0.3) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("rir tail decays consistently with the requested rt60") {
  SceneSpec spec;
  spec.room_dims = {6.0, 5.0, 3.0};
  spec.rt60 = 0.3;
  spec.sample_rate = 16000;
  const Vec3 src{1.5, 2.0, 1.4};
  const Vec3 mic{4.2, 3.1, 1.6};
  auto rir = simulate_rir(spec, src, mic, 40);

  const int fs = 16000;
  const double d = dist(src, mic);
  const int direct_at = static_cast<int>(std::lround(d / kSpeedOfSound * fs));
  double direct_e = 0.0;
  for (int i = std::max(0, direct_at - 64); i < direct_at + 64; ++i)
    direct_e += rir[i] * rir[i];

  const int tail_lo = static_cast<int>(0.3 * fs);
  const int tail_hi = std::min<int>(static_cast<int>(rir.size()),
                                    static_cast<int>(0.35 * fs));
  double tail_e = 0.0;
  for (int i = tail_lo; i < tail_hi; ++i) tail_e += rir[i] * rir[i];

  REQUIRE(direct_e > 0.0);
  const double drop_db = 10.0 * std::log10(direct_e / (tail_e + 1e-300));
  CHECK(drop_db >= 45.0);  // 55 dB with the spec's +-10 dB slack
}

TEST_CASE("synth sources are deterministic and near zero mean") {
  auto a = synth_source(SourceKind::kWhite, 1.0, 5);
  auto b = synth_source(SourceKind::kWhite, 1.0, 5);
  CHECK(a == b);
  CHECK(a.size() == 16000);
  double mean = 0.0;
  for (double v : a) mean += v;
  mean /= static_cast<double>(a.size());
  CHECK(std::abs(mean) < 0.05);
}

TEST_CASE("speech-shaped noise tilts toward low frequencies") {
  auto x = synth_source(SourceKind::kSpeechShapedNoise, 2.0, 9);
  const double low = band_energy(x, 16000, 100.0, 1000.0);
  const double high = band_energy(x, 16000, 4000.0, 8000.0);
  CHECK(low > high);

  auto sp = synth_speech_surrogate(2.0, 9);
  CHECK(band_energy(sp, 16000, 100.0, 1000.0) > band_energy(sp, 16000, 4000.0, 8000.0));

  auto bab = synth_source(SourceKind::kBabbleSurrogate, 1.0, 2);
  CHECK(bab.size() == 16000);
}

TEST_CASE("render_scene hits the requested dry SIR exactly") {
  GeometryConfig cfg;
  cfg.num_nodes = 2;
  auto spec = sample_scene(11, cfg);

  auto speech = synth_speech_surrogate(1.0, 21);
  auto noise = synth_source(SourceKind::kWhite, 1.0, 22);

  SUBCASE("sir 0 dB means equal dry energies") {
    spec.sir_db = 0.0;
    auto sig = render_scene(spec, speech, noise, 4);
    const double ratio = energy(sig.dry_speech) / energy(sig.dry_noise);
    CHECK(ratio == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("sir 6 dB leaves the oracle energy ratio") {
    spec.sir_db = 6.0;
    auto sig = render_scene(spec, speech, noise, 4);
    // independent check through RMS
    const double rms_s = std::sqrt(energy(sig.dry_speech) / sig.dry_speech.size());
    const double rms_n = std::sqrt(energy(sig.dry_noise) / sig.dry_noise.size());
    const double ratio = (rms_s * rms_s) / (rms_n * rms_n);
    CHECK(ratio == doctest::Approx(std::pow(10.0, 0.6)).epsilon(1e-9));
  }

  SUBCASE("zero noise leaves the mixture equal to the speech image") {
    std::vector<double> zeros(speech.size(), 0.0);
    auto sig = render_scene(spec, speech, zeros, 4);
    for (int k = 0; k < spec.num_nodes(); ++k)
      for (int m = 0; m < spec.mics_at(k); ++m)
        for (std::size_t i = 0; i < sig.num_samples(); ++i)
          CHECK(sig.mixtures[k][m][i] == sig.speech_images[k][m][i]);
  }

  SUBCASE("mixture additivity is exact") {
    auto sig = render_scene(spec, speech, noise, 4);
    for (int k = 0; k < spec.num_nodes(); ++k)
      for (int m = 0; m < spec.mics_at(k); ++m)
        for (std::size_t i = 0; i < sig.num_samples(); ++i)
          CHECK(sig.mixtures[k][m][i] ==
                sig.speech_images[k][m][i] + sig.noise_images[k][m][i]);
  }

  SUBCASE("length mismatch is a shape error") {
    std::vector<double> shorter(speech.begin(), speech.end() - 5);
    CHECK_THROWS_AS(render_scene(spec, speech, shorter, 4), ShapeError);
  }
}
