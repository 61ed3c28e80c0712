// tests/test_stft.cpp
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
#include <complex>
#include <filesystem>
#include <vector>

#include "wasn/rng.hpp"
#include "wasn/stft.hpp"
#include "wasn/wav.hpp"

using namespace wasn;
using dsp::StftConfig;

namespace {

// O(n^2) DFT, the independent oracle for the FFT-based paths.
std::vector<cplx> direct_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc{};
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = -2.0 * M_PI * static_cast<double>(j * k) / n;
      acc += x[j] * cplx{std::cos(ang), std::sin(ang)};
    }
    out[k] = acc;
  }
  return out;
}

std::vector<double> random_signal(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = rng.normal();
  return x;
}

}  // namespace

TEST_CASE("stft frame count for 1 s of 16 kHz audio") {
  StftConfig cfg;
  auto x = random_signal(16000, 1);
  auto spec = dsp::stft(x, cfg);
  CHECK(spec.frames == 61);
  CHECK(spec.bins == 257);
  CHECK(spec.channels == 1);
}

TEST_CASE("stft of all-zero signal is all zero") {
  StftConfig cfg;
  std::vector<double> x(8000, 0.0);
  auto spec = dsp::stft(x, cfg);
  for (const auto& z : spec.data) CHECK(z == cplx{0.0, 0.0});
}

TEST_CASE("1 kHz sine concentrates at bin 32 and matches a direct DFT") {
  StftConfig cfg;
  std::vector<double> x(4096);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = std::sin(2.0 * M_PI * 1000.0 * static_cast<double>(i) / 16000.0);
  auto spec = dsp::stft(x, cfg);

  // peak bin = round(1000 * 512 / 16000) = 32
  int peak = 0;
  double best = 0.0;
  for (int f = 0; f < spec.bins; ++f) {
    const double m = std::abs(spec.at(0, 0, f));
    if (m > best) {
      best = m;
      peak = f;
    }
  }
  CHECK(peak == 32);

  // oracle: direct DFT of the first windowed frame
  auto win = dsp::hann_window(cfg.window_len);
  std::vector<double> frame(cfg.window_len);
  for (int i = 0; i < cfg.window_len; ++i) frame[i] = x[i] * win[i];
  auto oracle = direct_dft(frame);
  for (int f = 0; f < spec.bins; ++f) {
    CHECK(std::abs(spec.at(0, 0, f) - oracle[f]) <= 1e-9 * (1.0 + std::abs(oracle[f])));
  }
}

TEST_CASE("istft reconstructs interior samples to 1e-10") {
  StftConfig cfg;
  auto x = random_signal(16000, 7);
  auto spec = dsp::stft(x, cfg);
  auto y = dsp::istft(spec, cfg);
  auto [lo, hi] = dsp::interior_range(y.size(), cfg);
  REQUIRE(lo < hi);
  double worst = 0.0;
  for (std::size_t i = lo; i < hi; ++i)
    worst = std::max(worst, std::abs(y[i] - x[i]) / (1.0 + std::abs(x[i])));
  CHECK(worst <= 1e-10);
}

TEST_CASE("istft of all-zero spectrogram is all zero") {
  StftConfig cfg;
  dsp::ComplexSpectrogram spec(cfg, 1, 8);
  auto y = dsp::istft(spec, cfg);
  for (double v : y) CHECK(v == 0.0);
}

TEST_CASE("single-frame istft matches the direct inverse DFT") {
  StftConfig cfg;
  std::vector<double> x(cfg.window_len);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = std::sin(2.0 * M_PI * 500.0 * static_cast<double>(i) / 16000.0);
  auto spec = dsp::stft(x, cfg);
  REQUIRE(spec.frames == 1);

  // oracle: inverse DFT of the full Hermitian spectrum gives the windowed
  // frame; a single frame has no overlap, so istft divides the window back out
  // where it is nonzero.
  auto win = dsp::hann_window(cfg.window_len);
  const int n = cfg.window_len;
  std::vector<cplx> full(n);
  for (int f = 0; f < spec.bins; ++f) full[f] = spec.at(0, 0, f);
  for (int f = spec.bins; f < n; ++f) full[f] = std::conj(spec.at(0, 0, n - f));
  std::vector<double> oracle(n);
  for (int i = 0; i < n; ++i) {
    cplx acc{};
    for (int k = 0; k < n; ++k) {
      const double ang = 2.0 * M_PI * static_cast<double>(i) * k / n;
      acc += full[k] * cplx{std::cos(ang), std::sin(ang)};
    }
    oracle[i] = acc.real() / n;  // = win[i] * x[i]
  }

  auto y = dsp::istft(spec, cfg);
  REQUIRE(y.size() == static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    if (win[i] > 1e-6) {
      const double expect = oracle[i] / win[i];
      CHECK(std::abs(y[i] - expect) <= 1e-8 * (1.0 + std::abs(expect)));
    }
  }
}

TEST_CASE("Parseval consistency per frame") {
  StftConfig cfg;
  auto x = random_signal(3 * 512, 11);
  auto spec = dsp::stft(x, cfg);
  auto win = dsp::hann_window(cfg.window_len);
  const int n = cfg.fft_size();
  for (int t = 0; t < spec.frames; ++t) {
    double time_e = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = x[t * cfg.hop + i] * win[i];
      time_e += v * v;
    }
    double freq_e = std::norm(spec.at(0, t, 0)) + std::norm(spec.at(0, t, n / 2));
    for (int f = 1; f < n / 2; ++f) freq_e += 2.0 * std::norm(spec.at(0, t, f));
    freq_e /= n;
    CHECK(std::abs(time_e - freq_e) <= 1e-9 * (1.0 + time_e));
  }
}

TEST_CASE("stft is linear") {
  StftConfig cfg;
  auto x = random_signal(4096, 3);
  auto y = random_signal(4096, 4);
  std::vector<double> z(4096);
  const double a = 1.7, b = -0.3;
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = a * x[i] + b * y[i];
  auto sx = dsp::stft(x, cfg), sy = dsp::stft(y, cfg), sz = dsp::stft(z, cfg);
  for (std::size_t i = 0; i < sz.data.size(); ++i) {
    const cplx expect = a * sx.data[i] + b * sy.data[i];
    CHECK(std::abs(sz.data[i] - expect) <= 1e-12 * (1.0 + std::abs(expect)));
  }
}

TEST_CASE("stft rejects too-short signals, istft rejects bad shapes") {
  StftConfig cfg;
  std::vector<double> shorty(100, 0.1);
  CHECK_THROWS_AS(dsp::stft(shorty, cfg), LengthError);

  dsp::ComplexSpectrogram spec(cfg, 1, 4);
  StftConfig other;
  other.window_len = 256;
  other.hop = 128;
  CHECK_THROWS_AS(dsp::istft(spec, other), ShapeError);
}

TEST_CASE("wav io round trip") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "wasn_wav_test";
  fs::create_directories(dir);

  dsp::Waveform wav;
  wav.sample_rate = 16000;
  wav.channels = {random_signal(1000, 5), random_signal(1000, 6)};
  for (auto& ch : wav.channels)
    for (double& v : ch) v *= 0.1;

  const std::string f32 = (dir / "f32.wav").string();
  dsp::write_wav(f32, wav, dsp::WavFormat::kFloat32);
  auto back = dsp::read_wav(f32);
  CHECK(back.sample_rate == 16000);
  REQUIRE(back.channels.size() == 2);
  REQUIRE(back.num_samples() == 1000);
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < 1000; ++i)
      CHECK(std::abs(back.channels[c][i] - wav.channels[c][i]) <= 1e-6);

  const std::string p16 = (dir / "p16.wav").string();
  dsp::write_wav(p16, wav, dsp::WavFormat::kPcm16);
  auto back16 = dsp::read_wav(p16);
  for (std::size_t i = 0; i < 1000; ++i)
    CHECK(std::abs(back16.channels[0][i] - wav.channels[0][i]) <= 1.0 / 32000.0);

  dsp::Waveform wrong = wav;
  wrong.sample_rate = 44100;
  CHECK_THROWS_AS(dsp::require_sample_rate(wrong, 16000, "test"), IoError);
  fs::remove_all(dir);
}
