// sources.cpp
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
#include "wasn/rng.hpp"
#include "wasn/scene.hpp"

namespace wasn::sim {

namespace {

// Long-term speech spectrum magnitude (dB) used to shape white noise.
// Piecewise-linear over log-frequency: low-cut below 100 Hz, a broad maximum
// around 300-500 Hz, roughly -9 dB/octave above 500 Hz.
double ltass_db(double freq_hz) {
  if (freq_hz < 1.0) return -60.0;
  if (freq_hz < 100.0) return -30.0 + 30.0 * (freq_hz / 100.0);
  if (freq_hz < 300.0) return 0.0 + 2.0 * (freq_hz - 100.0) / 200.0;
  if (freq_hz < 500.0) return 2.0;
  // -9 dB per octave above 500 Hz
  return 2.0 - 9.0 * std::log2(freq_hz / 500.0);
}

// Linear-phase FIR via frequency sampling of the LTASS curve.
std::vector<double> ltass_fir(int sample_rate) {
  const int n = 512;
  const int taps = 257;
  dsp::Fft fft(n);
  std::vector<cplx> spec(n);
  for (int k = 0; k <= n / 2; ++k) {
    const double f = static_cast<double>(k) * sample_rate / n;
    const double mag = std::pow(10.0, ltass_db(f) / 20.0);
    spec[k] = mag;
    if (k > 0 && k < n / 2) spec[n - k] = mag;
  }
  fft.inverse(spec.data());
  // Center the impulse response, apply a Hann window, keep `taps` taps.
  std::vector<double> h(taps);
  for (int i = 0; i < taps; ++i) {
    const int idx = (i - taps / 2 + n) % n;
    const double w = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / (taps - 1)));
    h[i] = spec[idx].real() * w;
  }
  return h;
}

std::vector<double> white(std::size_t n, Rng& rng) {
  std::vector<double> x(n);
  for (auto& v : x) v = 0.2 * rng.normal();
  return x;
}

std::vector<double> shape_to_ltass(const std::vector<double>& x, int sample_rate) {
  static const std::vector<double> fir16k = ltass_fir(16000);
  const std::vector<double> h =
      sample_rate == 16000 ? fir16k : ltass_fir(sample_rate);
  std::vector<double> y = dsp::fft_convolve(x, h);
  y.resize(x.size());  // keep source length; FIR delay is 8 ms, irrelevant here
  return y;
}

void normalize_rms(std::vector<double>& x, double target_rms) {
  double e = 0.0;
  for (double v : x) e += v * v;
  const double rms = std::sqrt(e / static_cast<double>(x.size()));
  if (rms <= 0.0) return;
  const double g = target_rms / rms;
  for (double& v : x) v *= g;
}

}  // namespace

std::vector<double> synth_source(SourceKind kind, double duration_s,
                                 std::uint64_t seed, int sample_rate) {
  if (duration_s <= 0.0) throw LengthError("duration must be positive");
  const std::size_t n = static_cast<std::size_t>(std::lround(duration_s * sample_rate));
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(kind) + 0xabcdULL));

  switch (kind) {
    case SourceKind::kWhite: {
      return white(n, rng);
    }
    case SourceKind::kSpeechShapedNoise: {
      std::vector<double> y = shape_to_ltass(white(n, rng), sample_rate);
      normalize_rms(y, 0.1);
      return y;
    }
    case SourceKind::kBabbleSurrogate: {
      // Six speech-shaped streams with independent slow modulations.
      std::vector<double> out(n, 0.0);
      for (int s = 0; s < 6; ++s) {
        Rng srng(mix_seed(seed, 0xbabb1eULL, static_cast<std::uint64_t>(s)));
        std::vector<double> stream = shape_to_ltass(white(n, srng), sample_rate);
        const double rate = srng.uniform(1.0, 4.0);
        const double phase = srng.uniform(0.0, 2.0 * M_PI);
        for (std::size_t i = 0; i < n; ++i) {
          const double t = static_cast<double>(i) / sample_rate;
          const double env =
              0.3 + 0.7 * 0.5 * (1.0 + std::sin(2.0 * M_PI * rate * t + phase));
          out[i] += env * stream[i];
        }
      }
      normalize_rms(out, 0.1);
      return out;
    }
  }
  throw ConfigError("unknown source kind");
}

std::vector<double> synth_speech_surrogate(double duration_s, std::uint64_t seed,
                                           int sample_rate) {
  if (duration_s <= 0.0) throw LengthError("duration must be positive");
  const std::size_t n = static_cast<std::size_t>(std::lround(duration_s * sample_rate));
  Rng rng(mix_seed(seed, 0x5eec4ULL));
  std::vector<double> y = shape_to_ltass(white(n, rng), sample_rate);
  const double phase = rng.uniform(0.0, 2.0 * M_PI);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double m = 0.5 * (1.0 + std::sin(2.0 * M_PI * 4.0 * t + phase));
    y[i] *= 0.1 + 0.9 * m * m;  // deep 4 Hz modulation, speech-like sparsity
  }
  normalize_rms(y, 0.1);
  return y;
}

}  // namespace wasn::sim
