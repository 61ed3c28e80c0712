// mask.cpp
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

#include "wasn/mask.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace wasn::mask {

void TFMask::validate() const {
  for (double v : data) {
    if (!std::isfinite(v)) throw NumericError("mask contains non-finite entries");
    if (v < 0.0 || v > 1.0) throw NumericError("mask entry outside [0, 1]");
  }
}

TFMask ideal_ratio_mask(const dsp::ComplexSpectrogram& speech,
                        const dsp::ComplexSpectrogram& noise) {
  if (speech.channels != 1 || noise.channels != 1)
    throw ShapeError("ideal_ratio_mask expects single-channel spectrograms");
  if (speech.frames != noise.frames || speech.bins != noise.bins)
    throw ShapeError("speech/noise spectrogram shapes differ");
  TFMask m(speech.frames, speech.bins);
  for (int t = 0; t < speech.frames; ++t) {
    for (int f = 0; f < speech.bins; ++f) {
      const double s = std::abs(speech.at(0, t, f));
      const double n = std::abs(noise.at(0, t, f));
      m.at(t, f) = s / (s + n + kIrmEpsilon);
    }
  }
  return m;
}

TFMask oracle_vad(const dsp::ComplexSpectrogram& speech, double threshold_db) {
  if (speech.channels != 1) throw ShapeError("oracle_vad expects a single channel");
  const int T = speech.frames, F = speech.bins;
  std::vector<double> energy(T, 0.0);
  double max_e = 0.0;
  for (int t = 0; t < T; ++t) {
    double e = 0.0;
    for (int f = 0; f < F; ++f) e += std::norm(speech.at(0, t, f));
    energy[t] = e;
    max_e = std::max(max_e, e);
  }
  TFMask m(T, F);
  if (max_e <= 0.0) return m;  // all-silent input
  const double floor = max_e * std::pow(10.0, -threshold_db / 10.0);
  for (int t = 0; t < T; ++t) {
    const double v = energy[t] >= floor ? 1.0 : 0.0;
    for (int f = 0; f < F; ++f) m.at(t, f) = v;
  }
  return m;
}

dsp::ComplexSpectrogram apply_mask(const dsp::ComplexSpectrogram& mix,
                                   const TFMask& mask) {
  if (mix.frames != mask.frames || mix.bins != mask.bins)
    throw ShapeError("mask shape does not match spectrogram");
  dsp::ComplexSpectrogram out = mix;
  for (int c = 0; c < mix.channels; ++c)
    for (int t = 0; t < mix.frames; ++t)
      for (int f = 0; f < mix.bins; ++f) out.at(c, t, f) *= mask.at(t, f);
  return out;
}

void save_mask(const std::string& path, const TFMask& mask) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path);
  std::vector<float> buf(mask.data.begin(), mask.data.end());
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
  nlohmann::json side;
  side["frames"] = mask.frames;
  side["bins"] = mask.bins;
  side["dtype"] = "float32";
  std::ofstream js(path + ".json");
  js << side.dump(2) << "\n";
}

TFMask load_mask(const std::string& path) {
  std::ifstream js(path + ".json");
  if (!js) throw IoError("missing mask sidecar " + path + ".json");
  nlohmann::json side;
  js >> side;
  TFMask m(side.at("frames").get<int>(), side.at("bins").get<int>());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<float> buf(m.data.size());
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!in) throw IoError("truncated mask file " + path);
  std::copy(buf.begin(), buf.end(), m.data.begin());
  return m;
}

}  // namespace wasn::mask
