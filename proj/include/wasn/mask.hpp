// wasn/mask.hpp
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

#ifndef WASN_MASK_HPP
#define WASN_MASK_HPP

#include <string>
#include <vector>

#include "wasn/common.hpp"
#include "wasn/stft.hpp"

namespace wasn::mask {

// Real [T x F] mask with entries in [0, 1]. Used both as a training target
// (the ideal ratio mask) and as the frame weighting of the noise covariance.
struct TFMask {
  int frames = 0;
  int bins = 0;
  std::vector<double> data;  // [T][F]

  TFMask() = default;
  TFMask(int t, int f) : frames(t), bins(f), data(static_cast<std::size_t>(t) * f) {}

  double& at(int t, int f) { return data[static_cast<std::size_t>(t) * bins + f]; }
  double at(int t, int f) const { return data[static_cast<std::size_t>(t) * bins + f]; }

  void validate() const;  // entries finite and in [0, 1]
};

inline constexpr double kIrmEpsilon = 1e-12;

// |S| / (|S| + |N| + eps), per TF bin.
TFMask ideal_ratio_mask(const dsp::ComplexSpectrogram& speech,
                        const dsp::ComplexSpectrogram& noise);

// Binary frame-level activity: frame on iff its energy is within threshold_db
// of the loudest frame; broadcast across frequency.
TFMask oracle_vad(const dsp::ComplexSpectrogram& speech, double threshold_db);

dsp::ComplexSpectrogram apply_mask(const dsp::ComplexSpectrogram& mix,
                                   const TFMask& mask);

// Flat float32 [T x F] plus a JSON sidecar (<path>.json) with the shape.
void save_mask(const std::string& path, const TFMask& mask);
TFMask load_mask(const std::string& path);

}  // namespace wasn::mask

#endif  // WASN_MASK_HPP
