// wasn/covariance.hpp
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

#ifndef WASN_COVARIANCE_HPP
#define WASN_COVARIANCE_HPP

#include <vector>

#include "wasn/common.hpp"
#include "wasn/mask.hpp"
#include "wasn/stft.hpp"

namespace wasn::danse {

// Per-frequency mixture/noise covariance estimates of a D-channel signal.
// Ryy averages all frames; Rnn weights frames by (1 - mask). Both are
// Hermitian-symmetrized. Diagonal loading is applied downstream, at solve
// time.
struct CovariancePair {
  int dim = 0;   // D
  int bins = 0;  // F
  int frames = 0;
  std::vector<cplx> ryy;                 // [F][D][D]
  std::vector<cplx> rnn;                 // [F][D][D]
  std::vector<double> noise_weight_sum;  // per frequency, sum of (1 - m)

  cplx* ryy_at(int f) { return ryy.data() + static_cast<std::size_t>(f) * dim * dim; }
  const cplx* ryy_at(int f) const {
    return ryy.data() + static_cast<std::size_t>(f) * dim * dim;
  }
  cplx* rnn_at(int f) { return rnn.data() + static_cast<std::size_t>(f) * dim * dim; }
  const cplx* rnn_at(int f) const {
    return rnn.data() + static_cast<std::size_t>(f) * dim * dim;
  }
};

// speech_weighted_ryy switches Ryy to mask-weighted frames (experimentation
// knob); the default keeps Ryy over all frames so Ryy - Rnn stays consistent
// with the additive model.
CovariancePair estimate_covariances(const dsp::ComplexSpectrogram& signals,
                                    const mask::TFMask& mask,
                                    bool speech_weighted_ryy = false);

}  // namespace wasn::danse

#endif  // WASN_COVARIANCE_HPP
