// covariance.cpp
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

#include "wasn/covariance.hpp"

#include <cmath>

#include "wasn/kernels.hpp"

namespace wasn::danse {

CovariancePair estimate_covariances(const dsp::ComplexSpectrogram& signals,
                                    const mask::TFMask& mask,
                                    bool speech_weighted_ryy) {
  const int D = signals.channels;
  const int T = signals.frames;
  const int F = signals.bins;
  if (mask.frames != T || mask.bins != F)
    throw ShapeError("mask shape does not match signals");
  if (D <= 0 || T <= 0) throw ShapeError("empty signal");

  CovariancePair cov;
  cov.dim = D;
  cov.bins = F;
  cov.frames = T;
  cov.ryy.assign(static_cast<std::size_t>(F) * D * D, cplx{});
  cov.rnn.assign(static_cast<std::size_t>(F) * D * D, cplx{});
  cov.noise_weight_sum.assign(F, 0.0);

  const std::size_t chan_stride = static_cast<std::size_t>(T) * F;
  std::vector<cplx> y(D);
  std::vector<double> speech_weight_sum(F, 0.0);

  for (int f = 0; f < F; ++f) {
    cplx* ryy = cov.ryy_at(f);
    cplx* rnn = cov.rnn_at(f);
    double wn_sum = 0.0, ws_sum = 0.0;
    for (int t = 0; t < T; ++t) {
      const cplx* base = signals.data.data() + static_cast<std::size_t>(t) * F + f;
      for (int c = 0; c < D; ++c) y[c] = base[c * chan_stride];
      const double m = mask.at(t, f);
      const double wn = 1.0 - m;
      kern::cherk1(ryy, y.data(), speech_weighted_ryy ? m : 1.0, D);
      if (wn != 0.0) kern::cherk1(rnn, y.data(), wn, D);
      wn_sum += wn;
      ws_sum += m;
    }
    cov.noise_weight_sum[f] = wn_sum;
    speech_weight_sum[f] = ws_sum;
    if (wn_sum <= 0.0)
      throw DegenerateMaskError("no noise-dominated frames at frequency bin " +
                                std::to_string(f));
    if (speech_weighted_ryy && ws_sum <= 0.0)
      throw DegenerateMaskError("no speech-dominated frames at frequency bin " +
                                std::to_string(f));
    const double ryy_norm = speech_weighted_ryy ? ws_sum : static_cast<double>(T);
    for (int i = 0; i < D * D; ++i) {
      ryy[i] /= ryy_norm;
      rnn[i] /= wn_sum;
    }
    // Hermitian symmetrization (A + A^H) / 2
    for (int i = 0; i < D; ++i) {
      for (int j = i + 1; j < D; ++j) {
        const cplx s = 0.5 * (ryy[i * D + j] + std::conj(ryy[j * D + i]));
        ryy[i * D + j] = s;
        ryy[j * D + i] = std::conj(s);
        const cplx sn = 0.5 * (rnn[i * D + j] + std::conj(rnn[j * D + i]));
        rnn[i * D + j] = sn;
        rnn[j * D + i] = std::conj(sn);
      }
      ryy[i * D + i] = cplx(ryy[i * D + i].real(), 0.0);
      rnn[i * D + i] = cplx(rnn[i * D + i].real(), 0.0);
    }
  }
  return cov;
}

}  // namespace wasn::danse
