// wasn/stft.hpp
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

#ifndef WASN_STFT_HPP
#define WASN_STFT_HPP

#include <span>
#include <vector>

#include "wasn/common.hpp"

namespace wasn::dsp {

// Windowed STFT analysis/synthesis. 32 ms Hann frames at 16 ms hop give
// 257 bins at 16 kHz. Frames start at t*hop with no padding or centering;
// callers that need boundary-free results restrict themselves to fully
// overlapped interior samples (see interior_range).
struct StftConfig {
  int sample_rate = 16000;
  int window_len = 512;
  int hop = 256;

  int fft_size() const { return window_len; }
  int n_bins() const { return window_len / 2 + 1; }
  void validate() const;
  bool operator==(const StftConfig&) const = default;
};

struct ComplexSpectrogram {
  StftConfig config;
  int channels = 0;
  int frames = 0;
  int bins = 0;
  std::vector<cplx> data;  // [C][T][F], F contiguous

  ComplexSpectrogram() = default;
  ComplexSpectrogram(const StftConfig& cfg, int c, int t);

  cplx& at(int c, int t, int f) {
    return data[(static_cast<std::size_t>(c) * frames + t) * bins + f];
  }
  const cplx& at(int c, int t, int f) const {
    return data[(static_cast<std::size_t>(c) * frames + t) * bins + f];
  }
  std::span<cplx> row(int c, int t) {
    return {&at(c, t, 0), static_cast<std::size_t>(bins)};
  }
  std::span<const cplx> row(int c, int t) const {
    return {&at(c, t, 0), static_cast<std::size_t>(bins)};
  }
  // Single-channel view of channel c (shares config/frames/bins).
  ComplexSpectrogram channel(int c) const;

  void check_finite() const;
};

// Periodic Hann window of length n.
std::vector<double> hann_window(int n);

ComplexSpectrogram stft(std::span<const double> signal, const StftConfig& cfg);
ComplexSpectrogram stft_multi(const std::vector<std::vector<double>>& channels,
                              const StftConfig& cfg);

// Weighted overlap-add synthesis; inverse of stft on the fully overlapped
// interior. Requires a single-channel spectrogram.
std::vector<double> istft(const ComplexSpectrogram& spec, const StftConfig& cfg);

// Number of frames produced for a signal of the given length.
int stft_frames(std::size_t signal_len, const StftConfig& cfg);

// [first, last) sample range of an istft output that had full window overlap.
std::pair<std::size_t, std::size_t> interior_range(std::size_t out_len,
                                                   const StftConfig& cfg);

}  // namespace wasn::dsp

#endif  // WASN_STFT_HPP
