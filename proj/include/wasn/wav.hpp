// wasn/wav.hpp
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

#ifndef WASN_WAV_HPP
#define WASN_WAV_HPP

#include <string>
#include <vector>

#include "wasn/common.hpp"

namespace wasn::dsp {

struct Waveform {
  int sample_rate = 0;
  std::vector<std::vector<double>> channels;  // [C][samples]

  std::size_t num_samples() const {
    return channels.empty() ? 0 : channels[0].size();
  }
};

enum class WavFormat { kPcm16, kFloat32 };

// 16-bit PCM and 32-bit IEEE float only.
Waveform read_wav(const std::string& path);
void write_wav(const std::string& path, const Waveform& wav,
               WavFormat format = WavFormat::kFloat32);

// Throws IoError unless the file is at the expected rate (no resampler).
void require_sample_rate(const Waveform& wav, int expected,
                         const std::string& context);

}  // namespace wasn::dsp

#endif  // WASN_WAV_HPP
