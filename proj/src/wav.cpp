// wav.cpp
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

#include "wasn/wav.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

namespace wasn::dsp {

namespace {

constexpr std::uint16_t kFmtPcm = 1;
constexpr std::uint16_t kFmtFloat = 3;
constexpr std::uint16_t kFmtExtensible = 0xFFFE;

template <typename T>
T read_le(std::istream& in) {
  unsigned char b[sizeof(T)];
  in.read(reinterpret_cast<char*>(b), sizeof(T));
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= std::uint64_t(b[i]) << (8 * i);
  T out;
  std::memcpy(&out, &v, sizeof(T));
  return out;
}

template <typename T>
void write_le(std::ostream& out, T value) {
  std::uint64_t v = 0;
  std::memcpy(&v, &value, sizeof(T));
  unsigned char b[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = (v >> (8 * i)) & 0xFF;
  out.write(reinterpret_cast<const char*>(b), sizeof(T));
}

}  // namespace

Waveform read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);

  char tag[4];
  in.read(tag, 4);
  if (std::memcmp(tag, "RIFF", 4) != 0) throw IoError(path + ": not a RIFF file");
  read_le<std::uint32_t>(in);  // riff size
  in.read(tag, 4);
  if (std::memcmp(tag, "WAVE", 4) != 0) throw IoError(path + ": not a WAVE file");

  std::uint16_t fmt_code = 0, n_channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::vector<char> data;

  while (in.read(tag, 4)) {
    const std::uint32_t chunk_size = read_le<std::uint32_t>(in);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      fmt_code = read_le<std::uint16_t>(in);
      n_channels = read_le<std::uint16_t>(in);
      rate = read_le<std::uint32_t>(in);
      read_le<std::uint32_t>(in);  // byte rate
      read_le<std::uint16_t>(in);  // block align
      bits = read_le<std::uint16_t>(in);
      if (chunk_size > 16) {
        std::vector<char> extra(chunk_size - 16);
        in.read(extra.data(), extra.size());
        if (fmt_code == kFmtExtensible && extra.size() >= 10) {
          // sub-format GUID starts with the format code
          std::uint16_t sub;
          std::memcpy(&sub, extra.data() + 8, 2);
          fmt_code = sub;
        }
      }
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      data.resize(chunk_size);
      in.read(data.data(), chunk_size);
    } else {
      in.seekg(chunk_size + (chunk_size & 1), std::ios::cur);
      continue;
    }
    if (chunk_size & 1) in.seekg(1, std::ios::cur);
  }

  if (!have_fmt) throw IoError(path + ": missing fmt chunk");
  if (data.empty()) throw IoError(path + ": missing data chunk");
  if (n_channels == 0) throw IoError(path + ": zero channels");

  const bool pcm16 = fmt_code == kFmtPcm && bits == 16;
  const bool f32 = fmt_code == kFmtFloat && bits == 32;
  if (!pcm16 && !f32)
    throw IoError(path + ": unsupported format (need 16-bit PCM or 32-bit float)");

  const std::size_t bytes_per = bits / 8;
  const std::size_t n_frames = data.size() / (bytes_per * n_channels);

  Waveform wav;
  wav.sample_rate = static_cast<int>(rate);
  wav.channels.assign(n_channels, std::vector<double>(n_frames));
  const char* p = data.data();
  for (std::size_t i = 0; i < n_frames; ++i) {
    for (std::uint16_t c = 0; c < n_channels; ++c) {
      if (pcm16) {
        std::int16_t v;
        std::memcpy(&v, p, 2);
        wav.channels[c][i] = static_cast<double>(v) / 32768.0;
        p += 2;
      } else {
        float v;
        std::memcpy(&v, p, 4);
        wav.channels[c][i] = static_cast<double>(v);
        p += 4;
      }
    }
  }
  return wav;
}

void write_wav(const std::string& path, const Waveform& wav, WavFormat format) {
  if (wav.channels.empty()) throw IoError("write_wav: no channels");
  const std::size_t n_frames = wav.num_samples();
  for (const auto& ch : wav.channels)
    if (ch.size() != n_frames) throw ShapeError("write_wav: ragged channels");

  const std::uint16_t n_channels = static_cast<std::uint16_t>(wav.channels.size());
  const bool f32 = format == WavFormat::kFloat32;
  const std::uint16_t bits = f32 ? 32 : 16;
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(n_frames * n_channels * (bits / 8));

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path);

  out.write("RIFF", 4);
  write_le<std::uint32_t>(out, 36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_le<std::uint32_t>(out, 16);
  write_le<std::uint16_t>(out, f32 ? kFmtFloat : kFmtPcm);
  write_le<std::uint16_t>(out, n_channels);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(wav.sample_rate));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(wav.sample_rate) *
                                   n_channels * (bits / 8));
  write_le<std::uint16_t>(out, static_cast<std::uint16_t>(n_channels * (bits / 8)));
  write_le<std::uint16_t>(out, bits);
  out.write("data", 4);
  write_le<std::uint32_t>(out, data_size);

  for (std::size_t i = 0; i < n_frames; ++i) {
    for (std::uint16_t c = 0; c < n_channels; ++c) {
      const double v = wav.channels[c][i];
      if (f32) {
        write_le<float>(out, static_cast<float>(v));
      } else {
        const double clamped = std::clamp(v, -1.0, 32767.0 / 32768.0);
        write_le<std::int16_t>(
            out, static_cast<std::int16_t>(std::lrint(clamped * 32768.0)));
      }
    }
  }
  if (!out) throw IoError("write failed for " + path);
}

void require_sample_rate(const Waveform& wav, int expected,
                         const std::string& context) {
  if (wav.sample_rate != expected)
    throw IoError(context + ": sample rate " + std::to_string(wav.sample_rate) +
                  " not supported (need " + std::to_string(expected) +
                  ", no resampler)");
}

}  // namespace wasn::dsp
