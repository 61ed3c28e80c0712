// stft.cpp
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

#include "wasn/stft.hpp"

#include <cmath>

#include "wasn/fft.hpp"

namespace wasn::dsp {

void StftConfig::validate() const {
  if (sample_rate <= 0) throw Error("sample_rate must be positive");
  if (window_len <= 0 || hop <= 0) throw Error("window_len and hop must be positive");
  if (window_len % hop != 0) throw Error("hop must divide window_len");
  if ((window_len & (window_len - 1)) != 0)
    throw Error("window_len must be a power of two");
}

ComplexSpectrogram::ComplexSpectrogram(const StftConfig& cfg, int c, int t)
    : config(cfg), channels(c), frames(t), bins(cfg.n_bins()),
      data(static_cast<std::size_t>(c) * t * cfg.n_bins()) {}

ComplexSpectrogram ComplexSpectrogram::channel(int c) const {
  ComplexSpectrogram out(config, 1, frames);
  const std::size_t per = static_cast<std::size_t>(frames) * bins;
  std::copy(data.begin() + c * per, data.begin() + (c + 1) * per, out.data.begin());
  return out;
}

void ComplexSpectrogram::check_finite() const {
  for (const cplx& z : data)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw NumericError("spectrogram contains non-finite entries");
}

std::vector<double> hann_window(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i)
    w[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * i / static_cast<double>(n)));
  return w;
}

int stft_frames(std::size_t signal_len, const StftConfig& cfg) {
  if (signal_len < static_cast<std::size_t>(cfg.window_len)) return 0;
  return 1 + static_cast<int>((signal_len - cfg.window_len) / cfg.hop);
}

ComplexSpectrogram stft(std::span<const double> signal, const StftConfig& cfg) {
  cfg.validate();
  if (signal.size() < static_cast<std::size_t>(cfg.window_len))
    throw LengthError("signal shorter than one analysis window");
  const int T = stft_frames(signal.size(), cfg);
  const int F = cfg.n_bins();
  const int N = cfg.fft_size();
  const std::vector<double> win = hann_window(cfg.window_len);

  ComplexSpectrogram out(cfg, 1, T);
  Fft fft(static_cast<std::size_t>(N));
  std::vector<cplx> buf(N);
  for (int t = 0; t < T; ++t) {
    const double* x = signal.data() + static_cast<std::size_t>(t) * cfg.hop;
    for (int i = 0; i < N; ++i) buf[i] = {x[i] * win[i], 0.0};
    fft.forward(buf.data());
    for (int f = 0; f < F; ++f) out.at(0, t, f) = buf[f];
  }
  return out;
}

ComplexSpectrogram stft_multi(const std::vector<std::vector<double>>& channels,
                              const StftConfig& cfg) {
  if (channels.empty()) throw ShapeError("stft_multi needs at least one channel");
  for (const auto& ch : channels)
    if (ch.size() != channels[0].size())
      throw ShapeError("stft_multi channels differ in length");
  ComplexSpectrogram first = stft(channels[0], cfg);
  ComplexSpectrogram out(cfg, static_cast<int>(channels.size()), first.frames);
  const std::size_t per = static_cast<std::size_t>(first.frames) * first.bins;
  std::copy(first.data.begin(), first.data.end(), out.data.begin());
  for (std::size_t c = 1; c < channels.size(); ++c) {
    ComplexSpectrogram s = stft(channels[c], cfg);
    std::copy(s.data.begin(), s.data.end(), out.data.begin() + c * per);
  }
  return out;
}

std::vector<double> istft(const ComplexSpectrogram& spec, const StftConfig& cfg) {
  cfg.validate();
  if (spec.channels != 1) throw ShapeError("istft expects a single channel");
  if (spec.bins != cfg.n_bins())
    throw ShapeError("spectrogram bin count does not match config");
  const int T = spec.frames;
  const int N = cfg.fft_size();
  const int F = cfg.n_bins();
  const std::vector<double> win = hann_window(cfg.window_len);

  const std::size_t out_len =
      static_cast<std::size_t>(T - 1) * cfg.hop + cfg.window_len;
  std::vector<double> out(out_len, 0.0);
  std::vector<double> norm(out_len, 0.0);

  Fft fft(static_cast<std::size_t>(N));
  std::vector<cplx> buf(N);
  for (int t = 0; t < T; ++t) {
    for (int f = 0; f < F; ++f) buf[f] = spec.at(0, t, f);
    for (int f = F; f < N; ++f) buf[f] = std::conj(spec.at(0, t, N - f));
    fft.inverse(buf.data());
    double* o = out.data() + static_cast<std::size_t>(t) * cfg.hop;
    double* nw = norm.data() + static_cast<std::size_t>(t) * cfg.hop;
    for (int i = 0; i < N; ++i) {
      o[i] += win[i] * buf[i].real();
      nw[i] += win[i] * win[i];
    }
  }
  for (std::size_t i = 0; i < out_len; ++i)
    out[i] = norm[i] > 1e-12 ? out[i] / norm[i] : 0.0;
  return out;
}

std::pair<std::size_t, std::size_t> interior_range(std::size_t out_len,
                                                   const StftConfig& cfg) {
  const std::size_t lead = static_cast<std::size_t>(cfg.window_len - cfg.hop);
  if (out_len < 2 * lead) return {0, 0};
  return {lead, out_len - lead};
}

}  // namespace wasn::dsp
