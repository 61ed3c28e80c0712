// rir.cpp
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

// Image-source method for a shoebox room (Allen & Berkley), uniform wall
// reflection coefficient derived from Sabine's formula, fractional delays
// realized with a Hann-windowed sinc.

#include <algorithm>
#include <cmath>

#include "wasn/scene.hpp"

namespace wasn::sim {

double sabine_absorption(const std::array<double, 3>& room_dims, double rt60) {
  const double Lx = room_dims[0], Ly = room_dims[1], Lz = room_dims[2];
  const double volume = Lx * Ly * Lz;
  const double surface = 2.0 * (Lx * Ly + Lx * Lz + Ly * Lz);
  if (rt60 <= 0.0) throw GeometryError("rt60 must be positive");
  double alpha = 0.161 * volume / (surface * rt60);
  // A room can be too live for the requested rt60; cap just below total
  // absorption rather than failing.
  return std::clamp(alpha, 1e-4, 0.9999);
}

std::vector<double> simulate_rir(const SceneSpec& spec, const Vec3& src,
                                 const Vec3& mic, int max_order) {
  if (max_order < 0) throw GeometryError("max_order must be >= 0");
  if (!(src.x > 0 && src.x < spec.room_dims[0] && src.y > 0 &&
        src.y < spec.room_dims[1] && src.z > 0 && src.z < spec.room_dims[2]))
    throw GeometryError("source outside room");
  if (!(mic.x > 0 && mic.x < spec.room_dims[0] && mic.y > 0 &&
        mic.y < spec.room_dims[1] && mic.z > 0 && mic.z < spec.room_dims[2]))
    throw GeometryError("microphone outside room");

  const double fs = spec.sample_rate;
  const double beta = std::sqrt(1.0 - sabine_absorption(spec.room_dims, spec.rt60));

  const double diag = std::sqrt(spec.room_dims[0] * spec.room_dims[0] +
                                spec.room_dims[1] * spec.room_dims[1] +
                                spec.room_dims[2] * spec.room_dims[2]);
  const int n_samples = static_cast<int>(
      std::ceil((spec.rt60 + diag / kSpeedOfSound) * fs)) + 64;

  // Width of the windowed-sinc fractional-delay filter: 8 ms.
  const int tw = 2 * static_cast<int>(std::lround(0.004 * fs));

  std::vector<double> rir(n_samples, 0.0);

  const double s[3] = {src.x, src.y, src.z};
  const double r[3] = {mic.x, mic.y, mic.z};
  const double L[3] = {spec.room_dims[0], spec.room_dims[1], spec.room_dims[2]};

  const double max_dist_m = n_samples * kSpeedOfSound / fs;
  const int n1 = static_cast<int>(std::ceil(max_dist_m / (2.0 * L[0])));
  const int n2 = static_cast<int>(std::ceil(max_dist_m / (2.0 * L[1])));
  const int n3 = static_cast<int>(std::ceil(max_dist_m / (2.0 * L[2])));

  std::vector<double> lpi(tw);
  for (int mx = -n1; mx <= n1; ++mx) {
    for (int my = -n2; my <= n2; ++my) {
      for (int mz = -n3; mz <= n3; ++mz) {
        for (int q = 0; q <= 1; ++q) {
          const int ox = std::abs(2 * mx - q);
          if (ox > max_order) continue;
          const double px = (1 - 2 * q) * s[0] - r[0] + 2.0 * mx * L[0];
          for (int j = 0; j <= 1; ++j) {
            const int oy = std::abs(2 * my - j);
            if (ox + oy > max_order) continue;
            const double py = (1 - 2 * j) * s[1] - r[1] + 2.0 * my * L[1];
            for (int k = 0; k <= 1; ++k) {
              const int oz = std::abs(2 * mz - k);
              const int order = ox + oy + oz;
              if (order > max_order) continue;
              const double pz = (1 - 2 * k) * s[2] - r[2] + 2.0 * mz * L[2];
              const double d_m = std::sqrt(px * px + py * py + pz * pz);
              const double d_samp = d_m / kSpeedOfSound * fs;
              const double fdist = std::floor(d_samp);
              if (fdist >= n_samples) continue;
              const double gain =
                  std::pow(beta, static_cast<double>(order)) / (4.0 * M_PI * d_m);
              const double frac = d_samp - fdist;
              for (int n = 0; n < tw; ++n) {
                const double t = (n - 0.5 * tw + 1.0) - frac;
                const double window = 0.5 * (1.0 + std::cos(2.0 * M_PI * t / tw));
                const double x = M_PI * t;
                const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
                lpi[n] = window * sinc;
              }
              const int start = static_cast<int>(fdist) - tw / 2 + 1;
              const int lo = std::max(0, -start);
              const int hi = std::min(tw, n_samples - start);
              for (int n = lo; n < hi; ++n) rir[start + n] += gain * lpi[n];
            }
          }
        }
      }
    }
  }
  return rir;
}

}  // namespace wasn::sim
