// tests/test_mask.cpp
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

#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "wasn/mask.hpp"
#include "wasn/rng.hpp"
#include "wasn/stft.hpp"

using namespace wasn;
using dsp::ComplexSpectrogram;
using dsp::StftConfig;

namespace {

ComplexSpectrogram make_spec(int T, int F, cplx fill = {}) {
  StftConfig cfg;
  cfg.window_len = 2 * (F - 1);
  cfg.hop = F - 1;
  ComplexSpectrogram s(cfg, 1, T);
  std::fill(s.data.begin(), s.data.end(), fill);
  return s;
}

}  // namespace

TEST_CASE("ideal ratio mask values") {
  auto s = make_spec(2, 5);
  auto n = make_spec(2, 5);

  s.at(0, 0, 0) = {3.0, 0.0};
  n.at(0, 0, 0) = {0.0, 1.0};  // |S|=3, |N|=1 -> 0.75
  s.at(0, 0, 1) = {0.0, 2.0};
  n.at(0, 0, 1) = {2.0, 0.0};  // equal magnitudes -> 0.5
  s.at(0, 0, 2) = {5.0, 0.0};  // |N| = 0 -> ~1

  auto m = mask::ideal_ratio_mask(s, n);
  CHECK(m.at(0, 0) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(m.at(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(m.at(0, 2) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m.at(1, 4) == 0.0);  // 0/(0+eps)
  m.validate();

  auto wrong = make_spec(3, 5);
  CHECK_THROWS_AS(mask::ideal_ratio_mask(s, wrong), ShapeError);
}

TEST_CASE("IRM is invariant under joint scaling") {
  Rng rng(3);
  auto s = make_spec(4, 9);
  auto n = make_spec(4, 9);
  for (auto& z : s.data) z = {rng.normal(), rng.normal()};
  for (auto& z : n.data) z = {rng.normal(), rng.normal()};
  auto m1 = mask::ideal_ratio_mask(s, n);
  for (auto& z : s.data) z *= 37.5;
  for (auto& z : n.data) z *= 37.5;
  auto m2 = mask::ideal_ratio_mask(s, n);
  for (std::size_t i = 0; i < m1.data.size(); ++i)
    CHECK(m1.data[i] == doctest::Approx(m2.data[i]).epsilon(1e-9));
}

TEST_CASE("oracle vad marks the burst frames") {
  auto s = make_spec(10, 5);
  for (int t = 3; t <= 5; ++t)
    for (int f = 0; f < 5; ++f) s.at(0, t, f) = {1.0, 0.0};
  auto m = mask::oracle_vad(s, 40.0);
  for (int t = 0; t < 10; ++t)
    for (int f = 0; f < 5; ++f)
      CHECK(m.at(t, f) == ((t >= 3 && t <= 5) ? 1.0 : 0.0));
}

TEST_CASE("oracle vad on silence is zero") {
  auto s = make_spec(6, 5);
  auto m = mask::oracle_vad(s, 40.0);
  for (double v : m.data) CHECK(v == 0.0);
}

TEST_CASE("oracle vad threshold 0 keeps only the loudest frame") {
  auto s = make_spec(5, 3);
  for (int t = 0; t < 5; ++t) s.at(0, t, 0) = {0.1 * (t + 1), 0.0};
  auto m = mask::oracle_vad(s, 0.0);
  for (int t = 0; t < 5; ++t) CHECK(m.at(t, 0) == (t == 4 ? 1.0 : 0.0));
}

TEST_CASE("apply_mask identity, zero and disjoint-support recovery") {
  Rng rng(5);
  auto mix = make_spec(3, 7);
  for (auto& z : mix.data) z = {rng.normal(), rng.normal()};

  mask::TFMask ones(3, 7);
  std::fill(ones.data.begin(), ones.data.end(), 1.0);
  auto out = mask::apply_mask(mix, ones);
  for (std::size_t i = 0; i < mix.data.size(); ++i) CHECK(out.data[i] == mix.data[i]);

  mask::TFMask zeros(3, 7);
  out = mask::apply_mask(mix, zeros);
  for (const auto& z : out.data) CHECK(z == cplx{});

  // disjoint supports: S occupies even bins, N odd bins
  auto s = make_spec(3, 7);
  auto n = make_spec(3, 7);
  for (int t = 0; t < 3; ++t)
    for (int f = 0; f < 7; ++f) {
      if (f % 2 == 0) s.at(0, t, f) = {rng.normal(), rng.normal()};
      else n.at(0, t, f) = {rng.normal(), rng.normal()};
    }
  auto mixd = s;
  for (std::size_t i = 0; i < mixd.data.size(); ++i) mixd.data[i] += n.data[i];
  auto irm = mask::ideal_ratio_mask(s, n);
  auto rec = mask::apply_mask(mixd, irm);
  for (int t = 0; t < 3; ++t)
    for (int f = 0; f < 7; ++f) {
      if (f % 2 == 0) {
        CHECK(std::abs(rec.at(0, t, f) - s.at(0, t, f)) <=
              1e-9 * (1.0 + std::abs(s.at(0, t, f))));
      } else {
        CHECK(std::abs(rec.at(0, t, f)) <= 1e-9);
      }
    }
}

TEST_CASE("apply_mask is linear in the mixture") {
  Rng rng(6);
  auto a = make_spec(2, 5);
  auto b = make_spec(2, 5);
  for (auto& z : a.data) z = {rng.normal(), rng.normal()};
  for (auto& z : b.data) z = {rng.normal(), rng.normal()};
  mask::TFMask m(2, 5);
  for (auto& v : m.data) v = rng.uniform();

  auto sum = a;
  for (std::size_t i = 0; i < sum.data.size(); ++i) sum.data[i] += b.data[i];
  auto lhs = mask::apply_mask(sum, m);
  auto ra = mask::apply_mask(a, m), rb = mask::apply_mask(b, m);
  for (std::size_t i = 0; i < lhs.data.size(); ++i)
    CHECK(std::abs(lhs.data[i] - (ra.data[i] + rb.data[i])) <= 1e-12);
}

TEST_CASE("mask file round trip") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "wasn_mask_test";
  fs::create_directories(dir);
  Rng rng(8);
  mask::TFMask m(4, 6);
  for (auto& v : m.data) v = rng.uniform();
  const std::string path = (dir / "m.f32").string();
  mask::save_mask(path, m);
  auto back = mask::load_mask(path);
  CHECK(back.frames == 4);
  CHECK(back.bins == 6);
  for (std::size_t i = 0; i < m.data.size(); ++i)
    CHECK(std::abs(back.data[i] - m.data[i]) <= 1e-7);
  fs::remove_all(dir);
}
