// tests/test_mwf.cpp
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

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>

#include "wasn/covariance.hpp"
#include "wasn/mwf.hpp"
#include "wasn/rng.hpp"

using namespace wasn;
using namespace wasn::danse;
using dsp::ComplexSpectrogram;
using dsp::StftConfig;

namespace {

ComplexSpectrogram random_spec(int C, int T, int F, std::uint64_t seed) {
  StftConfig cfg;
  cfg.window_len = 2 * (F - 1);
  cfg.hop = F - 1;
  ComplexSpectrogram s(cfg, C, T);
  Rng rng(seed);
  for (auto& z : s.data) z = {rng.normal(), rng.normal()};
  return s;
}

mask::TFMask const_mask(int T, int F, double v) {
  mask::TFMask m(T, F);
  std::fill(m.data.begin(), m.data.end(), v);
  return m;
}

}  // namespace

TEST_CASE("mask of zeros makes Rnn equal Ryy") {
  auto sig = random_spec(3, 50, 9, 1);
  auto cov = estimate_covariances(sig, const_mask(50, 9, 0.0));
  for (std::size_t i = 0; i < cov.ryy.size(); ++i) {
    CHECK(cov.ryy[i].real() == cov.rnn[i].real());
    CHECK(cov.ryy[i].imag() == cov.rnn[i].imag());
  }
}

TEST_CASE("single-channel white noise variance is recovered") {
  const int T = 10000;
  auto sig = random_spec(1, T, 4, 2);
  auto cov = estimate_covariances(sig, const_mask(T, 4, 0.0));
  // unit-variance real and imaginary parts: E|z|^2 = 2
  for (int f = 0; f < 4; ++f)
    CHECK(cov.rnn_at(f)[0].real() == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("perfectly correlated channels give a rank-1 Ryy") {
  const int T = 256, F = 3;
  auto one = random_spec(1, T, F, 3);
  StftConfig cfg = one.config;
  ComplexSpectrogram two(cfg, 2, T);
  for (int t = 0; t < T; ++t)
    for (int f = 0; f < F; ++f) {
      two.at(0, t, f) = one.at(0, t, f);
      two.at(1, t, f) = 2.0 * one.at(0, t, f);
    }
  auto cov = estimate_covariances(two, const_mask(T, F, 0.0));
  for (int f = 0; f < F; ++f) {
    Eigen::Matrix2cd R;
    R << cov.ryy_at(f)[0], cov.ryy_at(f)[1], cov.ryy_at(f)[2], cov.ryy_at(f)[3];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(R);
    const double delta = kDiagLoadScale * R.real().trace() / 2.0;
    CHECK(eig.eigenvalues()(0) <= 10.0 * std::max(delta, 1e-12));
  }
}

TEST_CASE("an all-ones mask is degenerate") {
  auto sig = random_spec(2, 20, 5, 4);
  CHECK_THROWS_AS(estimate_covariances(sig, const_mask(20, 5, 1.0)),
                  DegenerateMaskError);
}

TEST_CASE("solve_mwf limiting cases") {
  const int D = 3;
  Rng rng(5);

  // Build a random Hermitian PSD Ryy
  Eigen::MatrixXcd A(D, D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) A(i, j) = cplx{rng.normal(), rng.normal()};
  Eigen::MatrixXcd ryy = A * A.adjoint() + Eigen::MatrixXcd::Identity(D, D);

  std::vector<cplx> ryy_rm(D * D), rnn_rm(D * D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) ryy_rm[i * D + j] = ryy(i, j);

  SUBCASE("Rnn = 0 returns the reference selector") {
    std::fill(rnn_rm.begin(), rnn_rm.end(), cplx{});
    std::vector<cplx> w(D);
    solve_mwf_single(ryy_rm.data(), rnn_rm.data(), D, 1, w.data());
    CHECK(std::abs(w[0]) <= 1e-6);
    CHECK(std::abs(w[1] - 1.0) <= 1e-6);
    CHECK(std::abs(w[2]) <= 1e-6);
  }

  SUBCASE("Ryy = Rnn returns (nearly) zero") {
    for (int i = 0; i < D * D; ++i) rnn_rm[i] = ryy_rm[i];
    std::vector<cplx> w(D);
    solve_mwf_single(ryy_rm.data(), rnn_rm.data(), D, 0, w.data());
    double norm = 0.0;
    for (const auto& z : w) norm += std::norm(z);
    CHECK(std::sqrt(norm) <= 1e-8);
  }
}

TEST_CASE("rank-1 speech matches the closed-form Wiener solution") {
  // Ryy = s2 h h^H + I, Rnn = I.
  // Closed form (Sherman-Morrison): w = s2 h conj(h_ref) / (1 + s2 ||h||^2).
  const int D = 2;
  const double s2 = 4.0;
  Eigen::Vector2cd h;
  h << cplx{0.8, 0.3}, cplx{-0.5, 1.1};
  Eigen::Matrix2cd ryy = s2 * h * h.adjoint() + Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd rnn = Eigen::Matrix2cd::Identity();

  std::vector<cplx> ryy_rm(4), rnn_rm(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      ryy_rm[i * 2 + j] = ryy(i, j);
      rnn_rm[i * 2 + j] = rnn(i, j);
    }
  const int ref = 0;
  std::vector<cplx> w(2);
  solve_mwf_single(ryy_rm.data(), rnn_rm.data(), D, ref, w.data());

  const double h2 = std::norm(h(0)) + std::norm(h(1));
  const cplx scale = s2 * std::conj(h(ref)) / (1.0 + s2 * h2);
  for (int i = 0; i < D; ++i)
    CHECK(std::abs(w[i] - scale * h(i)) <= 1e-6 * (1.0 + std::abs(scale * h(i))));
}

TEST_CASE("filter_apply basics") {
  auto sig = random_spec(3, 8, 5, 7);
  FilterBank e;
  e.bins = 5;
  e.dim = 3;
  e.w.assign(5 * 3, cplx{});
  for (int f = 0; f < 5; ++f) e.at(f)[1] = {1.0, 0.0};

  SUBCASE("reference selector passes the channel through bit-exactly") {
    auto out = filter_apply(sig, e);
    for (int t = 0; t < 8; ++t)
      for (int f = 0; f < 5; ++f) CHECK(out.at(0, t, f) == sig.at(1, t, f));
  }

  SUBCASE("zero filter nulls the output") {
    FilterBank z = e;
    std::fill(z.w.begin(), z.w.end(), cplx{});
    auto out = filter_apply(sig, z);
    for (const auto& v : out.data) CHECK(v == cplx{});
  }

  SUBCASE("linear in the input") {
    auto a = random_spec(3, 8, 5, 8);
    auto b = random_spec(3, 8, 5, 9);
    FilterBank fb = e;
    Rng rng(11);
    for (auto& z : fb.w) z = {rng.normal(), rng.normal()};
    auto sum = a;
    for (std::size_t i = 0; i < sum.data.size(); ++i) sum.data[i] += b.data[i];
    auto lhs = filter_apply(sum, fb);
    auto ra = filter_apply(a, fb);
    auto rb = filter_apply(b, fb);
    for (std::size_t i = 0; i < lhs.data.size(); ++i) {
      const cplx expect = ra.data[i] + rb.data[i];
      CHECK(std::abs(lhs.data[i] - expect) <= 1e-12 * (1.0 + std::abs(expect)));
    }
  }

  SUBCASE("dimension mismatch throws") {
    FilterBank bad = e;
    bad.dim = 2;
    bad.w.resize(10);
    CHECK_THROWS_AS(filter_apply(sig, bad), ShapeError);
  }
}

TEST_CASE("mwf minimizes the model MSE at oracle covariances") {
  // Exact covariances; MSE(w) = s2 - 2 Re(w^H r) + w^H Ryy w with r = Rss e.
  const int D = 4;
  Rng rng(13);
  Eigen::VectorXcd h(D);
  for (int i = 0; i < D; ++i) h(i) = cplx{rng.normal(), rng.normal()};
  const double s2 = 2.5;
  Eigen::MatrixXcd rss = s2 * h * h.adjoint();
  Eigen::MatrixXcd rnn = Eigen::MatrixXcd::Zero(D, D);
  for (int i = 0; i < D; ++i) rnn(i, i) = 0.5 + rng.uniform();
  Eigen::MatrixXcd ryy = rss + rnn;

  std::vector<cplx> ryy_rm(D * D), rnn_rm(D * D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      ryy_rm[i * D + j] = ryy(i, j);
      rnn_rm[i * D + j] = rnn(i, j);
    }
  const int ref = 2;
  Eigen::VectorXcd w(D);
  solve_mwf_single(ryy_rm.data(), rnn_rm.data(), D, ref, w.data());

  Eigen::VectorXcd r = rss.col(ref);
  auto mse = [&](const Eigen::VectorXcd& v) {
    const double quad = (v.adjoint() * ryy * v)(0, 0).real();
    const double cross = 2.0 * (v.adjoint() * r)(0, 0).real();
    return s2 * std::norm(h(ref)) - cross + quad;
  };

  const double base = mse(w);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXcd d(D);
    for (int i = 0; i < D; ++i) d(i) = cplx{rng.normal(), rng.normal()};
    d.normalize();
    CHECK(mse(w + 1e-3 * d) >= base - 1e-9);
    CHECK(mse(w - 1e-3 * d) >= base - 1e-9);
  }
}

TEST_CASE("filter bank file round trip") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "wasn_fb_test";
  fs::create_directories(dir);
  FilterBank fb;
  fb.bins = 3;
  fb.dim = 2;
  fb.ref_selector = {1, 0};
  Rng rng(17);
  fb.w.resize(6);
  for (auto& z : fb.w) z = {rng.normal(), rng.normal()};
  const std::string path = (dir / "fb.bin").string();
  fb.save(path);
  auto back = FilterBank::load(path);
  CHECK(back.bins == 3);
  CHECK(back.dim == 2);
  CHECK(back.ref_selector == std::make_pair(1, 0));
  for (std::size_t i = 0; i < fb.w.size(); ++i) CHECK(back.w[i] == fb.w[i]);
  fs::remove_all(dir);
}
