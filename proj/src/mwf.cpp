// mwf.cpp
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

#include "wasn/mwf.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "wasn/kernels.hpp"

namespace wasn::danse {

void FilterBank::check_finite() const {
  for (const cplx& z : w)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw NumericError("filter bank contains non-finite entries");
}

void FilterBank::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path);
  out.write(reinterpret_cast<const char*>(w.data()),
            static_cast<std::streamsize>(w.size() * sizeof(cplx)));
  nlohmann::json side;
  side["bins"] = bins;
  side["dim"] = dim;
  side["ref_node"] = ref_selector.first;
  side["ref_mic"] = ref_selector.second;
  side["dtype"] = "complex128";
  std::ofstream js(path + ".json");
  js << side.dump(2) << "\n";
}

FilterBank FilterBank::load(const std::string& path) {
  std::ifstream js(path + ".json");
  if (!js) throw IoError("missing filter sidecar " + path + ".json");
  nlohmann::json side;
  js >> side;
  FilterBank fb;
  fb.bins = side.at("bins").get<int>();
  fb.dim = side.at("dim").get<int>();
  fb.ref_selector = {side.at("ref_node").get<int>(), side.at("ref_mic").get<int>()};
  fb.w.resize(static_cast<std::size_t>(fb.bins) * fb.dim);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  in.read(reinterpret_cast<char*>(fb.w.data()),
          static_cast<std::streamsize>(fb.w.size() * sizeof(cplx)));
  if (!in) throw IoError("truncated filter file " + path);
  return fb;
}

void solve_mwf_single(const cplx* ryy, const cplx* rnn, int dim, int ref,
                      cplx* w_out) {
  using Mat = Eigen::MatrixXcd;
  using RowMat =
      Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Mat Ryy = Eigen::Map<const RowMat>(ryy, dim, dim);
  Mat Rnn = Eigen::Map<const RowMat>(rnn, dim, dim);
  if (!Ryy.allFinite() || !Rnn.allFinite())
    throw NumericError("covariance matrices contain non-finite entries");

  const double tr = Ryy.real().trace();
  if (tr <= 0.0) {  // all-silent input: the zero filter is exact
    for (int i = 0; i < dim; ++i) w_out[i] = cplx{};
    return;
  }
  const double delta = kDiagLoadScale * tr / dim;

  // Speech covariance estimate with eigenvalues floored at zero.
  Mat Rss = Ryy - Rnn;
  Eigen::SelfAdjointEigenSolver<Mat> eig(Rss);
  if (eig.info() != Eigen::Success)
    throw NumericError("eigendecomposition of speech covariance failed");
  Eigen::VectorXcd ev = eig.eigenvalues().cwiseMax(0.0).cast<cplx>();
  Mat Rss_psd = eig.eigenvectors() * ev.asDiagonal() *
                eig.eigenvectors().adjoint();

  Mat A = Ryy + delta * Mat::Identity(dim, dim);
  Eigen::VectorXcd rhs = Rss_psd.col(ref);
  Eigen::VectorXcd w = A.ldlt().solve(rhs);
  if (!w.allFinite()) throw NumericError("mwf solve produced non-finite filter");
  for (int i = 0; i < dim; ++i) w_out[i] = w[i];
}

FilterBank solve_mwf(const CovariancePair& cov, int ref) {
  if (ref < 0 || ref >= cov.dim) throw ShapeError("reference index out of range");
  FilterBank fb;
  fb.bins = cov.bins;
  fb.dim = cov.dim;
  fb.w.resize(static_cast<std::size_t>(cov.bins) * cov.dim);
  for (int f = 0; f < cov.bins; ++f)
    solve_mwf_single(cov.ryy_at(f), cov.rnn_at(f), cov.dim, ref, fb.at(f));
  return fb;
}

dsp::ComplexSpectrogram filter_apply(const dsp::ComplexSpectrogram& signals,
                                     const FilterBank& fb) {
  if (signals.channels != fb.dim)
    throw ShapeError("filter dimension does not match channel count");
  if (signals.bins != fb.bins)
    throw ShapeError("filter bins do not match spectrogram bins");
  const int T = signals.frames, F = signals.bins, D = fb.dim;
  dsp::ComplexSpectrogram out(signals.config, 1, T);
  const std::size_t chan_stride = static_cast<std::size_t>(T) * F;
  std::vector<cplx> y(D);
  for (int t = 0; t < T; ++t) {
    const cplx* base = signals.data.data() + static_cast<std::size_t>(t) * F;
    for (int f = 0; f < F; ++f) {
      for (int c = 0; c < D; ++c) y[c] = base[c * chan_stride + f];
      out.at(0, t, f) = kern::cdotc(fb.at(f), y.data(), D);
    }
  }
  return out;
}

}  // namespace wasn::danse
