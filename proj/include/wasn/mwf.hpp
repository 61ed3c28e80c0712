// wasn/mwf.hpp
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

#ifndef WASN_MWF_HPP
#define WASN_MWF_HPP

#include <string>
#include <vector>

#include "wasn/covariance.hpp"

namespace wasn::danse {

// Per-frequency multichannel Wiener filter bank: one complex weight vector
// per frequency, all of dimension D. The reference selector records which
// (node, mic) realizes the distortion-free target.
struct FilterBank {
  int bins = 0;
  int dim = 0;
  std::vector<cplx> w;  // [F][D]
  std::pair<int, int> ref_selector = {0, 0};  // (node, mic)

  cplx* at(int f) { return w.data() + static_cast<std::size_t>(f) * dim; }
  const cplx* at(int f) const {
    return w.data() + static_cast<std::size_t>(f) * dim;
  }
  void check_finite() const;

  // Interleaved float64 re/im dump with a small JSON sidecar.
  void save(const std::string& path) const;
  static FilterBank load(const std::string& path);
};

inline constexpr double kDiagLoadScale = 1e-9;

// w = (Ryy + dI)^-1 (Ryy - Rnn)_+ e_ref with d = 1e-9 tr(Ryy)/D and the
// speech covariance eigenvalue-floored at zero.
FilterBank solve_mwf(const CovariancePair& cov, int ref);

// Single-frequency solve on raw row-major Hermitian matrices; used by the
// batch iteration as well so both paths share one implementation of the
// estimator.
void solve_mwf_single(const cplx* ryy, const cplx* rnn, int dim, int ref,
                      cplx* w_out);

// out(t, f) = w(f)^H y(t, f)
dsp::ComplexSpectrogram filter_apply(const dsp::ComplexSpectrogram& signals,
                                     const FilterBank& fb);

}  // namespace wasn::danse

#endif  // WASN_MWF_HPP
