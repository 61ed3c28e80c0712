// wasn/fft.hpp
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

#ifndef WASN_FFT_HPP
#define WASN_FFT_HPP

#include <cstddef>
#include <vector>

#include "wasn/common.hpp"

namespace wasn::dsp {

// Iterative radix-2 complex FFT, double precision, power-of-two sizes only.
class Fft {
 public:
  explicit Fft(std::size_t n);

  void forward(cplx* data) const;  // in place, e^{-i2pi jk/n}
  void inverse(cplx* data) const;  // in place, scaled by 1/n

  std::size_t size() const { return n_; }

 private:
  void transform(cplx* data, bool inv) const;

  std::size_t n_;
  unsigned log2n_;
  std::vector<std::uint32_t> bitrev_;
  std::vector<cplx> twiddle_;  // exp(-i 2 pi k / n), k in [0, n/2)
};

std::size_t next_pow2(std::size_t n);

// Full linear convolution, output length x.size() + h.size() - 1.
std::vector<double> fft_convolve(const std::vector<double>& x,
                                 const std::vector<double>& h);

}  // namespace wasn::dsp

#endif  // WASN_FFT_HPP
