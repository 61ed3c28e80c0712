// kernels/kernels_scalar.cpp
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

// Reference kernels. Plain loops; the AVX2 variants are checked against these.

#include <cmath>

#include "wasn/kernels.hpp"

namespace wasn::kern {
namespace {

double s_dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void s_axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_gemm_nn(const double* A, const double* B, double* C, std::size_t M,
               std::size_t K, std::size_t N) {
  for (std::size_t i = 0; i < M; ++i) {
    const double* a = A + i * K;
    double* c = C + i * N;
    for (std::size_t k = 0; k < K; ++k) {
      const double aik = a[k];
      const double* b = B + k * N;
      for (std::size_t j = 0; j < N; ++j) c[j] += aik * b[j];
    }
  }
}

void s_gemm_nt(const double* A, const double* B, double* C, std::size_t M,
               std::size_t K, std::size_t N) {
  for (std::size_t i = 0; i < M; ++i) {
    const double* a = A + i * K;
    double* c = C + i * N;
    for (std::size_t j = 0; j < N; ++j) c[j] += s_dot(a, B + j * K, K);
  }
}

void s_gemm_tn(const double* A, const double* B, double* C, std::size_t M,
               std::size_t K, std::size_t N) {
  for (std::size_t i = 0; i < M; ++i) {
    const double* a = A + i * K;
    const double* b = B + i * N;
    for (std::size_t k = 0; k < K; ++k) {
      const double aik = a[k];
      double* c = C + k * N;
      for (std::size_t j = 0; j < N; ++j) c[j] += aik * b[j];
    }
  }
}

cplx s_cdotc(const cplx* w, const cplx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wr = w[i].real(), wi = w[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += wr * yr + wi * yi;
    im += wr * yi - wi * yr;
  }
  return {re, im};
}

void s_cherk1(cplx* R, const cplx* y, double wgt, std::size_t d) {
  for (std::size_t i = 0; i < d; ++i) {
    const double ar = wgt * y[i].real(), ai = wgt * y[i].imag();
    cplx* row = R + i * d;
    for (std::size_t j = 0; j < d; ++j) {
      const double yr = y[j].real(), yi = y[j].imag();
      // a * conj(y_j)
      row[j] += cplx(ar * yr + ai * yi, ai * yr - ar * yi);
    }
  }
}

void s_caxpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx(ar * xr - ai * xi, ar * xi + ai * xr);
  }
}

void s_cmag(const cplx* z, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double re = z[i].real(), im = z[i].imag();
    out[i] = std::sqrt(re * re + im * im);
  }
}

}  // namespace

namespace detail {
const Ops scalar_ops = {
    "scalar", s_dot,    s_axpy,  s_gemm_nn, s_gemm_nt,
    s_gemm_tn, s_cdotc, s_cherk1, s_caxpy,  s_cmag,
};
}  // namespace detail

}  // namespace wasn::kern
