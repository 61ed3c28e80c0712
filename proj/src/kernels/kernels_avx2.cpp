// kernels/kernels_avx2.cpp
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

// AVX2+FMA kernels. This translation unit is compiled with -mavx2 -mfma and is
// reached only after the dispatcher has confirmed cpu support.
//
// gemm_nn keeps a fixed per-row accumulation order over k (the j blocking
// depends only on N, the k loop is sequential), so a row's output is identical
// whether it is computed inside a tall call or a short one. The estimator's
// whole-utterance inference path relies on this.

#include "wasn/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>

namespace wasn::kern {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double a_dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void a_axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d yv = _mm256_loadu_pd(y + i);
    yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv);
    _mm256_storeu_pd(y + i, yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

// One row of C += A * B: c[j] += sum_k a[k] * B[k*N + j].
// j is blocked 16 / 4 / scalar; each block's k loop runs start to end.
inline void gemm_row(const double* a, const double* B, double* c, std::size_t K,
                     std::size_t N) {
  std::size_t j = 0;
  for (; j + 16 <= N; j += 16) {
    __m256d c0 = _mm256_loadu_pd(c + j);
    __m256d c1 = _mm256_loadu_pd(c + j + 4);
    __m256d c2 = _mm256_loadu_pd(c + j + 8);
    __m256d c3 = _mm256_loadu_pd(c + j + 12);
    const double* b = B + j;
    for (std::size_t k = 0; k < K; ++k, b += N) {
      const __m256d ak = _mm256_set1_pd(a[k]);
      c0 = _mm256_fmadd_pd(ak, _mm256_loadu_pd(b), c0);
      c1 = _mm256_fmadd_pd(ak, _mm256_loadu_pd(b + 4), c1);
      c2 = _mm256_fmadd_pd(ak, _mm256_loadu_pd(b + 8), c2);
      c3 = _mm256_fmadd_pd(ak, _mm256_loadu_pd(b + 12), c3);
    }
    _mm256_storeu_pd(c + j, c0);
    _mm256_storeu_pd(c + j + 4, c1);
    _mm256_storeu_pd(c + j + 8, c2);
    _mm256_storeu_pd(c + j + 12, c3);
  }
  for (; j + 4 <= N; j += 4) {
    __m256d c0 = _mm256_loadu_pd(c + j);
    const double* b = B + j;
    for (std::size_t k = 0; k < K; ++k, b += N)
      c0 = _mm256_fmadd_pd(_mm256_set1_pd(a[k]), _mm256_loadu_pd(b), c0);
    _mm256_storeu_pd(c + j, c0);
  }
  for (; j < N; ++j) {
    double s = c[j];
    const double* b = B + j;
    for (std::size_t k = 0; k < K; ++k, b += N) s = std::fma(a[k], *b, s);
    c[j] = s;
  }
}

void a_gemm_nn(const double* A, const double* B, double* C, std::size_t M,
               std::size_t K, std::size_t N) {
  for (std::size_t i = 0; i < M; ++i) gemm_row(A + i * K, B, C + i * N, K, N);
}

void a_gemm_nt(const double* A, const double* B, double* C, std::size_t M,
               std::size_t K, std::size_t N) {
  for (std::size_t i = 0; i < M; ++i) {
    const double* a = A + i * K;
    double* c = C + i * N;
    for (std::size_t j = 0; j < N; ++j) c[j] += a_dot(a, B + j * K, K);
  }
}

void a_gemm_tn(const double* A, const double* B, double* C, std::size_t M,
               std::size_t K, std::size_t N) {
  for (std::size_t i = 0; i < M; ++i) {
    const double* a = A + i * K;
    const double* b = B + i * N;
    for (std::size_t k = 0; k < K; ++k) a_axpy(a[k], b, C + k * N, N);
  }
}

// Complex lanes: [re0 im0 re1 im1]. fmsubadd adds on even lanes and subtracts
// on odd lanes, which matches (re, im) of a conjugated product.
cplx a_cdotc(const cplx* w, const cplx* y, std::size_t n) {
  const double* wp = reinterpret_cast<const double*>(w);
  const double* yp = reinterpret_cast<const double*>(y);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;  // complex index
  for (; i + 4 <= n; i += 4) {
    const __m256d w0 = _mm256_loadu_pd(wp + 2 * i);
    const __m256d w1 = _mm256_loadu_pd(wp + 2 * i + 4);
    const __m256d y0 = _mm256_loadu_pd(yp + 2 * i);
    const __m256d y1 = _mm256_loadu_pd(yp + 2 * i + 4);
    // even: wr*yr + wi*yi ; odd: wr*yi - wi*yr
    const __m256d t0 = _mm256_mul_pd(_mm256_permute_pd(w0, 0b1111),
                                     _mm256_permute_pd(y0, 0b0101));
    const __m256d t1 = _mm256_mul_pd(_mm256_permute_pd(w1, 0b1111),
                                     _mm256_permute_pd(y1, 0b0101));
    acc0 = _mm256_add_pd(acc0, _mm256_fmsubadd_pd(_mm256_movedup_pd(w0), y0, t0));
    acc1 = _mm256_add_pd(acc1, _mm256_fmsubadd_pd(_mm256_movedup_pd(w1), y1, t1));
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  // acc0 = [re_a, im_a, re_b, im_b]
  const __m128d lo = _mm256_castpd256_pd128(acc0);
  const __m128d hi = _mm256_extractf128_pd(acc0, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  double re = _mm_cvtsd_f64(s);
  double im = _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
  for (; i < n; ++i) {
    const double wr = w[i].real(), wi = w[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += wr * yr + wi * yi;
    im += wr * yi - wi * yr;
  }
  return {re, im};
}

void a_cherk1(cplx* R, const cplx* y, double wgt, std::size_t d) {
  const double* yp = reinterpret_cast<const double*>(y);
  for (std::size_t i = 0; i < d; ++i) {
    const double ar = wgt * y[i].real(), ai = wgt * y[i].imag();
    const __m256d arv = _mm256_set1_pd(ar);
    const __m256d aiv = _mm256_set1_pd(ai);
    double* row = reinterpret_cast<double*>(R + i * d);
    std::size_t j = 0;
    for (; j + 2 <= d; j += 2) {
      const __m256d yv = _mm256_loadu_pd(yp + 2 * j);
      const __m256d ys = _mm256_permute_pd(yv, 0b0101);  // [yi, yr]
      // even: ai*yi + ar*yr ; odd: ai*yr - ar*yi  == a * conj(y_j)
      const __m256d t = _mm256_mul_pd(arv, yv);
      const __m256d res = _mm256_fmsubadd_pd(aiv, ys, t);
      _mm256_storeu_pd(row + 2 * j, _mm256_add_pd(_mm256_loadu_pd(row + 2 * j), res));
    }
    for (; j < d; ++j) {
      const double yr = y[j].real(), yi = y[j].imag();
      R[i * d + j] += cplx(ar * yr + ai * yi, ai * yr - ar * yi);
    }
  }
}

void a_caxpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  const __m256d arv = _mm256_set1_pd(ar);
  const __m256d aiv = _mm256_set1_pd(ai);
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
    const __m256d xs = _mm256_permute_pd(xv, 0b0101);  // [xi, xr]
    // even: ar*xr - ai*xi ; odd: ar*xi + ai*xr
    const __m256d t = _mm256_mul_pd(aiv, xs);
    const __m256d res = _mm256_fmaddsub_pd(arv, xv, t);
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i), res));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx(ar * xr - ai * xi, ar * xi + ai * xr);
  }
}

void a_cmag(const cplx* z, double* out, std::size_t n) {
  const double* zp = reinterpret_cast<const double*>(z);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = _mm256_loadu_pd(zp + 2 * i);      // [r0 i0 r1 i1]
    const __m256d v1 = _mm256_loadu_pd(zp + 2 * i + 4);  // [r2 i2 r3 i3]
    const __m256d sq0 = _mm256_mul_pd(v0, v0);
    const __m256d sq1 = _mm256_mul_pd(v1, v1);
    // hadd: [|z0|^2, |z2|^2, |z1|^2, |z3|^2] -> reorder to natural order
    const __m256d h = _mm256_hadd_pd(sq0, sq1);
    const __m256d mag2 = _mm256_permute4x64_pd(h, _MM_SHUFFLE(3, 1, 2, 0));
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(mag2));
  }
  for (; i < n; ++i) {
    const double re = z[i].real(), im = z[i].imag();
    out[i] = std::sqrt(re * re + im * im);
  }
}

}  // namespace

namespace detail {
const Ops avx2_ops = {
    "avx2",   a_dot,    a_axpy,   a_gemm_nn, a_gemm_nt,
    a_gemm_tn, a_cdotc, a_cherk1, a_caxpy,   a_cmag,
};
}  // namespace detail

}  // namespace wasn::kern

#else  // non-x86: table exists for linkage but is never selected.

namespace wasn::kern::detail {
const Ops avx2_ops = {"avx2-unavailable", nullptr, nullptr, nullptr, nullptr,
                      nullptr, nullptr, nullptr, nullptr, nullptr};
}  // namespace wasn::kern::detail

#endif
