// wasn/kernels.hpp
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

#ifndef WASN_KERNELS_HPP
#define WASN_KERNELS_HPP

#include <complex>
#include <cstddef>

// Arithmetic inner loops shared by the covariance estimator, the filters and
// the neural layers. Every kernel has a scalar reference implementation and an
// AVX2+FMA variant; the active table is chosen at runtime from cpuid (override
// with WASN_KERNELS=scalar or set_backend). The two variants agree to rounding
// (FMA contraction), which the kernel tests enforce.

namespace wasn::kern {

using cplx = std::complex<double>;

struct Ops {
  const char* name;

  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // C[M x N] += A[M x K] * B[K x N], all row-major. Per-row accumulation order
  // over k is fixed and independent of M, so outputs are reproducible when the
  // same rows appear in differently sized calls.
  void (*gemm_nn)(const double* A, const double* B, double* C, std::size_t M,
                  std::size_t K, std::size_t N);
  // C[M x N] += A[M x K] * B[N x K]^T
  void (*gemm_nt)(const double* A, const double* B, double* C, std::size_t M,
                  std::size_t K, std::size_t N);
  // C[K x N] += A[M x K]^T * B[M x N]
  void (*gemm_tn)(const double* A, const double* B, double* C, std::size_t M,
                  std::size_t K, std::size_t N);

  // sum over i of conj(w[i]) * y[i]
  cplx (*cdotc)(const cplx* w, const cplx* y, std::size_t n);
  // R[d x d] += wgt * y * y^H  (row-major, full matrix)
  void (*cherk1)(cplx* R, const cplx* y, double wgt, std::size_t d);
  // y[i] += a * x[i]
  void (*caxpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  // out[i] = |z[i]|
  void (*cmag)(const cplx* z, double* out, std::size_t n);
};

// Active kernel table.
const Ops& ops();

// "scalar", "avx2" or "auto". Throws if the backend is unavailable.
void set_backend(const char* name);
const char* backend_name();
bool avx2_available();

namespace detail {
extern const Ops scalar_ops;
extern const Ops avx2_ops;  // valid only if avx2_available()
}  // namespace detail

// Convenience forwarders.
inline double dot(const double* a, const double* b, std::size_t n) {
  return ops().dot(a, b, n);
}
inline void axpy(double a, const double* x, double* y, std::size_t n) {
  ops().axpy(a, x, y, n);
}
inline void gemm_nn(const double* A, const double* B, double* C, std::size_t M,
                    std::size_t K, std::size_t N) {
  ops().gemm_nn(A, B, C, M, K, N);
}
inline void gemm_nt(const double* A, const double* B, double* C, std::size_t M,
                    std::size_t K, std::size_t N) {
  ops().gemm_nt(A, B, C, M, K, N);
}
inline void gemm_tn(const double* A, const double* B, double* C, std::size_t M,
                    std::size_t K, std::size_t N) {
  ops().gemm_tn(A, B, C, M, K, N);
}
inline cplx cdotc(const cplx* w, const cplx* y, std::size_t n) {
  return ops().cdotc(w, y, n);
}
inline void cherk1(cplx* R, const cplx* y, double wgt, std::size_t d) {
  ops().cherk1(R, y, wgt, d);
}
inline void caxpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
  ops().caxpy(a, x, y, n);
}
inline void cmag(const cplx* z, double* out, std::size_t n) {
  ops().cmag(z, out, n);
}

}  // namespace wasn::kern

#endif  // WASN_KERNELS_HPP
