/* Copyright 2026 The Tofusim Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <complex>
#include <cstddef>
#include <string>

// Dense complex kernels for the small (dim <= 64) matrices that dominate the
// propagation inner loops. A scalar reference implementation always exists;
// an AVX2/FMA variant is selected at runtime when the CPU supports it.
// Matrices are row-major, contiguous, n x n.

namespace tofu::kernels {

using cplx = std::complex<double>;

struct Dispatch {
  // C = A * B
  void (*matmul)(const cplx* a, const cplx* b, cplx* c, int n);
  // C = A * B^H
  void (*matmul_adjb)(const cplx* a, const cplx* b, cplx* c, int n);
  // B[i,j] = A[i,j] * d[j]
  void (*scale_cols)(const cplx* a, const cplx* d, cplx* b, int n);
  // y[i] += alpha * x[i] over m doubles (used for Hermitian accumulation,
  // viewing complex buffers as interleaved doubles)
  void (*axpy_real)(double alpha, const double* x, double* y, std::size_t m);
  // sum_ij A[i,j] * conj(B[i,j]); equals trace(A * B^H), and trace(A*B) when
  // B is Hermitian
  cplx (*frob_inner)(const cplx* a, const cplx* b, std::size_t m);
  const char* name;
};

// Active kernel set. Selected once: AVX2 when available, else scalar.
// TOFU_KERNELS=scalar|avx2 in the environment overrides the choice.
const Dispatch& active();

// Force a specific implementation ("scalar" or "avx2"); throws if unknown or
// unsupported on this CPU. Intended for equivalence tests.
void force(const std::string& name);

bool avx2_supported();

extern const Dispatch scalar_kernels;
#if defined(__x86_64__) || defined(__i386__)
extern const Dispatch avx2_kernels;
#endif

}  // namespace tofu::kernels
