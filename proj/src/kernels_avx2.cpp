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
#include "tofu/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cstring>

// One __m256d holds two complex<double> values as (re0, im0, re1, im1).
// Complex arithmetic uses the usual permute/fmaddsub pattern.

namespace tofu::kernels {
namespace {

inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

void matmul_avx2(const cplx* a, const cplx* b, cplx* c, int n) {
  std::memset(static_cast<void*>(c), 0, sizeof(cplx) * std::size_t(n) * n);
  const int nd = 2 * n;  // doubles per row
  for (int i = 0; i < n; ++i) {
    const cplx* arow = a + std::size_t(i) * n;
    double* crow = dp(c + std::size_t(i) * n);
    for (int k = 0; k < n; ++k) {
      const cplx aik = arow[k];
      const __m256d ar = _mm256_set1_pd(aik.real());
      const __m256d ai = _mm256_set1_pd(aik.imag());
      const double* brow = dp(b + std::size_t(k) * n);
      int j = 0;
      for (; j + 4 <= nd; j += 4) {
        const __m256d bv = _mm256_loadu_pd(brow + j);
        const __m256d bs = _mm256_permute_pd(bv, 0x5);
        const __m256d cv = _mm256_loadu_pd(crow + j);
        // (ar*br - ai*bi, ar*bi + ai*br) accumulated into c
        const __m256d t = _mm256_mul_pd(ai, bs);
        const __m256d prod = _mm256_fmaddsub_pd(ar, bv, t);
        _mm256_storeu_pd(crow + j, _mm256_add_pd(cv, prod));
      }
      // n is even for all spin-space dims, but keep a tail for generality
      for (; j < nd; j += 2) {
        const cplx bj = b[std::size_t(k) * n + j / 2];
        c[std::size_t(i) * n + j / 2] += aik * bj;
      }
    }
  }
}

inline cplx hsum_split(__m256d re_acc, __m256d im_acc) {
  // re_acc lanes all add; im_acc lanes add with alternating signs already
  // applied by the caller
  alignas(32) double r[4], m[4];
  _mm256_store_pd(r, re_acc);
  _mm256_store_pd(m, im_acc);
  return {r[0] + r[1] + r[2] + r[3], m[0] + m[1] + m[2] + m[3]};
}

inline cplx row_dot_conj(const double* x, const double* y, int nd) {
  // sum_k x_k * conj(y_k) with x,y interleaved complex
  const __m256d sign_odd = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  __m256d re = _mm256_setzero_pd();
  __m256d im = _mm256_setzero_pd();
  int j = 0;
  for (; j + 4 <= nd; j += 4) {
    const __m256d xv = _mm256_loadu_pd(x + j);
    const __m256d yv = _mm256_loadu_pd(y + j);
    re = _mm256_fmadd_pd(xv, yv, re);  // xr*yr, xi*yi -> add
    const __m256d xs = _mm256_permute_pd(xv, 0x5);
    const __m256d yn = _mm256_xor_pd(yv, sign_odd);  // yr, -yi
    im = _mm256_fmadd_pd(xs, yn, im);                // xi*yr, -xr*yi -> add
  }
  cplx s = hsum_split(re, im);
  for (; j < nd; j += 2) {
    const cplx xv(x[j], x[j + 1]);
    const cplx yv(y[j], y[j + 1]);
    s += xv * std::conj(yv);
  }
  return s;
}

void matmul_adjb_avx2(const cplx* a, const cplx* b, cplx* c, int n) {
  const int nd = 2 * n;
  for (int i = 0; i < n; ++i) {
    const double* arow = dp(a + std::size_t(i) * n);
    for (int j = 0; j < n; ++j) {
      c[std::size_t(i) * n + j] = row_dot_conj(arow, dp(b + std::size_t(j) * n), nd);
    }
  }
}

void scale_cols_avx2(const cplx* a, const cplx* d, cplx* b, int n) {
  const int nd = 2 * n;
  const double* dd = dp(d);
  for (int i = 0; i < n; ++i) {
    const double* arow = dp(a + std::size_t(i) * n);
    double* brow = dp(b + std::size_t(i) * n);
    int j = 0;
    for (; j + 4 <= nd; j += 4) {
      const __m256d av = _mm256_loadu_pd(arow + j);
      const __m256d dv = _mm256_loadu_pd(dd + j);
      const __m256d are = _mm256_movedup_pd(av);       // ar, ar
      const __m256d aim = _mm256_permute_pd(av, 0xF);  // ai, ai
      const __m256d ds = _mm256_permute_pd(dv, 0x5);   // di, dr
      const __m256d t = _mm256_mul_pd(aim, ds);
      _mm256_storeu_pd(brow + j, _mm256_fmaddsub_pd(are, dv, t));
    }
    for (; j < nd; j += 2)
      b[std::size_t(i) * n + j / 2] = a[std::size_t(i) * n + j / 2] * d[j / 2];
  }
}

void axpy_real_avx2(double alpha, const double* x, double* y, std::size_t m) {
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x + i);
    const __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, xv, yv));
  }
  for (; i < m; ++i) y[i] += alpha * x[i];
}

cplx frob_inner_avx2(const cplx* a, const cplx* b, std::size_t m) {
  return row_dot_conj(dp(a), dp(b), int(2 * m));
}

}  // namespace

const Dispatch avx2_kernels = {matmul_avx2,     matmul_adjb_avx2, scale_cols_avx2,
                               axpy_real_avx2,  frob_inner_avx2,  "avx2"};

}  // namespace tofu::kernels

#endif  // x86
