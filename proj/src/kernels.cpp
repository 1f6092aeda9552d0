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

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace tofu::kernels {

namespace {

void matmul_scalar(const cplx* a, const cplx* b, cplx* c, int n) {
  std::memset(static_cast<void*>(c), 0, sizeof(cplx) * std::size_t(n) * n);
  for (int i = 0; i < n; ++i) {
    const cplx* arow = a + std::size_t(i) * n;
    cplx* crow = c + std::size_t(i) * n;
    for (int k = 0; k < n; ++k) {
      const cplx aik = arow[k];
      const cplx* brow = b + std::size_t(k) * n;
      for (int j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
}

void matmul_adjb_scalar(const cplx* a, const cplx* b, cplx* c, int n) {
  for (int i = 0; i < n; ++i) {
    const cplx* arow = a + std::size_t(i) * n;
    for (int j = 0; j < n; ++j) {
      const cplx* brow = b + std::size_t(j) * n;
      cplx s = 0.0;
      for (int k = 0; k < n; ++k) s += arow[k] * std::conj(brow[k]);
      c[std::size_t(i) * n + j] = s;
    }
  }
}

void scale_cols_scalar(const cplx* a, const cplx* d, cplx* b, int n) {
  for (int i = 0; i < n; ++i) {
    const cplx* arow = a + std::size_t(i) * n;
    cplx* brow = b + std::size_t(i) * n;
    for (int j = 0; j < n; ++j) brow[j] = arow[j] * d[j];
  }
}

void axpy_real_scalar(double alpha, const double* x, double* y, std::size_t m) {
  for (std::size_t i = 0; i < m; ++i) y[i] += alpha * x[i];
}

cplx frob_inner_scalar(const cplx* a, const cplx* b, std::size_t m) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < m; ++i) s += a[i] * std::conj(b[i]);
  return s;
}

std::atomic<const Dispatch*> g_active{nullptr};
std::once_flag g_once;

const Dispatch* select_default() {
#if defined(__x86_64__) || defined(__i386__)
  const char* env = std::getenv("TOFU_KERNELS");
  if (env != nullptr) {
    const std::string s(env);
    if (s == "scalar") return &scalar_kernels;
    if (s == "avx2" && avx2_supported()) return &avx2_kernels;
  }
  if (avx2_supported()) return &avx2_kernels;
#endif
  return &scalar_kernels;
}

}  // namespace

const Dispatch scalar_kernels = {matmul_scalar,     matmul_adjb_scalar,
                                 scale_cols_scalar, axpy_real_scalar,
                                 frob_inner_scalar, "scalar"};

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Dispatch& active() {
  std::call_once(g_once, [] { g_active.store(select_default()); });
  return *g_active.load();
}

void force(const std::string& name) {
  std::call_once(g_once, [] { g_active.store(select_default()); });
  if (name == "scalar") {
    g_active.store(&scalar_kernels);
    return;
  }
#if defined(__x86_64__) || defined(__i386__)
  if (name == "avx2") {
    if (!avx2_supported()) throw std::runtime_error("kernels: AVX2 not supported on this CPU");
    g_active.store(&avx2_kernels);
    return;
  }
#endif
  throw std::runtime_error("kernels: unknown implementation '" + name + "'");
}

}  // namespace tofu::kernels
