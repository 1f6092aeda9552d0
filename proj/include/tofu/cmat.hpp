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
#include <vector>

#include "tofu/kernels.hpp"

namespace tofu {

using cplx = std::complex<double>;

// Dense row-major complex matrix sized for spin Hilbert spaces (dim <= 64).
class CMat {
 public:
  CMat() = default;
  explicit CMat(int n) : n_(n), a_(std::size_t(n) * n, cplx{0.0, 0.0}) {}

  static CMat identity(int n) {
    CMat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int dim() const { return n_; }
  cplx* data() { return a_.data(); }
  const cplx* data() const { return a_.data(); }
  std::size_t size() const { return a_.size(); }

  cplx& operator()(int i, int j) { return a_[std::size_t(i) * n_ + j]; }
  const cplx& operator()(int i, int j) const { return a_[std::size_t(i) * n_ + j]; }

  void set_zero() { std::fill(a_.begin(), a_.end(), cplx{0.0, 0.0}); }

  CMat& operator+=(const CMat& o);
  CMat& operator-=(const CMat& o);
  CMat& operator*=(cplx s);

  // this += alpha * o, alpha real
  void add_scaled(double alpha, const CMat& o);

  CMat adjoint() const;
  cplx trace() const;
  double max_abs() const;

  friend CMat operator*(const CMat& a, const CMat& b) {
    CMat c(a.n_);
    kernels::active().matmul(a.data(), b.data(), c.data(), a.n_);
    return c;
  }

 private:
  int n_ = 0;
  std::vector<cplx> a_;
};

CMat mul_adjb(const CMat& a, const CMat& b);               // A * B^H
CMat scale_cols(const CMat& a, const std::vector<cplx>& d);
cplx frob_inner(const CMat& a, const CMat& b);             // trace(A B^H)

// ||A - B||_max
double max_abs_diff(const CMat& a, const CMat& b);
// ||A^H A - 1||_max
double unitarity_defect(const CMat& u);
// ||A - A^H||_max
double hermiticity_defect(const CMat& a);
// Largest singular value of A (via eigenvalues of A^H A).
double spectral_norm(const CMat& a);

// Eigendecomposition of a Hermitian matrix: h = V diag(w) V^H.
void eig_herm(const CMat& h, std::vector<double>& w, CMat& v);

// exp(-i * h * t) for Hermitian h, via eigendecomposition.
CMat expm_i_herm(const CMat& h, double t);

}  // namespace tofu
