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
#include "tofu/cmat.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace tofu {

namespace {
using EigenRowMat =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
}

CMat& CMat::operator+=(const CMat& o) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

CMat& CMat::operator-=(const CMat& o) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

CMat& CMat::operator*=(cplx s) {
  for (auto& x : a_) x *= s;
  return *this;
}

void CMat::add_scaled(double alpha, const CMat& o) {
  kernels::active().axpy_real(alpha, reinterpret_cast<const double*>(o.data()),
                              reinterpret_cast<double*>(data()), 2 * a_.size());
}

CMat CMat::adjoint() const {
  CMat r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

cplx CMat::trace() const {
  cplx s = 0.0;
  for (int i = 0; i < n_; ++i) s += (*this)(i, i);
  return s;
}

double CMat::max_abs() const {
  double m = 0.0;
  for (const auto& x : a_) m = std::max(m, std::abs(x));
  return m;
}

CMat mul_adjb(const CMat& a, const CMat& b) {
  CMat c(a.dim());
  kernels::active().matmul_adjb(a.data(), b.data(), c.data(), a.dim());
  return c;
}

CMat scale_cols(const CMat& a, const std::vector<cplx>& d) {
  CMat b(a.dim());
  kernels::active().scale_cols(a.data(), d.data(), b.data(), a.dim());
  return b;
}

cplx frob_inner(const CMat& a, const CMat& b) {
  return kernels::active().frob_inner(a.data(), b.data(), a.size());
}

double max_abs_diff(const CMat& a, const CMat& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double unitarity_defect(const CMat& u) {
  CMat g = mul_adjb(u, u);  // U U^H
  for (int i = 0; i < g.dim(); ++i) g(i, i) -= 1.0;
  return g.max_abs();
}

double hermiticity_defect(const CMat& a) {
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j <= i; ++j)
      m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
  return m;
}

double spectral_norm(const CMat& a) {
  Eigen::Map<const EigenRowMat> m(a.data(), a.dim(), a.dim());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

void eig_herm(const CMat& h, std::vector<double>& w, CMat& v) {
  const int n = h.dim();
  Eigen::Map<const EigenRowMat> m(h.data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eig_herm: eigendecomposition failed");
  w.resize(std::size_t(n));
  for (int i = 0; i < n; ++i) w[std::size_t(i)] = es.eigenvalues()(i);
  if (v.dim() != n) v = CMat(n);
  Eigen::Map<EigenRowMat>(v.data(), n, n) = es.eigenvectors();
}

CMat expm_i_herm(const CMat& h, double t) {
  std::vector<double> w;
  CMat v;
  eig_herm(h, w, v);
  std::vector<cplx> ph(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    ph[i] = std::polar(1.0, -w[i] * t);
  const CMat scaled = scale_cols(v, ph);
  return mul_adjb(scaled, v);  // V e^{-i w t} V^H
}

}  // namespace tofu
