#include "doctest.h"

#include <random>

#include "tofu/cmat.hpp"
#include "tofu/constants.hpp"
#include "tofu/kernels.hpp"

using tofu::CMat;
using tofu::cplx;
namespace kernels = tofu::kernels;

namespace {

std::mt19937_64 rng(20260809);

CMat random_matrix(int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMat m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(u(rng), u(rng));
  return m;
}

double rel_diff(const CMat& a, const CMat& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a.data()[i] - b.data()[i]));
    den = std::max(den, std::abs(a.data()[i]));
  }
  return den > 0.0 ? num / den : num;
}

// textbook triple loop, independent of the kernel implementations
CMat naive_matmul(const CMat& a, const CMat& b) {
  CMat c(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) {
      cplx s = 0.0;
      for (int k = 0; k < a.dim(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

}  // namespace

TEST_CASE("scalar kernels match a naive triple loop") {
  for (int n : {2, 4, 8, 16, 64}) {
    const CMat a = random_matrix(n);
    const CMat b = random_matrix(n);
    CMat c(n);
    kernels::scalar_kernels.matmul(a.data(), b.data(), c.data(), n);
    CHECK(rel_diff(c, naive_matmul(a, b)) < 1e-13);
  }
}

TEST_CASE("avx2 kernels are equivalent to the scalar reference") {
  if (!kernels::avx2_supported()) {
    MESSAGE("AVX2 not available; skipping equivalence checks");
    return;
  }
#if defined(__x86_64__) || defined(__i386__)
  for (int n : {2, 4, 8, 16, 32, 64}) {
    const CMat a = random_matrix(n);
    const CMat b = random_matrix(n);

    CMat cs(n), cv(n);
    kernels::scalar_kernels.matmul(a.data(), b.data(), cs.data(), n);
    kernels::avx2_kernels.matmul(a.data(), b.data(), cv.data(), n);
    CHECK(rel_diff(cv, cs) < 1e-13);

    kernels::scalar_kernels.matmul_adjb(a.data(), b.data(), cs.data(), n);
    kernels::avx2_kernels.matmul_adjb(a.data(), b.data(), cv.data(), n);
    CHECK(rel_diff(cv, cs) < 1e-13);

    std::vector<cplx> d(static_cast<std::size_t>(n));
    for (auto& x : d) x = cplx(0.3, -0.7);
    kernels::scalar_kernels.scale_cols(a.data(), d.data(), cs.data(), n);
    kernels::avx2_kernels.scale_cols(a.data(), d.data(), cv.data(), n);
    CHECK(rel_diff(cv, cs) < 1e-14);

    CMat ys = b, yv = b;
    kernels::scalar_kernels.axpy_real(1.7, reinterpret_cast<const double*>(a.data()),
                                      reinterpret_cast<double*>(ys.data()), 2 * a.size());
    kernels::avx2_kernels.axpy_real(1.7, reinterpret_cast<const double*>(a.data()),
                                    reinterpret_cast<double*>(yv.data()), 2 * a.size());
    CHECK(rel_diff(yv, ys) < 1e-14);

    const cplx fs = kernels::scalar_kernels.frob_inner(a.data(), b.data(), a.size());
    const cplx fv = kernels::avx2_kernels.frob_inner(a.data(), b.data(), a.size());
    CHECK(std::abs(fs - fv) < 1e-10 * std::abs(fs));
  }
#endif
}

TEST_CASE("dispatch honours force()") {
  const std::string prev = kernels::active().name;
  kernels::force("scalar");
  CHECK(std::string(kernels::active().name) == "scalar");
  if (kernels::avx2_supported()) {
    kernels::force("avx2");
    CHECK(std::string(kernels::active().name) == "avx2");
  }
  CHECK_THROWS(kernels::force("neon"));
  kernels::force(prev);
}

TEST_CASE("hermitian matrix exponential is unitary and correct on a known case") {
  // exp(-i sigma_x/2 * pi) = -i sigma_x rotation: |0> -> -i|1>
  CMat sx(2);
  sx(0, 1) = 0.5;
  sx(1, 0) = 0.5;
  const CMat u = tofu::expm_i_herm(sx, tofu::constants::pi);
  CHECK(tofu::unitarity_defect(u) < 1e-14);
  CHECK(std::abs(u(0, 0)) < 1e-14);
  CHECK(std::abs(u(1, 0) - cplx(0.0, -1.0)) < 1e-14);

  const CMat h = [&] {
    CMat a = random_matrix(8);
    CMat b = a.adjoint();
    b += a;
    return b;
  }();
  const CMat u8 = tofu::expm_i_herm(h, 0.37);
  CHECK(tofu::unitarity_defect(u8) < 1e-13);
}
