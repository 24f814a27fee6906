#include "sparqs/kernels.hpp"

namespace sparqs::kernels::scalar {
namespace {

void zgemm(std::size_t m, std::size_t n, std::size_t k, const cplx* a,
           const cplx* b, cplx* c) {
  for (std::size_t i = 0; i < m; ++i) {
    cplx* crow = c + i * n;
    for (std::size_t j = 0; j < n; ++j) crow[j] = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      const double ar = a[i * k + p].real();
      const double ai = a[i * k + p].imag();
      const cplx* brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) {
        const double br = brow[j].real();
        const double bi = brow[j].imag();
        crow[j] += cplx(ar * br - ai * bi, ar * bi + ai * br);
      }
    }
  }
}

void zdiag_product(std::size_t n, const cplx* a, const cplx* b, cplx* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const cplx x = a[i * n + j];
      const cplx y = b[j * n + i];
      re += x.real() * y.real() - x.imag() * y.imag();
      im += x.real() * y.imag() + x.imag() * y.real();
    }
    out[i] = cplx(re, im);
  }
}

void zhadamard(std::size_t len, const cplx* a, const cplx* b, cplx* c) {
  for (std::size_t i = 0; i < len; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    c[i] = cplx(ar * br - ai * bi, ar * bi + ai * br);
  }
}

void dconvolve(std::size_t n, const double* x, std::size_t half,
               const double* w, double* out) {
  const std::size_t width = 2 * half + 1;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < width; ++j) acc += w[j] * x[i + j];
    out[i] = acc;
  }
}

constexpr KernelTable kTable{Isa::scalar, zgemm, zdiag_product, zhadamard,
                             dconvolve};

}  // namespace

const KernelTable& table() { return kTable; }

}  // namespace sparqs::kernels::scalar
