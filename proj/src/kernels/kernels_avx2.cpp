// Compiled with -mavx2 -mfma. Nothing in here may run unless
// cpu_has_avx2() said yes.

#include "sparqs/kernels.hpp"

#if defined(SPARQS_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

namespace sparqs::kernels::avx2 {
namespace {

// Two complex doubles per __m256d: (re0, im0, re1, im1).
//   a*b = (ar*br - ai*bi, ar*bi + ai*br)
//       = addsub(ar*b, ai*swap(b))
// and addsub is linear, so the two products are accumulated separately and
// combined once at the end.

void zgemm(std::size_t m, std::size_t n, std::size_t k, const cplx* a,
           const cplx* b, cplx* c) {
  const auto* bd = reinterpret_cast<const double*>(b);
  auto* cd = reinterpret_cast<double*>(c);
  const std::size_t n2 = n & ~std::size_t{1};
  for (std::size_t i = 0; i < m; ++i) {
    const cplx* arow = a + i * k;
    double* crow = cd + 2 * i * n;
    std::size_t j = 0;
    // Four complex outputs per pass keeps two independent FMA chains busy.
    for (; j + 4 <= n; j += 4) {
      __m256d re0 = _mm256_setzero_pd(), im0 = _mm256_setzero_pd();
      __m256d re1 = _mm256_setzero_pd(), im1 = _mm256_setzero_pd();
      for (std::size_t p = 0; p < k; ++p) {
        const __m256d ar = _mm256_set1_pd(arow[p].real());
        const __m256d ai = _mm256_set1_pd(arow[p].imag());
        const double* brow = bd + 2 * (p * n + j);
        const __m256d b0 = _mm256_loadu_pd(brow);
        const __m256d b1 = _mm256_loadu_pd(brow + 4);
        re0 = _mm256_fmadd_pd(ar, b0, re0);
        im0 = _mm256_fmadd_pd(ai, _mm256_permute_pd(b0, 0b0101), im0);
        re1 = _mm256_fmadd_pd(ar, b1, re1);
        im1 = _mm256_fmadd_pd(ai, _mm256_permute_pd(b1, 0b0101), im1);
      }
      _mm256_storeu_pd(crow + 2 * j, _mm256_addsub_pd(re0, im0));
      _mm256_storeu_pd(crow + 2 * j + 4, _mm256_addsub_pd(re1, im1));
    }
    for (; j < n2; j += 2) {
      __m256d re = _mm256_setzero_pd(), im = _mm256_setzero_pd();
      for (std::size_t p = 0; p < k; ++p) {
        const __m256d ar = _mm256_set1_pd(arow[p].real());
        const __m256d ai = _mm256_set1_pd(arow[p].imag());
        const __m256d bv = _mm256_loadu_pd(bd + 2 * (p * n + j));
        re = _mm256_fmadd_pd(ar, bv, re);
        im = _mm256_fmadd_pd(ai, _mm256_permute_pd(bv, 0b0101), im);
      }
      _mm256_storeu_pd(crow + 2 * j, _mm256_addsub_pd(re, im));
    }
    if (j < n) {
      __m128d re = _mm_setzero_pd(), im = _mm_setzero_pd();
      for (std::size_t p = 0; p < k; ++p) {
        const __m128d ar = _mm_set1_pd(arow[p].real());
        const __m128d ai = _mm_set1_pd(arow[p].imag());
        const __m128d bv = _mm_loadu_pd(bd + 2 * (p * n + j));
        re = _mm_fmadd_pd(ar, bv, re);
        im = _mm_fmadd_pd(ai, _mm_permute_pd(bv, 0b01), im);
      }
      _mm_storeu_pd(crow + 2 * j, _mm_addsub_pd(re, im));
    }
  }
}

void zdiag_product(std::size_t n, const cplx* a, const cplx* b, cplx* out) {
  const auto* ad = reinterpret_cast<const double*>(a);
  const auto* bd = reinterpret_cast<const double*>(b);
  for (std::size_t i = 0; i < n; ++i) {
    __m256d re = _mm256_setzero_pd(), im = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
      const __m256d av = _mm256_loadu_pd(ad + 2 * (i * n + j));
      const __m256d bv = _mm256_set_m128d(_mm_loadu_pd(bd + 2 * ((j + 1) * n + i)),
                                           _mm_loadu_pd(bd + 2 * (j * n + i)));
      // b is the broadcast side here: split b into (br, br) and (bi, bi).
      re = _mm256_fmadd_pd(_mm256_movedup_pd(bv), av, re);
      im = _mm256_fmadd_pd(_mm256_permute_pd(bv, 0b1111),
                           _mm256_permute_pd(av, 0b0101), im);
    }
    const __m256d sum = _mm256_addsub_pd(re, im);
    __m128d acc = _mm_add_pd(_mm256_castpd256_pd128(sum),
                             _mm256_extractf128_pd(sum, 1));
    if (j < n) {
      const __m128d av = _mm_loadu_pd(ad + 2 * (i * n + j));
      const __m128d bv = _mm_loadu_pd(bd + 2 * (j * n + i));
      const __m128d prod = _mm_addsub_pd(
          _mm_mul_pd(_mm_movedup_pd(bv), av),
          _mm_mul_pd(_mm_permute_pd(bv, 0b11), _mm_permute_pd(av, 0b01)));
      acc = _mm_add_pd(acc, prod);
    }
    _mm_storeu_pd(reinterpret_cast<double*>(out + i), acc);
  }
}

void zhadamard(std::size_t len, const cplx* a, const cplx* b, cplx* c) {
  const auto* ad = reinterpret_cast<const double*>(a);
  const auto* bd = reinterpret_cast<const double*>(b);
  auto* cd = reinterpret_cast<double*>(c);
  std::size_t i = 0;
  for (; i + 2 <= len; i += 2) {
    const __m256d av = _mm256_loadu_pd(ad + 2 * i);
    const __m256d bv = _mm256_loadu_pd(bd + 2 * i);
    const __m256d prod = _mm256_addsub_pd(
        _mm256_mul_pd(_mm256_movedup_pd(av), bv),
        _mm256_mul_pd(_mm256_permute_pd(av, 0b1111),
                      _mm256_permute_pd(bv, 0b0101)));
    _mm256_storeu_pd(cd + 2 * i, prod);
  }
  if (i < len) {
    const __m128d av = _mm_loadu_pd(ad + 2 * i);
    const __m128d bv = _mm_loadu_pd(bd + 2 * i);
    const __m128d prod =
        _mm_addsub_pd(_mm_mul_pd(_mm_movedup_pd(av), bv),
                      _mm_mul_pd(_mm_permute_pd(av, 0b11), _mm_permute_pd(bv, 0b01)));
    _mm_storeu_pd(cd + 2 * i, prod);
  }
}

void dconvolve(std::size_t n, const double* x, std::size_t half,
               const double* w, double* out) {
  const std::size_t width = 2 * half + 1;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < width; ++j)
      acc = _mm256_fmadd_pd(_mm256_set1_pd(w[j]), _mm256_loadu_pd(x + i + j), acc);
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < width; ++j) acc = std::fma(w[j], x[i + j], acc);
    out[i] = acc;
  }
}

constexpr KernelTable kTable{Isa::avx2, zgemm, zdiag_product, zhadamard,
                             dconvolve};

}  // namespace

const KernelTable* table() { return &kTable; }

}  // namespace sparqs::kernels::avx2

#else

namespace sparqs::kernels::avx2 {
const KernelTable* table() { return nullptr; }
}  // namespace sparqs::kernels::avx2

#endif
