#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference in
// kernels::scalar and, where the target supports it, an AVX2/FMA variant in
// kernels::avx2. Callers go through active(), which picks the widest ISA the
// running CPU reports; tests pin each table explicitly and compare.

#include <cstddef>
#include <string_view>

#include "sparqs/matrix.hpp"

namespace sparqs::kernels {

enum class Isa { scalar, avx2 };

std::string_view name(Isa isa);

struct KernelTable {
  Isa isa;
  /// c[m x n] = a[m x k] * b[k x n], all row-major and densely packed.
  void (*zgemm)(std::size_t m, std::size_t n, std::size_t k, const cplx* a,
                const cplx* b, cplx* c);
  /// out[i] = sum_j a[i*n + j] * b[j*n + i] for i < n, i.e. diag(a * b) for
  /// square n x n operands.
  void (*zdiag_product)(std::size_t n, const cplx* a, const cplx* b, cplx* out);
  /// c[i] = a[i] * b[i] for i < len.
  void (*zhadamard)(std::size_t len, const cplx* a, const cplx* b, cplx* c);
  /// Real correlation with a symmetric kernel of odd length 2h+1:
  /// out[i] = sum_{j=-h..h} w[j+h] * x[i+j], x padded by h samples on both
  /// sides (x has n + 2h entries, out has n).
  void (*dconvolve)(std::size_t n, const double* x_padded, std::size_t half,
                    const double* w, double* out);
};

namespace scalar {
const KernelTable& table();
}

namespace avx2 {
/// Null when the library was built without AVX2 support.
const KernelTable* table();
}

bool cpu_has_avx2();

/// Widest table usable on this CPU, unless overridden by force().
const KernelTable& active();

/// Pin dispatch (tests, benchmarks). Throws if the ISA is unavailable.
void force(Isa isa);
/// Return to automatic selection.
void reset();

}  // namespace sparqs::kernels
