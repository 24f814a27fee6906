#include <random>
#include <vector>

#include "doctest.h"
#include "sparqs/kernels.hpp"
#include "sparqs/objective.hpp"

using namespace sparqs;

namespace {

std::vector<cplx> random_complex(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<cplx> v(n);
  for (auto& x : v) x = cplx(nd(rng), nd(rng));
  return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// The reference the scalar table itself is checked against.
std::vector<cplx> naive_gemm(std::size_t m, std::size_t n, std::size_t k, const std::vector<cplx>& a,
                             const std::vector<cplx>& b) {
  std::vector<cplx> c(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < k; ++l) c[i * n + j] += a[i * k + l] * b[l * n + j];
  return c;
}

struct ScopedIsa {
  explicit ScopedIsa(kernels::Isa isa) { kernels::force(isa); }
  ~ScopedIsa() { kernels::reset(); }
};

}  // namespace

TEST_CASE("scalar kernels match naive loops") {
  const auto& t = kernels::scalar::table();
  std::mt19937_64 rng(1);
  const std::size_t shapes[][3] = {{1, 1, 1}, {3, 5, 7}, {16, 16, 16}, {19, 4, 10}};
  for (const auto& [m, n, k] : shapes) {
    const auto a = random_complex(m * k, rng), b = random_complex(k * n, rng);
    std::vector<cplx> c(m * n);
    t.zgemm(m, n, k, a.data(), b.data(), c.data());
    CHECK(max_diff(c, naive_gemm(m, n, k, a, b)) < 1e-12);
  }
  const std::size_t n = 10;
  const auto a = random_complex(n * n, rng), b = random_complex(n * n, rng);
  std::vector<cplx> d(n);
  t.zdiag_product(n, a.data(), b.data(), d.data());
  const auto full = naive_gemm(n, n, n, a, b);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(d[i] - full[i * n + i]) < 1e-12);

  std::vector<double> x = {1, 2, 3, 4, 5, 6, 7}, w = {0.25, 0.5, 0.25}, out(5);
  t.dconvolve(5, x.data(), 1, w.data(), out.data());
  for (std::size_t i = 0; i < 5; ++i) CHECK(out[i] == doctest::Approx(static_cast<double>(i + 2)));
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const kernels::KernelTable* v = kernels::avx2::table();
  if (v == nullptr || !kernels::cpu_has_avx2()) {
    MESSAGE("AVX2 variant not available on this machine; skipped");
    return;
  }
  const auto& s = kernels::scalar::table();
  std::mt19937_64 rng(2);
  // odd sizes exercise the remainder paths
  for (std::size_t m : {1u, 2u, 3u, 4u, 5u, 10u, 16u, 19u, 33u}) {
    for (std::size_t k : {1u, 4u, 7u, 19u}) {
      const std::size_t n = m + 3;
      const auto a = random_complex(m * k, rng), b = random_complex(k * n, rng);
      std::vector<cplx> cs(m * n), cv(m * n);
      s.zgemm(m, n, k, a.data(), b.data(), cs.data());
      v->zgemm(m, n, k, a.data(), b.data(), cv.data());
      CHECK(max_diff(cs, cv) < 1e-12);
    }
    const auto a = random_complex(m * m, rng), b = random_complex(m * m, rng);
    std::vector<cplx> ds(m), dv(m);
    s.zdiag_product(m, a.data(), b.data(), ds.data());
    v->zdiag_product(m, a.data(), b.data(), dv.data());
    CHECK(max_diff(ds, dv) < 1e-12);
    std::vector<cplx> hs(m * m), hv(m * m);
    s.zhadamard(m * m, a.data(), b.data(), hs.data());
    v->zhadamard(m * m, a.data(), b.data(), hv.data());
    CHECK(max_diff(hs, hv) < 1e-13);
  }
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {1u, 3u, 8u, 37u, 560u}) {
    for (std::size_t h : {0u, 1u, 5u, 20u}) {
      std::vector<double> x(n + 2 * h), w(2 * h + 1), os(n), ov(n);
      for (auto& e : x) e = u(rng);
      for (auto& e : w) e = u(rng);
      s.dconvolve(n, x.data(), h, w.data(), os.data());
      v->dconvolve(n, x.data(), h, w.data(), ov.data());
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(os[i] - ov[i]) < 1e-13);
    }
  }
}

TEST_CASE("dispatch can be pinned and the fidelity does not depend on it") {
  CHECK(kernels::name(kernels::Isa::scalar) == "scalar");
  {
    ScopedIsa pin(kernels::Isa::scalar);
    CHECK(kernels::active().isa == kernels::Isa::scalar);
  }
  if (!kernels::avx2::table() || !kernels::cpu_has_avx2()) {
    CHECK_THROWS(kernels::force(kernels::Isa::avx2));
    return;
  }
  ScheduleSpec spec;
  spec.gate_time = 20.0;
  const auto problem = make_ifredkin_problem(canonical_params(), spec);
  CoarsePulse pulse = CoarsePulse::at_idle(problem.idle, spec.active_samples());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 3.5);
  for (auto& v : pulse.values)
    for (double& x : v) x = u(rng);
  FidelityResult a, b;
  {
    ScopedIsa pin(kernels::Isa::scalar);
    a = fidelity_and_gradient(problem, pulse);
  }
  {
    ScopedIsa pin(kernels::Isa::avx2);
    b = fidelity_and_gradient(problem, pulse);
  }
  CHECK(std::abs(a.fidelity - b.fidelity) < 1e-12);
  for (std::size_t i = 0; i < a.gradient.size(); ++i) CHECK(std::abs(a.gradient[i] - b.gradient[i]) < 1e-10);
}
