#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "sparqs/device.hpp"
#include "sparqs/eigh.hpp"

using namespace sparqs;

namespace {

std::vector<cplx> subspace_basis(std::size_t k) {
  std::vector<cplx> v(8, 0.0);
  v[k] = 1.0;
  return v;
}

}  // namespace

TEST_CASE("canonical parameters") {
  const DeviceParams p = canonical_params();
  CHECK(p.bus_freq == 6.5);
  CHECK(p.frame_freq == p.bus_freq);
  CHECK(p.coupling[2] == 0.060);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(p.coupling[i] / p.anharmonicity[i] == doctest::Approx(-0.15).epsilon(1e-12));
    CHECK(p.anharmonicity[i] < 0.0);
    CHECK(p.coupling[i] > 0.0);
  }
  const auto idle = p.idle_detunings();
  CHECK(idle[0] == doctest::Approx(1.0));
  CHECK(idle[1] == doctest::Approx(1.5));
  CHECK(idle[2] == doctest::Approx(2.0));
}

TEST_CASE("hamiltonian is Hermitian with diagonal Hermitian controls") {
  const auto ham = build_hamiltonian(canonical_params());
  CHECK(ham.dim() == 81);
  CHECK(ham.controls.size() == 3);
  CHECK(hermiticity_defect(ham.drift) < 1e-14);
  for (const auto& c : ham.controls) {
    CHECK(hermiticity_defect(c) < 1e-14);
    for (std::size_t i = 0; i < 81; ++i)
      for (std::size_t j = 0; j < 81; ++j)
        if (i != j) CHECK(c(i, j) == cplx(0.0));
  }
  CHECK(ham.labels == std::vector<std::string>{"P", "S1", "S2"});
}

TEST_CASE("uncoupled diagonal energies") {
  DeviceParams p = canonical_params();
  p.coupling = {0.0, 0.0, 0.0};
  const auto ham = build_hamiltonian(p);
  const double zero[3] = {0.0, 0.0, 0.0};
  const CMatrix h = ham.at(zero);
  for (std::size_t i = 0; i < 81; ++i)
    for (std::size_t j = 0; j < 81; ++j)
      if (i != j) CHECK(h(i, j) == cplx(0.0));
  // level 2 of P: −Δ/2·2 + Δ/2·4 = Δ
  const std::size_t idx = basis_index(BasisLabel::parse("0|200"), p.dims);
  CHECK(h(idx, idx).real() == doctest::Approx(kTwoPi * p.anharmonicity[0]).epsilon(1e-14));
  const std::size_t one = basis_index(BasisLabel::parse("0|100"), p.dims);
  CHECK(std::abs(h(one, one)) < 1e-15);
}

TEST_CASE("hamiltonian is affine in the control coefficients") {
  const auto ham = build_hamiltonian(canonical_params());
  const std::vector<double> base{0.7, 1.2, -0.3};
  const double eps = 0.0137;
  for (std::size_t c = 0; c < 3; ++c) {
    auto bumped = base;
    bumped[c] += eps;
    const CMatrix diff = ham.at(bumped) - ham.at(base);
    CHECK(max_abs_diff(diff, eps * ham.controls[c]) < 1e-12);
  }
}

TEST_CASE("zero-coupling spectrum is a sum of single-subsystem ladders") {
  DeviceParams p = canonical_params();
  p.coupling = {0.0, 0.0, 0.0};
  const auto ham = build_hamiltonian(p);
  const auto idle = p.idle_detunings();
  const auto eig = eigh(ham.at(idle));

  std::vector<double> expected;
  for (int bus = 0; bus < 3; ++bus)  // the bus carries no energy in its own frame
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          const int n[3] = {i, j, k};
          double e = 0.0;
          for (int q = 0; q < 3; ++q) {
            const double level[3] = {0.0, idle[q], 2.0 * idle[q] + p.anharmonicity[q]};
            e += kTwoPi * level[n[q]];
          }
          expected.push_back(e);
        }
  std::sort(expected.begin(), expected.end());
  REQUIRE(eig.values.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i)
    CHECK(eig.values[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("parked qubits fold their idle detuning into the drift") {
  DeviceParams p = canonical_params();
  p.qubit_freq[0] = 10.0;
  const auto ham = build_hamiltonian(p, {1, 2});
  CHECK(ham.controls.size() == 2);
  CHECK(ham.labels == std::vector<std::string>{"S1", "S2"});
  const std::size_t idx = basis_index(BasisLabel::parse("0|100"), p.dims);
  CHECK(ham.drift(idx, idx).real() == doctest::Approx(kTwoPi * 3.5));
}

TEST_CASE("iFREDKIN target") {
  const CMatrix u = ifredkin_matrix(+1);
  CHECK(unitarity_defect(u) < 1e-12);
  CHECK(unitarity_defect(ifredkin_matrix(-1)) < 1e-12);

  // |101⟩ → i|110⟩ and |011⟩ unchanged (ordering P, S1, S2)
  const auto out101 = matvec(u, subspace_basis(5));
  CHECK(out101[6] == cplx(0.0, 1.0));
  const auto out011 = matvec(u, subspace_basis(3));
  CHECK(out011[3] == cplx(1.0));

  const double r = 1.0 / std::sqrt(2.0);
  std::vector<cplx> in(8, 0.0);
  in[1] = r;
  in[5] = r;
  const auto ghz = matvec(u, in);
  CHECK(std::abs(ghz[1] - cplx(r)) < 1e-15);
  CHECK(std::abs(ghz[6] - cplx(0.0, r)) < 1e-15);
  CHECK(std::abs(ghz[5]) == 0.0);

  CHECK(ifredkin_matrix(-1)(5, 6) == cplx(0.0, -1.0));
  CHECK_THROWS(ifredkin_matrix(2));

  const TargetGate t = target_ifredkin(+1);
  CHECK(t.subspace.size() == 8);
}

TEST_CASE("iSWAP target") {
  const CMatrix u = iswap_matrix();
  CHECK(unitarity_defect(u) < 1e-12);
  std::vector<cplx> e01(4, 0.0), e00(4, 0.0);
  e01[1] = 1.0;
  e00[0] = 1.0;
  CHECK(matvec(u, e01)[2] == cplx(0.0, 1.0));
  CHECK(matvec(u, e00)[0] == cplx(1.0));
  const CMatrix u4 = (u * u) * (u * u);
  CHECK(max_abs_diff(u4, CMatrix::identity(4)) < 1e-15);

  const TargetGate t = target_iswap();
  REQUIRE(t.subspace.size() == 4);
  const SubsystemDims dims;
  CHECK(basis_label(t.subspace.indices[1], dims).str() == "0|001");
  CHECK(basis_label(t.subspace.indices[2], dims).str() == "0|010");
}

TEST_CASE("device validation") {
  DeviceParams p = canonical_params();
  p.coupling.pop_back();
  CHECK_THROWS(p.validate());
  p = canonical_params();
  p.coupling[1] = -0.01;
  CHECK_THROWS(p.validate());
  p = canonical_params();
  p.dims = SubsystemDims({3, 3, 3});
  CHECK_THROWS(p.validate());
}
