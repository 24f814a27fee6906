#include <cmath>
#include <random>

#include "doctest.h"
#include "sparqs/errors.hpp"
#include "sparqs/operators.hpp"

using namespace sparqs;

TEST_CASE("annihilation operator ladder entries") {
  const CMatrix a2 = annihilation_op(2);
  CHECK(a2(0, 1) == cplx(1.0));
  CHECK(a2(0, 0) == cplx(0.0));
  CHECK(a2(1, 0) == cplx(0.0));
  CHECK(a2(1, 1) == cplx(0.0));

  const CMatrix a3 = annihilation_op(3);
  CHECK(a3(0, 1) == cplx(1.0));
  CHECK(a3(1, 2).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(max_abs(a3) == doctest::Approx(std::sqrt(2.0)));

  const CMatrix n = a3.adjoint() * a3;
  CHECK(max_abs_diff(n, CMatrix::diagonal(std::vector<double>{0, 1, 2})) < 1e-15);

  CHECK_THROWS_AS(annihilation_op(1), invalid_dimension);
  CHECK_THROWS_AS(annihilation_op(0), invalid_dimension);
}

TEST_CASE("embedding into bus (x) P (x) S1 (x) S2") {
  const SubsystemDims dims;
  CHECK(dims.total() == 81);

  for (std::size_t s = 0; s < 4; ++s)
    CHECK(max_abs_diff(embed(CMatrix::identity(3), s, dims), CMatrix::identity(81)) == 0.0);

  const CMatrix nP = embed(number_op(3), 1, dims);
  const std::size_t idx = basis_index(BasisLabel::parse("0|200"), dims);
  std::vector<cplx> e(81, 0.0);
  e[idx] = 1.0;
  const auto out = matvec(nP, e);
  CHECK(out[idx] == cplx(2.0));

  CHECK_THROWS_AS(embed(CMatrix::identity(2), 0, dims), invalid_dimension);
  CHECK_THROWS_AS(embed(CMatrix::identity(3), 4, dims), invalid_dimension);
}

TEST_CASE("disjoint embeddings commute and keep Hermiticity") {
  const SubsystemDims dims;
  std::mt19937 rng(11);
  std::normal_distribution<double> nd;
  auto random_op = [&] {
    CMatrix m(3);
    for (auto& x : m.span()) x = cplx(nd(rng), nd(rng));
    return m;
  };
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      if (i == j) continue;
      const CMatrix a = embed(random_op(), i, dims);
      const CMatrix b = embed(random_op(), j, dims);
      CHECK(max_abs(commutator(a, b)) < 1e-12);
    }
  const CMatrix h = random_op();
  const CMatrix herm = h + h.adjoint();
  for (std::size_t s = 0; s < 4; ++s) CHECK(hermiticity_defect(embed(herm, s, dims)) == 0.0);
}

TEST_CASE("basis index is mixed radix with the bus most significant") {
  const SubsystemDims dims;
  CHECK(basis_index(BasisLabel::parse("0|000"), dims) == 0);
  CHECK(basis_index(BasisLabel::parse("0|110"), dims) == 12);
  CHECK(basis_index(BasisLabel::parse("2|000"), dims) == 54);
  CHECK(BasisLabel::parse("1|100").str() == "1|100");

  CHECK_THROWS_AS(basis_index(BasisLabel::parse("3|000"), dims), invalid_label);
  CHECK_THROWS_AS(basis_index(BasisLabel::parse("0|00"), dims), invalid_label);
  CHECK_THROWS_AS(BasisLabel::parse("0110"), invalid_label);
  CHECK_THROWS_AS(BasisLabel::parse("0|1x0"), invalid_label);
}

TEST_CASE("basis index round-trips for several truncations") {
  for (const auto& levels : {std::vector<std::size_t>{3, 3, 3, 3}, {4, 3, 3, 3}, {2, 2, 2, 2},
                             {5, 2, 4, 3}}) {
    const SubsystemDims dims(levels);
    std::vector<bool> seen(dims.total(), false);
    for (std::size_t i = 0; i < dims.total(); ++i) {
      const auto label = basis_label(i, dims);
      const std::size_t back = basis_index(label, dims);
      CHECK(back == i);
      seen[back] = true;
    }
    for (bool s : seen) CHECK(s);
  }
}

TEST_CASE("computational projector") {
  const SubsystemDims dims;
  const CMatrix p = computational_projector(dims);
  CHECK(p.trace().real() == doctest::Approx(8.0));
  CHECK(max_abs_diff(p * p, p) == 0.0);
  CHECK(hermiticity_defect(p) == 0.0);

  std::vector<cplx> leak(81, 0.0);
  leak[basis_index(BasisLabel::parse("0|200"), dims)] = 1.0;
  for (const cplx& x : matvec(p, leak)) CHECK(x == cplx(0.0));

  // column k is the qubit bitstring of k with P most significant
  const auto sub = computational_subspace(dims);
  REQUIRE(sub.size() == 8);
  CHECK(basis_label(sub.indices[5], dims).str() == "0|101");
  CHECK(basis_label(sub.indices[6], dims).str() == "0|110");

  for (const auto& levels : {std::vector<std::size_t>{3, 4, 4, 4}, {4, 3, 3, 3}, {2, 2, 2, 2}}) {
    const SubsystemDims d(levels);
    CHECK(computational_projector(d).trace().real() == doctest::Approx(8.0));
  }
  CHECK_THROWS_AS(computational_projector(SubsystemDims({3, 3, 3})), invalid_dimension);
  CHECK_THROWS_AS(SubsystemDims({3, 1, 3, 3}), invalid_dimension);
}
