#include "sparqs/eigh.hpp"

#include <Eigen/Dense>

#include "sparqs/errors.hpp"

namespace sparqs {
namespace {

using RowMajorC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

bool is_real(const CMatrix& h) {
  for (const cplx& x : h.span())
    if (x.imag() != 0.0) return false;
  return true;
}

}  // namespace

HermitianEigen eigh(const CMatrix& h) {
  if (!h.square()) throw invalid_dimension("eigh: matrix is not square");
  const auto n = static_cast<Eigen::Index>(h.rows());
  HermitianEigen out;
  out.vectors = CMatrix(h.rows());

  // The cell Hamiltonian is real symmetric in the occupation basis; the real
  // solver is several times faster on the block sizes that matter.
  if (is_real(h)) {
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        a(i, j) = h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw invalid_operator("eigh: decomposition did not converge");
    out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    const auto& v = solver.eigenvectors();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        out.vectors(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = v(i, j);
    return out;
  }

  const Eigen::Map<const RowMajorC> view(h.data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(view, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw invalid_operator("eigh: decomposition did not converge");
  out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  Eigen::Map<RowMajorC>(out.vectors.data(), n, n) = solver.eigenvectors();
  return out;
}

}  // namespace sparqs
