#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sparqs {

using cplx = std::complex<double>;

/// Dense row-major complex matrix. Square in almost every use; the isometry
/// onto a computational subspace is the one rectangular case.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  explicit CMatrix(std::size_t n) : CMatrix(n, n) {}

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const double> d);
  static CMatrix diagonal(std::span<const cplx> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t dim() const { return rows_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }
  std::span<cplx> span() { return data_; }
  std::span<const cplx> span() const { return data_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  cplx trace() const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cplx s);

  bool operator==(const CMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(cplx s, CMatrix a);
/// Matrix product through the dispatched kernel.
CMatrix operator*(const CMatrix& a, const CMatrix& b);

std::vector<cplx> matvec(const CMatrix& m, std::span<const cplx> v);

/// Kronecker product a ⊗ b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

CMatrix commutator(const CMatrix& a, const CMatrix& b);

/// max_ij |m_ij|
double max_abs(const CMatrix& m);
/// max_ij |a_ij - b_ij|
double max_abs_diff(const CMatrix& a, const CMatrix& b);
/// max_ij |m_ij - conj(m_ji)|
double hermiticity_defect(const CMatrix& m);
/// max_ij |(m† m - 1)_ij|
double unitarity_defect(const CMatrix& m);

}  // namespace sparqs
