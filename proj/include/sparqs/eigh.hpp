#pragma once

#include <vector>

#include "sparqs/matrix.hpp"

namespace sparqs {

/// H = V·diag(values)·V†, values ascending, columns of V orthonormal.
struct HermitianEigen {
  std::vector<double> values;
  CMatrix vectors;
};

HermitianEigen eigh(const CMatrix& h);

}  // namespace sparqs
