#include "sparqs/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparqs/errors.hpp"

namespace sparqs {

SubsystemDims::SubsystemDims(std::vector<std::size_t> levels)
    : levels_(std::move(levels)) {
  if (levels_.size() < 2)
    throw invalid_dimension("need a bus and at least one qubit");
  for (std::size_t l : levels_) {
    if (l < 2) throw invalid_dimension("every subsystem needs at least 2 levels");
    total_ *= l;
  }
}

BasisLabel BasisLabel::parse(std::string_view text) {
  const auto bar = text.find('|');
  if (bar == std::string_view::npos || bar == 0 || bar + 1 >= text.size())
    throw invalid_label("basis label '" + std::string(text) + "' is not of the form b|q...");
  BasisLabel label;
  auto digit = [&](char ch) {
    if (ch < '0' || ch > '9')
      throw invalid_label("basis label '" + std::string(text) + "' has a non-digit occupation");
    return static_cast<std::size_t>(ch - '0');
  };
  // The bus may take more than one digit for deep truncations; qubits are
  // one digit each.
  std::size_t bus = 0;
  for (char ch : text.substr(0, bar)) bus = bus * 10 + digit(ch);
  label.occupation.push_back(bus);
  for (char ch : text.substr(bar + 1)) label.occupation.push_back(digit(ch));
  return label;
}

std::string BasisLabel::str() const {
  std::string out;
  if (occupation.empty()) return out;
  out += std::to_string(occupation[0]);
  out += '|';
  for (std::size_t i = 1; i < occupation.size(); ++i) out += std::to_string(occupation[i]);
  return out;
}

std::size_t BasisLabel::excitations() const {
  return std::accumulate(occupation.begin(), occupation.end(), std::size_t{0});
}

CMatrix annihilation_op(std::size_t levels) {
  if (levels < 2) throw invalid_dimension("annihilation operator needs at least 2 levels");
  CMatrix m(levels);
  for (std::size_t n = 0; n + 1 < levels; ++n) m(n, n + 1) = std::sqrt(static_cast<double>(n + 1));
  return m;
}

CMatrix number_op(std::size_t levels) {
  if (levels < 2) throw invalid_dimension("number operator needs at least 2 levels");
  CMatrix m(levels);
  for (std::size_t n = 0; n < levels; ++n) m(n, n) = static_cast<double>(n);
  return m;
}

CMatrix embed(const CMatrix& op, std::size_t subsystem, const SubsystemDims& dims) {
  if (subsystem >= dims.count())
    throw invalid_dimension("embed: subsystem index out of range");
  if (!op.square() || op.rows() != dims[subsystem])
    throw invalid_dimension("embed: operator dimension " + std::to_string(op.rows()) +
                            " does not match subsystem with " +
                            std::to_string(dims[subsystem]) + " levels");
  std::size_t left = 1;
  for (std::size_t s = 0; s < subsystem; ++s) left *= dims[s];
  std::size_t right = 1;
  for (std::size_t s = subsystem + 1; s < dims.count(); ++s) right *= dims[s];
  return kron(kron(CMatrix::identity(left), op), CMatrix::identity(right));
}

std::size_t basis_index(const BasisLabel& label, const SubsystemDims& dims) {
  if (label.occupation.size() != dims.count())
    throw invalid_label("label '" + label.str() + "' has " +
                        std::to_string(label.occupation.size()) + " subsystems, expected " +
                        std::to_string(dims.count()));
  std::size_t index = 0;
  for (std::size_t s = 0; s < dims.count(); ++s) {
    if (label.occupation[s] >= dims[s])
      throw invalid_label("label '" + label.str() + "': occupation " +
                          std::to_string(label.occupation[s]) + " of subsystem " +
                          std::to_string(s) + " exceeds truncation");
    index = index * dims[s] + label.occupation[s];
  }
  return index;
}

BasisLabel basis_label(std::size_t index, const SubsystemDims& dims) {
  if (index >= dims.total()) throw invalid_label("basis index out of range");
  BasisLabel label;
  label.occupation.resize(dims.count());
  for (std::size_t s = dims.count(); s-- > 0;) {
    label.occupation[s] = index % dims[s];
    index /= dims[s];
  }
  return label;
}

std::vector<std::size_t> occupations(const SubsystemDims& dims) {
  std::vector<std::size_t> out(dims.total() * dims.count());
  for (std::size_t i = 0; i < dims.total(); ++i) {
    const auto label = basis_label(i, dims);
    std::copy(label.occupation.begin(), label.occupation.end(), out.begin() + i * dims.count());
  }
  return out;
}

CMatrix Subspace::isometry(std::size_t full_dim) const {
  CMatrix q(full_dim, indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) q(indices[k], k) = 1.0;
  return q;
}

CMatrix Subspace::projector(std::size_t full_dim) const {
  CMatrix p(full_dim);
  for (std::size_t i : indices) p(i, i) = 1.0;
  return p;
}

Subspace select_subspace(const SubsystemDims& dims,
                         const std::vector<std::vector<std::size_t>>& allowed) {
  if (allowed.size() != dims.count())
    throw invalid_dimension("subspace selection needs one level set per subsystem");
  Subspace sub;
  for (std::size_t i = 0; i < dims.total(); ++i) {
    const auto label = basis_label(i, dims);
    bool keep = true;
    for (std::size_t s = 0; s < dims.count() && keep; ++s)
      keep = std::find(allowed[s].begin(), allowed[s].end(), label.occupation[s]) !=
             allowed[s].end();
    if (keep) sub.indices.push_back(i);
  }
  return sub;
}

Subspace computational_subspace(const SubsystemDims& dims) {
  std::vector<std::vector<std::size_t>> allowed(dims.count(), {0, 1});
  allowed[0] = {0};
  return select_subspace(dims, allowed);
}

CMatrix computational_projector(const SubsystemDims& dims) {
  if (dims.count() != 4)
    throw invalid_dimension("computational projector expects bus + 3 qubits");
  return computational_subspace(dims).projector(dims.total());
}

}  // namespace sparqs
