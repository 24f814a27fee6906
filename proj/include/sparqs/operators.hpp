#pragma once

// Truncated-oscillator operators on the bus ⊗ P ⊗ S1 ⊗ S2 Hilbert space.
//
// Tensor ordering is fixed: bus first (most significant), then the qubits in
// order. A basis state is written "b|q_P q_S1 q_S2", e.g. "0|110".

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sparqs/matrix.hpp"

namespace sparqs {

/// Level counts, bus first. Every entry is at least 2.
class SubsystemDims {
 public:
  SubsystemDims() : SubsystemDims({3, 3, 3, 3}) {}
  SubsystemDims(std::vector<std::size_t> levels);

  std::size_t count() const { return levels_.size(); }
  std::size_t operator[](std::size_t i) const { return levels_[i]; }
  const std::vector<std::size_t>& levels() const { return levels_; }
  std::size_t total() const { return total_; }
  /// Number of qubits (subsystems after the bus).
  std::size_t qubits() const { return levels_.size() - 1; }

  bool operator==(const SubsystemDims&) const = default;

 private:
  std::vector<std::size_t> levels_;
  std::size_t total_ = 1;
};

struct BasisLabel {
  std::vector<std::size_t> occupation;  // bus first

  static BasisLabel parse(std::string_view text);
  std::string str() const;
  /// Sum of occupations over all subsystems.
  std::size_t excitations() const;

  bool operator==(const BasisLabel&) const = default;
};

CMatrix annihilation_op(std::size_t levels);
CMatrix number_op(std::size_t levels);

/// 1 ⊗ … ⊗ op ⊗ … ⊗ 1 with op acting on `subsystem`.
CMatrix embed(const CMatrix& op, std::size_t subsystem, const SubsystemDims& dims);

/// Mixed-radix index, bus most significant.
std::size_t basis_index(const BasisLabel& label, const SubsystemDims& dims);
BasisLabel basis_label(std::size_t index, const SubsystemDims& dims);

/// Occupation of every subsystem for every basis index, flattened:
/// occupations(dims)[index * dims.count() + s].
std::vector<std::size_t> occupations(const SubsystemDims& dims);

/// A coordinate subspace spanned by product basis states. Its columns are
/// ordered by ascending full-space index, so for the three-qubit computational
/// subspace column k is the qubit bitstring of k with P most significant.
struct Subspace {
  std::vector<std::size_t> indices;

  std::size_t size() const { return indices.size(); }
  /// Full-dim x size isometry with a single 1 per column.
  CMatrix isometry(std::size_t full_dim) const;
  /// Orthogonal projector onto the span, full_dim x full_dim.
  CMatrix projector(std::size_t full_dim) const;
};

/// States whose occupation of subsystem s lies in allowed[s].
Subspace select_subspace(const SubsystemDims& dims,
                         const std::vector<std::vector<std::size_t>>& allowed);

/// Bus in vacuum, every qubit in {0, 1}.
Subspace computational_subspace(const SubsystemDims& dims);

/// Projector onto computational_subspace(dims). Requires 4 subsystems.
CMatrix computational_projector(const SubsystemDims& dims);

}  // namespace sparqs
