#pragma once

// Piecewise-constant Schrödinger propagation, U_m = exp(−i H(δ[m]) dt).
//
// The cell Hamiltonian only connects states with equal total excitation
// number, so the full space splits into independent blocks. Propagation is
// done block by block; BlockStructure::single() keeps one dense block, which
// is what the cross-checks in the tests compare against.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sparqs/device.hpp"
#include "sparqs/eigh.hpp"
#include "sparqs/matrix.hpp"
#include "sparqs/pulse.hpp"

namespace sparqs {

class BlockStructure {
 public:
  /// Connected components of the coupling graph of drift + controls.
  static BlockStructure of(const ControlledHamiltonian& ham);
  /// One block spanning the whole space.
  static BlockStructure single(std::size_t dim);

  std::size_t count() const { return blocks_.size(); }
  std::size_t dim() const { return block_of_.size(); }
  const std::vector<std::size_t>& block(std::size_t b) const { return blocks_[b]; }
  std::size_t block_of(std::size_t full_index) const { return block_of_[full_index]; }
  std::size_t position(std::size_t full_index) const { return position_[full_index]; }

  /// Blocks holding at least one of the given full-space indices, ascending.
  std::vector<std::size_t> touching(std::span<const std::size_t> indices) const;

 private:
  explicit BlockStructure(std::vector<std::vector<std::size_t>> blocks);

  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::size_t> block_of_;
  std::vector<std::size_t> position_;
};

/// Drift and control diagonals restricted to one block.
struct BlockHamiltonian {
  std::vector<std::size_t> indices;
  CMatrix drift;
  std::vector<std::vector<double>> control_diagonals;

  std::size_t dim() const { return indices.size(); }
  CMatrix at(std::span<const double> coeffs) const;
};

std::vector<BlockHamiltonian> split_hamiltonian(const ControlledHamiltonian& ham,
                                                const BlockStructure& blocks);

/// exp(−i·h·dt) through h = V Λ V†. Throws invalid_operator if h is not
/// Hermitian to 1e−10.
CMatrix step_propagator(const CMatrix& h, double dt);

/// Eigendecomposition of one step's Hamiltonian and the resulting unitary.
struct StepFactor {
  HermitianEigen eig;
  CMatrix unitary;
};

StepFactor make_step(const CMatrix& h, double dt);

struct PropagateOptions {
  /// Keep every StepFactor (needed for gradients).
  bool keep_steps = false;
  /// Propagate only these blocks; empty means all of them.
  std::vector<std::size_t> blocks;
};

struct Propagation {
  double dt = 0.0;
  std::size_t steps = 0;
  std::vector<std::size_t> blocks;       // block ids that were propagated
  std::vector<BlockHamiltonian> parts;   // parallel to blocks
  std::vector<CMatrix> totals;           // U(t_g) per propagated block
  std::vector<std::vector<StepFactor>> factors;  // [slot][m] when kept

  /// U(t_g) on the full space. Blocks that were not propagated are left
  /// zero, so this is only unitary when every block was included.
  CMatrix total_unitary(std::size_t full_dim) const;
};

Propagation total_propagator(const ControlledHamiltonian& ham, const FinePulse& fine,
                             const ScheduleSpec& spec, const BlockStructure& blocks,
                             const PropagateOptions& opts = {});

/// Convenience overload using BlockStructure::of(ham) and every block.
Propagation total_propagator(const ControlledHamiltonian& ham, const FinePulse& fine,
                             const ScheduleSpec& spec);

/// Populations over time on the fine grid. Column names are p_<b>_<qqq> for
/// basis labels, p_leak (any qubit at level ≥ 2) and p_other (everything not
/// otherwise listed).
struct Trajectory {
  std::vector<double> t;                      // t_0 = 0 … t_N = t_g
  std::vector<std::string> columns;
  std::vector<std::vector<double>> populations;  // [time][column]
  std::vector<double> norm;                   // ‖ψ(t)‖
  std::vector<std::vector<cplx>> states;      // ψ(t) on the full space

  std::size_t column(const std::string& name) const;
};

/// Watch entries are basis labels ("0|110") or the groups "leak" and "other".
Trajectory trajectory(const ControlledHamiltonian& ham, const FinePulse& fine,
                      const ScheduleSpec& spec, std::span<const cplx> initial,
                      const std::vector<std::string>& watch);

Trajectory trajectory(const ControlledHamiltonian& ham, const FinePulse& fine,
                      const ScheduleSpec& spec, const BasisLabel& initial,
                      const std::vector<std::string>& watch);

std::string population_column(const std::string& watch_entry);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace sparqs
