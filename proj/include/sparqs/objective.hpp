#pragma once

// Leakage-projected gate fidelity
//
//   Φ = |Tr(U_F† Q† U(t_g) Q)|² / d²
//
// where Q is the isometry onto the d-dimensional target subspace. Global
// phases drop out through the modulus. The gradient with respect to each
// coarse sample is exact: step derivatives are taken in the eigenbasis of
// the step Hamiltonian and chained through the filter adjoint.

#include <vector>

#include "sparqs/matrix.hpp"
#include "sparqs/problem.hpp"
#include "sparqs/propagation.hpp"

namespace sparqs {

struct FidelityResult {
  double fidelity = 0.0;
  cplx overlap{};                 // Tr(U_F† Q† U Q) / d
  std::vector<double> gradient;   // dΦ/du, flattened control-major; empty if not requested
};

/// Φ for a full-space unitary.
FidelityResult projected_fidelity(const CMatrix& u, const TargetGate& target);

/// Reusable evaluator: precomputes the filter matrix, the blocks that touch
/// the target subspace and the target restricted to each of them.
class FidelityEvaluator {
 public:
  explicit FidelityEvaluator(ControlProblem problem);

  const ControlProblem& problem() const { return problem_; }

  FidelityResult evaluate(const CoarsePulse& pulse, bool with_gradient) const;
  FidelityResult evaluate(std::span<const double> flat, bool with_gradient) const;
  /// Gradient (if requested) is with respect to the fine samples.
  FidelityResult evaluate_fine(const FinePulse& fine, bool with_gradient) const;

  FinePulse fine_pulse(const CoarsePulse& pulse) const { return filter_.apply(pulse); }
  const FilterMatrix& filter() const { return filter_; }

 private:
  struct Sector {
    BlockHamiltonian part;
    std::vector<std::size_t> positions;  // local position of each subspace column
    CMatrix target_adjoint;              // Y = F_b† Q_b†, d_b × n_b
  };

  ControlProblem problem_;
  FilterMatrix filter_;
  std::vector<Sector> sectors_;
  double subspace_dim_;
};

FidelityResult fidelity_and_gradient(const ControlProblem& problem, const CoarsePulse& pulse);

}  // namespace sparqs
