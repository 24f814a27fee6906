#pragma once

// Bus-coupled transmon cell in the frame rotating at the bus frequency:
//
//   H(t) = Σ_i 2π [ δ_i(t) n_i + (Δ_i/2)(n_i² − n_i) ] + Σ_i 2π g_i (a† b_i + a b_i†)
//
// with δ_i = ω_i − ω_R the qubit detuning from the frame. Frequencies are
// cyclic (GHz) everywhere in the API and become angular only inside the
// operators, so with time in ns every exponent is a plain phase.

#include <string>
#include <vector>

#include "sparqs/matrix.hpp"
#include "sparqs/operators.hpp"

namespace sparqs {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct DeviceParams {
  double bus_freq = 6.5;                              // ω_B/2π [GHz]
  std::vector<double> qubit_freq{7.5, 8.0, 8.5};      // ω_i/2π idle [GHz]
  std::vector<double> anharmonicity{-0.2, -0.3, -0.4};  // Δ_i/2π [GHz]
  std::vector<double> coupling{0.030, 0.045, 0.060};  // g_i/2π [GHz]
  double frame_freq = 6.5;                            // ω_R/2π [GHz]
  SubsystemDims dims{};

  std::size_t qubits() const { return qubit_freq.size(); }
  /// ω_i − ω_R for every qubit [GHz].
  std::vector<double> idle_detunings() const;

  /// Throws invalid_dimension / std::invalid_argument on inconsistent input.
  void validate() const;
};

/// The parameter set used throughout: bus at 6.5 GHz, qubits at 7.5/8.0/8.5
/// GHz, Δ = −200/−300/−400 MHz and g = 30/45/60 MHz (g/Δ = −0.15).
DeviceParams canonical_params();

struct ControlledHamiltonian {
  SubsystemDims dims;
  CMatrix drift;
  /// 2π·n_i for every controlled qubit, so coefficients are detunings in GHz.
  std::vector<CMatrix> controls;
  /// Diagonal of each control operator (they are all diagonal).
  std::vector<std::vector<double>> control_diagonals;
  std::vector<std::string> labels;
  /// Qubit index (0 = P) driven by each control.
  std::vector<std::size_t> controlled_qubits;

  std::size_t dim() const { return drift.rows(); }
  /// drift + Σ_c coeffs[c]·controls[c]
  CMatrix at(std::span<const double> coeffs) const;
};

/// Every qubit is controlled; drift holds anharmonicity and coupling terms.
ControlledHamiltonian build_hamiltonian(const DeviceParams& params);

/// Only the listed qubits are controlled. The others sit at their idle
/// detuning, which is folded into the drift.
ControlledHamiltonian build_hamiltonian(const DeviceParams& params,
                                        const std::vector<std::size_t>& controlled);

struct TargetGate {
  std::string name;
  CMatrix unitary;     // on the subspace
  Subspace subspace;   // where it acts inside the full space
};

/// |0⟩⟨0| ⊗ 1₄ + |1⟩⟨1| ⊗ (±iSWAP), ordering (P, S1, S2).
CMatrix ifredkin_matrix(int sign);
/// iSWAP on (S1, S2): |01⟩ → i|10⟩, |10⟩ → i|01⟩.
CMatrix iswap_matrix();

TargetGate target_ifredkin(int sign, const SubsystemDims& dims = {});
/// iSWAP between S1 and S2 with bus and P in their ground states.
TargetGate target_iswap(const SubsystemDims& dims = {});

}  // namespace sparqs
