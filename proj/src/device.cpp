#include "sparqs/device.hpp"

#include <cmath>
#include <stdexcept>

#include "sparqs/errors.hpp"

namespace sparqs {

std::vector<double> DeviceParams::idle_detunings() const {
  std::vector<double> out(qubit_freq.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = qubit_freq[i] - frame_freq;
  return out;
}

void DeviceParams::validate() const {
  const std::size_t n = qubit_freq.size();
  if (anharmonicity.size() != n || coupling.size() != n)
    throw std::invalid_argument("device: qubit frequency, anharmonicity and coupling lists differ in length");
  if (dims.qubits() != n)
    throw invalid_dimension("device: " + std::to_string(n) + " qubits but " +
                            std::to_string(dims.qubits()) + " qubit truncations");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(qubit_freq[i]) || !std::isfinite(anharmonicity[i]) ||
        !std::isfinite(coupling[i]))
      throw std::invalid_argument("device: non-finite parameter for qubit " + std::to_string(i));
    if (coupling[i] < 0.0)
      throw std::invalid_argument("device: coupling of qubit " + std::to_string(i) + " is negative");
  }
  if (!std::isfinite(bus_freq) || !std::isfinite(frame_freq))
    throw std::invalid_argument("device: non-finite bus or frame frequency");
}

DeviceParams canonical_params() { return DeviceParams{}; }

CMatrix ControlledHamiltonian::at(std::span<const double> coeffs) const {
  if (coeffs.size() != controls.size())
    throw invalid_dimension("hamiltonian: expected " + std::to_string(controls.size()) +
                            " control coefficients");
  CMatrix h = drift;
  for (std::size_t c = 0; c < controls.size(); ++c) {
    const auto& d = control_diagonals[c];
    for (std::size_t i = 0; i < d.size(); ++i) h(i, i) += coeffs[c] * d[i];
  }
  return h;
}

ControlledHamiltonian build_hamiltonian(const DeviceParams& params) {
  std::vector<std::size_t> all(params.qubits());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return build_hamiltonian(params, all);
}

ControlledHamiltonian build_hamiltonian(const DeviceParams& params,
                                        const std::vector<std::size_t>& controlled) {
  params.validate();
  const SubsystemDims& dims = params.dims;
  static const char* kNames[] = {"P", "S1", "S2"};

  ControlledHamiltonian ham;
  ham.dims = dims;
  ham.drift = CMatrix(dims.total());

  const CMatrix a = embed(annihilation_op(dims[0]), 0, dims);
  const CMatrix a_dag = a.adjoint();
  const double bus_offset = params.bus_freq - params.frame_freq;
  if (bus_offset != 0.0) ham.drift += (kTwoPi * bus_offset) * (a_dag * a);

  std::vector<bool> is_controlled(params.qubits(), false);
  for (std::size_t q : controlled) {
    if (q >= params.qubits()) throw invalid_dimension("hamiltonian: controlled qubit out of range");
    is_controlled[q] = true;
  }
  const auto idle = params.idle_detunings();

  for (std::size_t q = 0; q < params.qubits(); ++q) {
    const std::size_t sub = q + 1;
    const CMatrix b = embed(annihilation_op(dims[sub]), sub, dims);
    const CMatrix n = embed(number_op(dims[sub]), sub, dims);
    const double half_anh = 0.5 * params.anharmonicity[q];
    ham.drift += (kTwoPi * half_anh) * (n * n - n);
    ham.drift += (kTwoPi * params.coupling[q]) * (a_dag * b + a * b.adjoint());
    if (!is_controlled[q]) ham.drift += (kTwoPi * idle[q]) * n;
  }

  for (std::size_t q : controlled) {
    const std::size_t sub = q + 1;
    CMatrix n = embed(number_op(dims[sub]), sub, dims);
    std::vector<double> diag(dims.total());
    for (std::size_t i = 0; i < diag.size(); ++i) diag[i] = kTwoPi * n(i, i).real();
    ham.controls.push_back(kTwoPi * std::move(n));
    ham.control_diagonals.push_back(std::move(diag));
    ham.labels.push_back(q < 3 ? kNames[q] : "Q" + std::to_string(q));
    ham.controlled_qubits.push_back(q);
  }
  return ham;
}

CMatrix ifredkin_matrix(int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("iFREDKIN sign must be +1 or -1");
  CMatrix u = CMatrix::identity(8);
  u(5, 5) = 0.0;
  u(6, 6) = 0.0;
  u(5, 6) = cplx(0.0, sign);
  u(6, 5) = cplx(0.0, sign);
  return u;
}

CMatrix iswap_matrix() {
  CMatrix u = CMatrix::identity(4);
  u(1, 1) = 0.0;
  u(2, 2) = 0.0;
  u(1, 2) = cplx(0.0, 1.0);
  u(2, 1) = cplx(0.0, 1.0);
  return u;
}

TargetGate target_ifredkin(int sign, const SubsystemDims& dims) {
  if (dims.count() != 4) throw invalid_dimension("iFREDKIN needs bus + 3 qubits");
  return {sign > 0 ? "ifredkin+" : "ifredkin-", ifredkin_matrix(sign),
          computational_subspace(dims)};
}

TargetGate target_iswap(const SubsystemDims& dims) {
  if (dims.count() != 4) throw invalid_dimension("iSWAP baseline needs bus + 3 qubits");
  return {"iswap", iswap_matrix(), select_subspace(dims, {{0}, {0}, {0, 1}, {0, 1}})};
}

}  // namespace sparqs
