#include "sparqs/problem.hpp"

#include <stdexcept>

#include "sparqs/errors.hpp"

namespace sparqs {

void ControlProblem::validate() const {
  device.validate();
  schedule.validate();
  if (hamiltonian.controls.size() != idle.size())
    throw invalid_dimension("problem: control count does not match idle list");
  if (target.unitary.rows() != target.subspace.size())
    throw invalid_dimension("problem: target dimension does not match its subspace");
  if (!(bounds.lower < bounds.upper))
    throw std::invalid_argument("problem: lower bound must be below upper bound");
  for (double v : idle)
    if (v < bounds.lower || v > bounds.upper)
      throw std::invalid_argument("problem: idle detuning lies outside the control box");
}

ControlProblem ControlProblem::with_gate_time(double gate_time) const {
  ControlProblem p = *this;
  p.schedule.gate_time = gate_time;
  p.schedule.validate();
  return p;
}

ControlProblem make_problem(const DeviceParams& params, const ScheduleSpec& schedule,
                            TargetGate target, const std::vector<std::size_t>& controlled) {
  ControlProblem p;
  p.device = params;
  p.schedule = schedule;
  p.target = std::move(target);
  p.hamiltonian = build_hamiltonian(params, controlled);
  const auto idle = params.idle_detunings();
  for (std::size_t q : controlled) p.idle.push_back(idle[q]);
  p.validate();
  return p;
}

ControlProblem make_ifredkin_problem(const DeviceParams& params, const ScheduleSpec& schedule,
                                     int sign) {
  std::vector<std::size_t> all(params.qubits());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return make_problem(params, schedule, target_ifredkin(sign, params.dims), all);
}

}  // namespace sparqs
