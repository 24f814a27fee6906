#pragma once

#include <cstddef>
#include <vector>

#include "sparqs/device.hpp"
#include "sparqs/pulse.hpp"

namespace sparqs {

/// Box on every coarse detuning sample [GHz]. Wide enough that the 56 ns
/// iFREDKIN is reachable; [−0.5, 3.5] is not.
struct Bounds {
  double lower = -2.0;
  double upper = 6.0;
};

/// Everything the optimizer needs: device, timing, target, which qubits are
/// driven and within which box.
struct ControlProblem {
  DeviceParams device;
  ScheduleSpec schedule;
  TargetGate target;
  ControlledHamiltonian hamiltonian;
  std::vector<double> idle;  // per control [GHz]
  Bounds bounds;
  /// Test hook: feed a shifted fine gradient into the filter adjoint so the
  /// gradient check has a known-bad path to reject.
  bool corrupt_filter_adjoint = false;

  std::size_t controls() const { return idle.size(); }
  std::size_t variables() const { return controls() * schedule.active_samples(); }
  const std::vector<std::string>& control_labels() const { return hamiltonian.labels; }

  void validate() const;
  /// Same problem at a different gate time.
  ControlProblem with_gate_time(double gate_time) const;
};

/// All three qubits driven, target ±iFREDKIN on the computational subspace.
ControlProblem make_ifredkin_problem(const DeviceParams& params, const ScheduleSpec& schedule,
                                     int sign = +1);

/// Only `controlled` qubits are driven; the rest sit at their idle detuning.
ControlProblem make_problem(const DeviceParams& params, const ScheduleSpec& schedule,
                            TargetGate target, const std::vector<std::size_t>& controlled);

}  // namespace sparqs
