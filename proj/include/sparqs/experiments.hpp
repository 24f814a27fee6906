#pragma once

// The studies built on top of the optimizer: the iFREDKIN synthesis, the
// gate-time sweep, the parked-P iSWAP baseline, the GHZ entangler check and
// the two-excitation population dynamics.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparqs/grape.hpp"
#include "sparqs/problem.hpp"

namespace sparqs {

enum class ProblemKind { ifredkin_plus, ifredkin_minus, iswap_baseline };

std::string_view to_string(ProblemKind kind);
/// "ifredkin+", "ifredkin-", "iswap-baseline"; throws std::invalid_argument.
ProblemKind parse_problem_kind(std::string_view text);

/// P parked at this frequency for the baseline [GHz].
inline constexpr double kParkingFreq = 10.0;

/// S1 and S2 driven, P held at kParkingFreq but kept in the model, target
/// iSWAP on (S1, S2) with bus and P in their ground states.
ControlProblem iswap_baseline(const DeviceParams& params, const ScheduleSpec& schedule = {});

ControlProblem make_problem(ProblemKind kind, const DeviceParams& params,
                            const ScheduleSpec& schedule);

struct SweepPoint {
  double gate_time = 0.0;
  double best_fidelity = 0.0;
  std::size_t restarts_used = 0;
  std::size_t iterations_total = 0;
  bool warm_started = false;
  CoarsePulse best_pulse;
};

struct SweepResult {
  double target = 0.0;
  std::vector<SweepPoint> points;

  /// Shortest gate time whose best fidelity reached the target.
  std::optional<double> minimal_feasible() const;
};

struct SweepOptions {
  /// Seed restart 0 of each gate time with the previous best pulse,
  /// stretched onto the new grid.
  bool warm_start = true;
  /// Stop after the first gate time that reaches the target.
  bool stop_at_first_feasible = false;
};

using SweepMonitor = std::function<void(const SweepPoint&)>;

/// gate_times must be strictly increasing; throws std::invalid_argument if
/// empty or unsorted.
SweepResult speed_limit_sweep(const ControlProblem& problem, const std::vector<double>& gate_times,
                              const OptimizerOptions& opts, const SweepOptions& sweep = {},
                              const SweepMonitor& monitor = {});

/// t_min, t_min + step, … up to t_max (inclusive, with a little slack for
/// rounding). Throws std::invalid_argument for an empty range.
std::vector<double> gate_time_range(double t_min, double t_max, double step);

void write_sweep_csv(std::ostream& os, const SweepResult& result);

/// |⟨GHZ|U|in⟩|² with in = (|0|001⟩ + |0|101⟩)/√2 and
/// GHZ = (|0|001⟩ + i|0|110⟩)/√2; the modulus removes the global phase.
double entangler_check(const CMatrix& u, const SubsystemDims& dims = {});

/// What the two-excitation swap 0|110 → 0|101 looks like under a pulse.
struct SwapDynamics {
  double final_target = 0.0;      // p(0|101) at t_g
  double final_leak = 0.0;        // any qubit ≥ 2, at t_g
  double peak_leak = 0.0;         // largest interior leakage
  double peak_control = 0.0;      // largest interior p(1|100)
  Trajectory trajectory;
};

SwapDynamics swap_dynamics(const ControlProblem& problem, const CoarsePulse& pulse);

/// Default watch list: 0|110, 0|101, 1|100, leak, other.
std::vector<std::string> default_watch();

}  // namespace sparqs
