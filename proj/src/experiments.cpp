#include "sparqs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "sparqs/errors.hpp"

namespace sparqs {

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::ifredkin_plus:
      return "ifredkin+";
    case ProblemKind::ifredkin_minus:
      return "ifredkin-";
    case ProblemKind::iswap_baseline:
      return "iswap-baseline";
  }
  return "unknown";
}

ProblemKind parse_problem_kind(std::string_view text) {
  if (text == "ifredkin+") return ProblemKind::ifredkin_plus;
  if (text == "ifredkin-") return ProblemKind::ifredkin_minus;
  if (text == "iswap-baseline") return ProblemKind::iswap_baseline;
  throw std::invalid_argument("unknown problem '" + std::string(text) +
                              "' (expected ifredkin+, ifredkin- or iswap-baseline)");
}

ControlProblem iswap_baseline(const DeviceParams& params, const ScheduleSpec& schedule) {
  DeviceParams parked = params;
  parked.qubit_freq.at(0) = kParkingFreq;
  return make_problem(parked, schedule, target_iswap(parked.dims), {1, 2});
}

ControlProblem make_problem(ProblemKind kind, const DeviceParams& params,
                            const ScheduleSpec& schedule) {
  switch (kind) {
    case ProblemKind::ifredkin_plus:
      return make_ifredkin_problem(params, schedule, +1);
    case ProblemKind::ifredkin_minus:
      return make_ifredkin_problem(params, schedule, -1);
    case ProblemKind::iswap_baseline:
      return iswap_baseline(params, schedule);
  }
  throw std::invalid_argument("unknown problem kind");
}

std::optional<double> SweepResult::minimal_feasible() const {
  for (const auto& p : points)
    if (p.best_fidelity >= target) return p.gate_time;
  return std::nullopt;
}

std::vector<double> gate_time_range(double t_min, double t_max, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("sweep: step must be positive");
  if (!(t_max >= t_min)) throw std::invalid_argument("sweep: empty gate-time range");
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((t_max - t_min) / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) out.push_back(t_min + static_cast<double>(i) * step);
  return out;
}

SweepResult speed_limit_sweep(const ControlProblem& problem, const std::vector<double>& gate_times,
                              const OptimizerOptions& opts, const SweepOptions& sweep,
                              const SweepMonitor& monitor) {
  if (gate_times.empty()) throw std::invalid_argument("sweep: no gate times given");
  for (std::size_t i = 1; i < gate_times.size(); ++i)
    if (!(gate_times[i] > gate_times[i - 1]))
      throw std::invalid_argument("sweep: gate times must be strictly increasing");

  SweepResult result;
  result.target = opts.target_fidelity;
  const CoarsePulse* previous = nullptr;
  for (double tg : gate_times) {
    const ControlProblem p = problem.with_gate_time(tg);
    OptimizerOptions o = opts;
    const bool warm = sweep.warm_start && previous != nullptr;
    if (warm) o.initial_guess = resample(*previous, p.schedule);
    const OptimizeResult r = optimize(p, o);

    SweepPoint point;
    point.gate_time = tg;
    point.best_fidelity = r.best_fidelity;
    point.restarts_used = r.restarts_used;
    point.iterations_total = r.iterations_total;
    point.warm_started = warm;
    point.best_pulse = r.best_pulse;
    result.points.push_back(std::move(point));
    previous = &result.points.back().best_pulse;
    if (monitor) monitor(result.points.back());
    if (sweep.stop_at_first_feasible && r.reached(opts.target_fidelity)) break;
  }
  return result;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  os << "t_g_ns,best_fidelity,restarts_used,iterations_total,warm_started\n";
  char line[160];
  for (const auto& p : result.points) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%zu,%zu,%d\n", p.gate_time, p.best_fidelity,
                  p.restarts_used, p.iterations_total, p.warm_started ? 1 : 0);
    os << line;
  }
}

double entangler_check(const CMatrix& u, const SubsystemDims& dims) {
  const std::size_t a = basis_index(BasisLabel::parse("0|001"), dims);
  const std::size_t b = basis_index(BasisLabel::parse("0|101"), dims);
  const std::size_t c = basis_index(BasisLabel::parse("0|110"), dims);
  if (u.rows() != dims.total() || u.cols() != dims.total())
    throw invalid_dimension("entangler check: unitary does not match the system dimension");
  // ⟨GHZ| U |in⟩ = (U_aa + U_ab − i U_ca − i U_cb) / 2
  const cplx i(0.0, 1.0);
  const cplx amp = (u(a, a) + u(a, b) - i * u(c, a) - i * u(c, b)) / 2.0;
  return std::norm(amp);
}

std::vector<std::string> default_watch() { return {"0|110", "0|101", "1|100", "leak", "other"}; }

SwapDynamics swap_dynamics(const ControlProblem& problem, const CoarsePulse& pulse) {
  const FilterMatrix filter(problem.schedule);
  SwapDynamics out;
  out.trajectory = trajectory(problem.hamiltonian, filter.apply(pulse), problem.schedule,
                              BasisLabel::parse("0|110"), default_watch());
  const Trajectory& tr = out.trajectory;
  const std::size_t target = tr.column("p_0_101");
  const std::size_t leak = tr.column("p_leak");
  const std::size_t control = tr.column("p_1_100");
  out.final_target = tr.populations.back()[target];
  out.final_leak = tr.populations.back()[leak];
  for (std::size_t m = 1; m + 1 < tr.t.size(); ++m) {
    out.peak_leak = std::max(out.peak_leak, tr.populations[m][leak]);
    out.peak_control = std::max(out.peak_control, tr.populations[m][control]);
  }
  return out;
}

}  // namespace sparqs
