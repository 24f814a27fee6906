#pragma once

// Multi-start GRAPE: maximize the projected fidelity over the coarse
// detuning samples with the box-constrained quasi-Newton minimizer applied to
// 1 − Φ. Restarts draw idle + N(0, scale²) initial pulses from sub-seeds of
// one master seed, so a run is reproducible from (problem, options).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "sparqs/objective.hpp"
#include "sparqs/optimizer.hpp"
#include "sparqs/problem.hpp"

namespace sparqs {

enum class BoxHandling {
  /// Optimize y with δ = mid + half·sin(y), unconstrained, Wolfe line search.
  sine,
  /// Optimize δ directly with the projected Armijo search.
  projection,
};

std::string_view to_string(BoxHandling b);
/// "sine" or "projection"; throws std::invalid_argument otherwise.
BoxHandling parse_box_handling(std::string_view name);

struct OptimizerOptions {
  double target_fidelity = 0.9999;
  std::size_t max_iterations = 2000;
  std::size_t restarts = 20;
  double initial_scale = 1.0;   // GHz
  std::size_t memory = 0;       // dense BFGS; see BoxLbfgsOptions::memory
  BoxHandling box = BoxHandling::sine;
  double armijo = 1e-4;
  double curvature = 0.9;       // Wolfe, sine handling only
  double backtrack = 0.5;
  std::size_t max_backtracks = 40;
  double initial_step = 0.05;   // first steepest-descent move, in optimizer coordinates
  double h0 = 1.0;              // see BoxLbfgsOptions::h0
  double gradient_tolerance = 1e-9;
  /// A restart ends once 1 − Φ shrinks by less than stall_reduction (relative)
  /// over stall_window iterations; 0 disables.
  std::size_t stall_window = 200;
  double stall_reduction = 0.01;
  std::uint64_t seed = 1;
  /// Used as the starting point of restart 0 when set.
  std::optional<CoarsePulse> initial_guess;
  /// One line per iteration: restart, iteration, Φ, step, gradient norm.
  std::ostream* log = nullptr;

  void validate() const;
};

struct RestartSummary {
  std::size_t restart = 0;
  double fidelity = 0.0;
  std::size_t iterations = 0;
  StopReason reason = StopReason::max_iterations;
};

struct OptimizeResult {
  CoarsePulse best_pulse;
  double best_fidelity = 0.0;
  std::vector<double> trace;  // Φ per accepted iteration of the best restart
  std::size_t iterations = 0;        // of the best restart
  std::size_t iterations_total = 0;  // over all restarts
  std::size_t restart_index = 0;
  std::size_t restarts_used = 0;
  StopReason reason = StopReason::max_iterations;
  double wall_seconds = 0.0;
  std::vector<RestartSummary> restarts;

  bool reached(double target) const { return best_fidelity >= target; }
};

/// Sub-seed for restart r of a run seeded with `seed`.
std::uint64_t restart_seed(std::uint64_t seed, std::size_t restart);

/// idle + N(0, scale²) on every active sample, clipped to the box.
CoarsePulse random_pulse(const ControlProblem& problem, double scale, std::uint64_t seed);

/// Runs restarts in order and stops at the first one that reaches the target.
OptimizeResult optimize(const ControlProblem& problem, const OptimizerOptions& opts);

struct GradientCheck {
  double max_relative_error = 0.0;
  double max_absolute_error = 0.0;
  std::size_t probes = 0;
};

/// Analytic gradient against central differences with step fd_step [GHz] on
/// n_probes random coordinates. Relative error per probe is
/// |g − g_fd| / max(|g|, |g_fd|, floor) where floor = 1e−6·‖g‖_∞ keeps
/// coordinates with a vanishing derivative from dividing by round-off.
GradientCheck check_gradient(const ControlProblem& problem, const CoarsePulse& pulse,
                             std::size_t n_probes, double fd_step, std::uint64_t seed = 7);

}  // namespace sparqs
