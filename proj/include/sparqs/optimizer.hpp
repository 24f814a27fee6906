#pragma once

// Quasi-Newton minimizer on a box. Each iteration builds a BFGS direction
// (two-loop L-BFGS, or a dense inverse Hessian) on the variables not pinned
// at an active bound, then backtracks along the projected path
// x(α) = P(x + α·d) until the Armijo condition holds. Every iterate is
// feasible. Unbounded problems can use a strong Wolfe search instead, which
// keeps the curvature pairs well conditioned.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace sparqs {

enum class LineSearch {
  projected_armijo,
  strong_wolfe,  // all bounds must be infinite
};

struct BoxLbfgsOptions {
  /// Correction pairs kept. Zero keeps a full n×n inverse Hessian instead.
  std::size_t memory = 10;
  std::size_t max_iterations = 2000;
  /// Stop when ‖P(x − ∇f) − x‖_∞ falls below this.
  double gradient_tolerance = 1e-9;
  /// Stop as soon as f ≤ stop_value.
  double stop_value = -std::numeric_limits<double>::infinity();
  LineSearch line_search = LineSearch::projected_armijo;
  double armijo = 1e-4;
  /// Wolfe curvature constant, |f'(α)| ≤ curvature·|f'(0)|.
  double curvature = 0.9;
  double backtrack = 0.5;
  /// Function evaluations allowed per line search.
  std::size_t max_backtracks = 40;
  /// Stop once f has dropped by less than stall_reduction·|f| over the last
  /// stall_window iterations. Zero window disables the check.
  std::size_t stall_window = 0;
  double stall_reduction = 0.01;
  /// Largest coordinate move of the very first (steepest-descent) step.
  double initial_step = 0.05;
  /// Seed matrix H0 = h0·I of the two-loop recursion. Zero selects the
  /// usual secant scaling sᵀy/yᵀy from the newest pair.
  double h0 = 0.0;
};

enum class StopReason {
  target_reached,
  gradient_small,
  max_iterations,
  line_search_failed,
  stalled,
};

std::string_view to_string(StopReason r);

struct IterationInfo {
  std::size_t iteration;
  double value;
  double step;     // ‖x_k − x_{k−1}‖_∞, 0 at iteration 0
  double pg_norm;  // projected gradient, ∞-norm
};

/// Returns f(x) and writes ∇f(x) into grad.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;
using Monitor = std::function<void(const IterationInfo&)>;

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;   // accepted steps
  std::size_t evaluations = 0;
  StopReason reason = StopReason::max_iterations;
  std::vector<double> trace;    // f at iteration 0, 1, …
};

MinimizeResult minimize_box(const Objective& f, std::vector<double> x0,
                            std::span<const double> lower, std::span<const double> upper,
                            const BoxLbfgsOptions& opts, const Monitor& monitor = {});

}  // namespace sparqs
