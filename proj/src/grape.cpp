#include "sparqs/grape.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "sparqs/errors.hpp"

namespace sparqs {

void OptimizerOptions::validate() const {
  if (!(target_fidelity > 0.0 && target_fidelity <= 1.0))
    throw std::invalid_argument("optimizer: target fidelity must lie in (0, 1]");
  if (restarts < 1) throw std::invalid_argument("optimizer: need at least one restart");
  if (!(initial_scale >= 0.0)) throw std::invalid_argument("optimizer: initial scale must be non-negative");
  if (!(armijo > 0.0 && armijo < 1.0)) throw std::invalid_argument("optimizer: armijo must lie in (0, 1)");
  if (!(curvature > armijo && curvature < 1.0))
    throw std::invalid_argument("optimizer: curvature must lie in (armijo, 1)");
  if (!(backtrack > 0.0 && backtrack < 1.0))
    throw std::invalid_argument("optimizer: backtrack factor must lie in (0, 1)");
  if (!(stall_reduction >= 0.0 && stall_reduction < 1.0))
    throw std::invalid_argument("optimizer: stall reduction must lie in [0, 1)");
  if (!(initial_step > 0.0)) throw std::invalid_argument("optimizer: initial step must be positive");
}

std::string_view to_string(BoxHandling b) {
  return b == BoxHandling::sine ? "sine" : "projection";
}

BoxHandling parse_box_handling(std::string_view name) {
  if (name == "sine") return BoxHandling::sine;
  if (name == "projection") return BoxHandling::projection;
  throw std::invalid_argument("unknown box handling '" + std::string(name) +
                              "' (expected sine or projection)");
}

std::uint64_t restart_seed(std::uint64_t seed, std::size_t restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart), 0x5eedu};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

CoarsePulse random_pulse(const ControlProblem& problem, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CoarsePulse p = CoarsePulse::at_idle(problem.idle, problem.schedule.active_samples());
  for (auto& v : p.values)
    for (double& x : v)
      x = std::clamp(x + scale * normal(rng), problem.bounds.lower, problem.bounds.upper);
  return p;
}

OptimizeResult optimize(const ControlProblem& problem, const OptimizerOptions& opts) {
  opts.validate();
  problem.validate();
  const auto start = std::chrono::steady_clock::now();
  const FidelityEvaluator evaluator(problem);
  const std::size_t n = problem.variables();
  const bool sine = opts.box == BoxHandling::sine;
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::vector<double> lower(n, sine ? -inf : problem.bounds.lower);
  const std::vector<double> upper(n, sine ? inf : problem.bounds.upper);
  // x = mid + half·sin(y) maps every real y into the box
  const double mid = 0.5 * (problem.bounds.lower + problem.bounds.upper);
  const double half = 0.5 * (problem.bounds.upper - problem.bounds.lower);
  auto to_pulse = [&](std::span<const double> y, std::vector<double>& x) {
    x.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = sine ? mid + half * std::sin(y[i]) : y[i];
  };

  BoxLbfgsOptions box;
  box.memory = opts.memory;
  box.max_iterations = opts.max_iterations;
  box.gradient_tolerance = opts.gradient_tolerance;
  box.stop_value = 1.0 - opts.target_fidelity;
  box.armijo = opts.armijo;
  box.curvature = opts.curvature;
  box.backtrack = opts.backtrack;
  box.max_backtracks = opts.max_backtracks;
  box.initial_step = opts.initial_step;
  box.h0 = opts.h0;
  box.stall_window = opts.stall_window;
  box.stall_reduction = opts.stall_reduction;
  box.line_search = sine ? LineSearch::strong_wolfe : LineSearch::projected_armijo;

  OptimizeResult best;
  best.best_fidelity = -1.0;
  for (std::size_t r = 0; r < opts.restarts; ++r) {
    CoarsePulse x0 = (r == 0 && opts.initial_guess)
                         ? *opts.initial_guess
                         : random_pulse(problem, opts.initial_scale, restart_seed(opts.seed, r));
    if (x0.controls() != problem.controls() ||
        (x0.controls() > 0 && x0.values.front().size() != problem.schedule.active_samples()))
      throw grid_mismatch("optimizer: initial guess does not match the schedule");

    std::vector<double> x;
    Objective objective = [&](std::span<const double> y, std::span<double> grad) {
      to_pulse(y, x);
      FidelityResult fr;
      try {
        fr = evaluator.evaluate(x, true);
      } catch (const nonfinite_objective&) {
        std::string where;
        char buf[32];
        for (std::size_t i = 0; i < std::min<std::size_t>(x.size(), 8); ++i) {
          std::snprintf(buf, sizeof buf, "%s%.6g", i ? ", " : "", x[i]);
          where += buf;
        }
        throw nonfinite_objective("non-finite fidelity in restart " + std::to_string(r) +
                                  " at pulse [" + where + (x.size() > 8 ? ", …]" : "]"));
      }
      for (std::size_t i = 0; i < grad.size(); ++i)
        grad[i] = -fr.gradient[i] * (sine ? half * std::cos(y[i]) : 1.0);
      return 1.0 - fr.fidelity;
    };
    Monitor monitor;
    if (opts.log) {
      monitor = [&](const IterationInfo& it) {
        char line[160];
        std::snprintf(line, sizeof line, "%zu %zu %.12f %.6e %.6e\n", r, it.iteration,
                      1.0 - it.value, it.step, it.pg_norm);
        *opts.log << line;
      };
    }
    std::vector<double> start = x0.flatten();
    if (sine) {
      // a start exactly on the box edge would have a zero derivative there
      const double edge = 1.0 - 1e-6;
      for (double& v : start) v = std::asin(std::clamp((v - mid) / half, -edge, edge));
    }
    MinimizeResult mr = minimize_box(objective, std::move(start), lower, upper, box, monitor);
    to_pulse(mr.x, x);
    mr.x = x;
    const double phi = 1.0 - mr.value;
    best.restarts.push_back({r, phi, mr.iterations, mr.reason});
    best.iterations_total += mr.iterations;
    best.restarts_used = r + 1;
    if (phi > best.best_fidelity) {
      best.best_fidelity = phi;
      best.best_pulse = CoarsePulse::unflatten(mr.x, problem.idle);
      best.trace.clear();
      for (double v : mr.trace) best.trace.push_back(1.0 - v);
      best.iterations = mr.iterations;
      best.restart_index = r;
      best.reason = mr.reason;
    }
    if (phi >= opts.target_fidelity) break;
  }
  best.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return best;
}

GradientCheck check_gradient(const ControlProblem& problem, const CoarsePulse& pulse,
                             std::size_t n_probes, double fd_step, std::uint64_t seed) {
  const FidelityEvaluator evaluator(problem);
  const std::vector<double> x = pulse.flatten();
  const FidelityResult base = evaluator.evaluate(x, true);
  double gmax = 0.0;
  for (double g : base.gradient) gmax = std::max(gmax, std::abs(g));
  const double floor = 1e-6 * gmax;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
  GradientCheck out;
  std::vector<double> probe = x;
  for (std::size_t p = 0; p < n_probes; ++p) {
    const std::size_t i = pick(rng);
    probe[i] = x[i] + fd_step;
    const double fp = evaluator.evaluate(probe, false).fidelity;
    probe[i] = x[i] - fd_step;
    const double fm = evaluator.evaluate(probe, false).fidelity;
    probe[i] = x[i];
    const double fd = (fp - fm) / (2.0 * fd_step);
    const double g = base.gradient[i];
    const double abs_err = std::abs(g - fd);
    const double denom = std::max({std::abs(g), std::abs(fd), floor});
    out.max_absolute_error = std::max(out.max_absolute_error, abs_err);
    out.max_relative_error = std::max(out.max_relative_error, denom > 0.0 ? abs_err / denom : 0.0);
    ++out.probes;
  }
  return out;
}

}  // namespace sparqs
