#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "sparqs/errors.hpp"
#include "sparqs/experiments.hpp"

using namespace sparqs;

namespace {

ScheduleSpec schedule(double tg) {
  ScheduleSpec s;
  s.gate_time = tg;
  return s;
}

OptimizerOptions quick(std::size_t iterations, std::size_t restarts = 1) {
  OptimizerOptions o;
  o.max_iterations = iterations;
  o.restarts = restarts;
  o.seed = 42;
  return o;
}

CMatrix embed(const TargetGate& t) {
  CMatrix u = CMatrix::identity(81);
  const auto& idx = t.subspace.indices;
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) u(idx[r], idx[c]) = t.unitary(r, c);
  return u;
}

}  // namespace

TEST_CASE("restart seeds and random pulses") {
  CHECK(restart_seed(1, 0) == restart_seed(1, 0));
  CHECK(restart_seed(1, 0) != restart_seed(1, 1));
  CHECK(restart_seed(1, 0) != restart_seed(2, 0));

  const auto p = make_ifredkin_problem(canonical_params(), schedule(20.0));
  const CoarsePulse idle = random_pulse(p, 0.0, 7);
  for (std::size_t c = 0; c < 3; ++c)
    for (double x : idle.values[c]) CHECK(x == p.idle[c]);
  const CoarsePulse wild = random_pulse(p, 50.0, 7);
  bool clipped = false;
  for (const auto& v : wild.values)
    for (double x : v) {
      CHECK(x >= p.bounds.lower);
      CHECK(x <= p.bounds.upper);
      clipped = clipped || x == p.bounds.lower || x == p.bounds.upper;
    }
  CHECK(clipped);
}

TEST_CASE("optimize is deterministic, monotone and feasible") {
  const auto p = iswap_baseline(canonical_params(), schedule(20.0));
  const OptimizeResult a = optimize(p, quick(25, 2));
  const OptimizeResult b = optimize(p, quick(25, 2));
  CHECK(a.trace == b.trace);
  CHECK(a.best_pulse.values == b.best_pulse.values);
  CHECK(a.restarts_used == 2);
  CHECK(a.restarts.size() == 2);
  CHECK(a.iterations_total == a.restarts[0].iterations + a.restarts[1].iterations);
  for (std::size_t k = 1; k < a.trace.size(); ++k) CHECK(a.trace[k] >= a.trace[k - 1]);
  CHECK(a.trace.back() == doctest::Approx(a.best_fidelity));
  for (const auto& v : a.best_pulse.values)
    for (double x : v) {
      CHECK(x >= p.bounds.lower);
      CHECK(x <= p.bounds.upper);
    }
  // the reported fidelity is the fidelity of the reported pulse
  CHECK(fidelity_and_gradient(p, a.best_pulse).fidelity == doctest::Approx(a.best_fidelity).epsilon(1e-12));

  OptimizerOptions other = quick(25, 2);
  other.seed = 43;
  CHECK(optimize(p, other).trace != a.trace);
}

TEST_CASE("both box handlings keep the pulse inside a tight box") {
  auto p = iswap_baseline(canonical_params(), schedule(20.0));
  p.bounds = {1.0, 2.2};
  for (BoxHandling box : {BoxHandling::sine, BoxHandling::projection}) {
    CAPTURE(to_string(box));
    OptimizerOptions o = quick(30);
    o.box = box;
    const OptimizeResult r = optimize(p, o);
    CHECK(r.best_fidelity > r.trace.front());
    for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] >= r.trace[k - 1]);
    for (const auto& v : r.best_pulse.values)
      for (double x : v) {
        CHECK(x >= 1.0);
        CHECK(x <= 2.2);
      }
  }
  CHECK(parse_box_handling("projection") == BoxHandling::projection);
  CHECK_THROWS_AS(parse_box_handling("clip"), std::invalid_argument);
}

TEST_CASE("optimize stops at the first restart that reaches the target") {
  const auto p = iswap_baseline(canonical_params(), schedule(20.0));
  // whatever restart 0 achieves on its own becomes the target
  const double first = optimize(p, quick(50, 1)).best_fidelity;
  OptimizerOptions o = quick(50, 5);
  o.target_fidelity = first;
  const OptimizeResult r = optimize(p, o);
  CHECK(r.reached(first));
  CHECK(r.restarts_used == 1);
  CHECK(r.reason == StopReason::target_reached);
}

TEST_CASE("optimizer options are validated") {
  const auto p = iswap_baseline(canonical_params(), schedule(20.0));
  OptimizerOptions o = quick(5);
  o.restarts = 0;
  CHECK_THROWS_AS(optimize(p, o), std::invalid_argument);
  o = quick(5);
  o.target_fidelity = 1.5;
  CHECK_THROWS_AS(optimize(p, o), std::invalid_argument);
  o = quick(5);
  o.curvature = 1e-5;
  CHECK_THROWS_AS(optimize(p, o), std::invalid_argument);
  o = quick(5);
  o.initial_guess = CoarsePulse::at_idle(p.idle, 3);
  CHECK_THROWS_AS(optimize(p, o), grid_mismatch);
}

TEST_CASE("problem kinds and the parked baseline") {
  CHECK(parse_problem_kind("ifredkin+") == ProblemKind::ifredkin_plus);
  CHECK(parse_problem_kind("ifredkin-") == ProblemKind::ifredkin_minus);
  CHECK(parse_problem_kind("iswap-baseline") == ProblemKind::iswap_baseline);
  CHECK_THROWS_AS(parse_problem_kind("fredkin"), std::invalid_argument);
  CHECK(to_string(ProblemKind::iswap_baseline) == "iswap-baseline");

  const auto base = iswap_baseline(canonical_params());
  CHECK(base.controls() == 2);
  CHECK(base.control_labels() == std::vector<std::string>{"S1", "S2"});
  CHECK(base.device.idle_detunings()[0] == doctest::Approx(10.0 - 6.5));
  CHECK(base.target.subspace.size() == 4);
  CHECK(base.hamiltonian.dim() == 81);  // P stays in the model
  // both problems share the device apart from the parked qubit
  const auto full = make_problem(ProblemKind::ifredkin_plus, canonical_params(), ScheduleSpec{});
  CHECK(full.controls() == 3);
  CHECK(full.device.coupling == base.device.coupling);
  CHECK(full.device.anharmonicity == base.device.anharmonicity);
}

TEST_CASE("entangler check") {
  CHECK(entangler_check(CMatrix::identity(81)) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(entangler_check(embed(target_ifredkin(+1))) == doctest::Approx(1.0).epsilon(1e-15));
  CMatrix phased = embed(target_ifredkin(+1));
  phased *= std::exp(cplx(0.0, 2.1));
  CHECK(entangler_check(phased) == doctest::Approx(1.0).epsilon(1e-14));
  // the opposite phase sends |101⟩ to −i|110⟩, orthogonal to the +i branch
  CHECK(entangler_check(embed(target_ifredkin(-1))) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(entangler_check(CMatrix::identity(8)), invalid_dimension);
}

TEST_CASE("gate time ranges") {
  CHECK(gate_time_range(40, 70, 1).size() == 31);
  CHECK(gate_time_range(56, 56, 1) == std::vector<double>{56.0});
  CHECK(gate_time_range(40, 50, 2.5).back() == doctest::Approx(50.0));
  CHECK_THROWS_AS(gate_time_range(60, 50, 1), std::invalid_argument);
  CHECK_THROWS_AS(gate_time_range(40, 50, 0), std::invalid_argument);
}

TEST_CASE("sweep bookkeeping") {
  const auto p = iswap_baseline(canonical_params(), schedule(20.0));
  const OptimizerOptions o = quick(10);

  SweepOptions cold;
  cold.warm_start = false;
  const SweepResult one = speed_limit_sweep(p, {20.0}, o, cold);
  const OptimizeResult direct = optimize(p, o);
  REQUIRE(one.points.size() == 1);
  CHECK(one.points[0].best_fidelity == direct.best_fidelity);
  CHECK(one.points[0].iterations_total == direct.iterations_total);

  const SweepResult warm = speed_limit_sweep(p, {16.0, 18.0}, o);
  CHECK_FALSE(warm.points[0].warm_started);
  CHECK(warm.points[1].warm_started);
  CHECK(warm.points[1].best_pulse.values[0].size() == 10);

  std::stringstream ss;
  write_sweep_csv(ss, warm);
  std::string header, row;
  std::getline(ss, header);
  std::getline(ss, row);
  CHECK(header == "t_g_ns,best_fidelity,restarts_used,iterations_total,warm_started");
  CHECK(row.rfind("16,", 0) == 0);

  CHECK_THROWS_AS(speed_limit_sweep(p, {}, o), std::invalid_argument);
  CHECK_THROWS_AS(speed_limit_sweep(p, {20.0, 18.0}, o), std::invalid_argument);
  CHECK_THROWS_AS(speed_limit_sweep(p, {10.0}, o), schedule_error);

  SweepResult none{0.9999, {}};
  CHECK_FALSE(none.minimal_feasible().has_value());
}

TEST_CASE("swap dynamics without coupling") {
  DeviceParams d = canonical_params();
  d.coupling = {0.0, 0.0, 0.0};
  const auto p = make_ifredkin_problem(d, schedule(20.0));
  const SwapDynamics s = swap_dynamics(p, random_pulse(p, 0.5, 3));
  CHECK(s.final_target == doctest::Approx(0.0));
  CHECK(s.final_leak == doctest::Approx(0.0));
  CHECK(s.peak_control == doctest::Approx(0.0));
  for (const auto& row : s.trajectory.populations) CHECK(row[0] == doctest::Approx(1.0).epsilon(1e-12));
}
