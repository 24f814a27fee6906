#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "sparqs/errors.hpp"
#include "sparqs/pulse.hpp"

using namespace sparqs;

namespace {

CoarsePulse random_coarse(const ScheduleSpec& spec, std::size_t controls, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 3.5);
  CoarsePulse p;
  for (std::size_t c = 0; c < controls; ++c) {
    p.idle.push_back(1.0 + 0.5 * static_cast<double>(c));
    std::vector<double> v(spec.active_samples());
    for (double& x : v) x = u(rng);
    p.values.push_back(std::move(v));
  }
  return p;
}

}  // namespace

TEST_CASE("schedule geometry") {
  ScheduleSpec spec;
  spec.validate();
  CHECK(spec.fine_steps() == 560);
  CHECK(spec.coarse_steps() == 56);
  CHECK(spec.active_samples() == 48);
  CHECK(spec.fine_per_coarse() == 10);

  ScheduleSpec bad = spec;
  bad.gate_time = 8.0;
  CHECK_THROWS_AS(bad.validate(), schedule_error);
  bad.gate_time = 10.0;
  CHECK_THROWS_AS(bad.validate(), schedule_error);
  bad = spec;
  bad.coarse_dt = 0.25;
  CHECK_THROWS_AS(bad.validate(), schedule_error);  // not a multiple of 0.1
  bad = spec;
  bad.gate_time = 56.5;
  CHECK_THROWS_AS(bad.validate(), schedule_error);
  bad = spec;
  bad.filter_sigma = 0.0;
  CHECK_THROWS_AS(bad.validate(), schedule_error);
}

TEST_CASE("zero-order hold") {
  ScheduleSpec spec;
  auto constant = CoarsePulse::at_idle(std::vector<double>{0.7}, spec.active_samples());
  constant.values[0].assign(spec.active_samples(), 0.7);
  const FinePulse f = zero_order_hold(constant, spec);
  REQUIRE(f.steps() == 560);
  for (double v : f.values[0]) CHECK(v == 0.7);

  CoarsePulse two = CoarsePulse::at_idle(std::vector<double>{0.0}, spec.active_samples());
  two.values[0][0] = 1.25;
  two.values[0][1] = -0.5;
  const FinePulse g = zero_order_hold(two, spec);
  const std::size_t start = spec.buffer_samples() * spec.fine_per_coarse();
  for (std::size_t m = 0; m < 10; ++m) {
    CHECK(g.values[0][start + m] == 1.25);
    CHECK(g.values[0][start + 10 + m] == -0.5);
  }
  CHECK(g.values[0][start - 1] == 0.0);

  CoarsePulse wrong = two;
  wrong.values[0].pop_back();
  CHECK_THROWS_AS(zero_order_hold(wrong, spec), grid_mismatch);
}

TEST_CASE("gaussian filter: unit DC gain and kernel peak") {
  ScheduleSpec spec;
  const auto w = gaussian_kernel(spec);
  CHECK(w.size() == 41);
  double sum = 0.0;
  for (double x : w) sum += x;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));

  FinePulse flat{{std::vector<double>(560, 1.7)}, {1.7}};
  const FinePulse smoothed = gaussian_filter(flat, spec);
  for (double v : smoothed.values[0]) CHECK(v == doctest::Approx(1.7).epsilon(1e-14));

  // impulse response: the normalized Gaussian sampled at its centre
  FinePulse impulse{{std::vector<double>(560, 0.0)}, {0.0}};
  impulse.values[0][300] = 1.0;
  const auto out = gaussian_filter(impulse, spec).values[0];
  const double analytic = spec.fine_dt / (spec.filter_sigma * std::sqrt(2.0 * M_PI));
  CHECK(out[300] == doctest::Approx(analytic).epsilon(1e-5));
  CHECK(out[300] == doctest::Approx(0.0997).epsilon(1e-3));
  CHECK(out[300 + 7] == doctest::Approx(out[300 - 7]).epsilon(1e-15));
}

TEST_CASE("gaussian filter: 10-90 rise time of a step") {
  ScheduleSpec spec;
  spec.gate_time = 40.0;
  CoarsePulse step = CoarsePulse::at_idle(std::vector<double>{0.0}, spec.active_samples());
  for (std::size_t k = spec.active_samples() / 2; k < spec.active_samples(); ++k) step.values[0][k] = 1.0;
  const auto y = gaussian_filter(zero_order_hold(step, spec), spec).values[0];
  auto crossing = [&](double level) {
    for (std::size_t m = 1; m < y.size(); ++m)
      if (y[m - 1] < level && y[m] >= level)
        return (static_cast<double>(m - 1) + (level - y[m - 1]) / (y[m] - y[m - 1])) * spec.fine_dt;
    return -1.0;
  };
  // Gaussian-smoothed step: 10-90 % spans 2·Φ⁻¹(0.9)·σ
  const double z90 = std::sqrt(2.0) * 0.9061938024368232;  // √2·erf⁻¹(0.8)
  const double expected = 2.0 * z90 * spec.filter_sigma;
  CHECK(expected == doctest::Approx(2.563 * 0.4).epsilon(1e-3));
  CHECK(crossing(0.9) - crossing(0.1) == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("filter matrix matches hold+filter column by column") {
  ScheduleSpec spec;
  spec.gate_time = 30.0;
  const FilterMatrix w(spec);
  REQUIRE(w.rows() == spec.fine_steps());
  REQUIRE(w.cols() == spec.active_samples());
  for (std::size_t k = 0; k < w.cols(); ++k) {
    CoarsePulse probe = CoarsePulse::at_idle(std::vector<double>{0.0}, w.cols());
    probe.values[0][k] = 1.0;
    const auto col = gaussian_filter(zero_order_hold(probe, spec), spec).values[0];
    for (std::size_t r = 0; r < w.rows(); ++r) CHECK(std::abs(w(r, k) - col[r]) < 1e-12);
  }
  // idle contribution: coarse at zero, idle one
  CoarsePulse idle_only = CoarsePulse::at_idle(std::vector<double>{0.0}, w.cols());
  idle_only.idle = {1.0};
  const auto col = gaussian_filter(zero_order_hold(idle_only, spec), spec).values[0];
  for (std::size_t r = 0; r < w.rows(); ++r) {
    CHECK(std::abs(w.idle_weight()[r] - col[r]) < 1e-12);
    double rowsum = 0.0;
    for (std::size_t k = 0; k < w.cols(); ++k) rowsum += w(r, k);
    CHECK(rowsum <= 1.0 + 1e-15);
  }
  // coarse at idle reproduces the idle level everywhere
  const auto flat = w.apply(std::vector<double>(w.cols(), 1.5), 1.5);
  for (double v : flat) CHECK(v == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("filter matrix agrees with the direct path on random pulses") {
  ScheduleSpec spec;
  const FilterMatrix w(spec);
  const CoarsePulse p = random_coarse(spec, 3, 5);
  const FinePulse direct = gaussian_filter(zero_order_hold(p, spec), spec);
  const FinePulse matrix = w.apply(p);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t m = 0; m < direct.steps(); ++m)
      CHECK(std::abs(direct.values[c][m] - matrix.values[c][m]) < 1e-12);
}

TEST_CASE("filter adjoint identity") {
  ScheduleSpec spec;
  const FilterMatrix w(spec);
  std::mt19937 rng(3);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> u(w.cols()), v(w.rows());
    for (double& x : u) x = nd(rng);
    for (double& x : v) x = nd(rng);
    const auto wu = w.apply(u, 0.0);
    const auto wtv = w.apply_transpose(v);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) lhs += wu[i] * v[i];
    for (std::size_t i = 0; i < u.size(); ++i) rhs += u[i] * wtv[i];
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("filtering is affine-linear in the active samples") {
  ScheduleSpec spec;
  const FilterMatrix w(spec);
  const CoarsePulse a = random_coarse(spec, 1, 1), b = random_coarse(spec, 1, 2);
  const double alpha = 0.3, beta = -1.7;
  std::vector<double> mix(w.cols());
  for (std::size_t k = 0; k < mix.size(); ++k) mix[k] = alpha * a.values[0][k] + beta * b.values[0][k];
  const double idle = a.idle[0];
  const auto fa = w.apply(a.values[0], 0.0), fb = w.apply(b.values[0], 0.0);
  const auto fm = w.apply(mix, idle);
  for (std::size_t m = 0; m < fm.size(); ++m)
    CHECK(std::abs(fm[m] - (alpha * fa[m] + beta * fb[m] + idle * w.idle_weight()[m])) < 1e-12);
}

TEST_CASE("buffers stay pinned at idle") {
  ScheduleSpec spec;
  for (unsigned seed = 0; seed < 20; ++seed) {
    const CoarsePulse p = random_coarse(spec, 3, seed);
    const FinePulse f = gaussian_filter(zero_order_hold(p, spec), spec);
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(std::abs(f.values[c].front() - p.idle[c]) < 1e-6);
      CHECK(std::abs(f.values[c].back() - p.idle[c]) < 1e-6);
    }
  }
}

TEST_CASE("filter is shift-equivariant away from the edges") {
  ScheduleSpec spec;
  CoarsePulse p = CoarsePulse::at_idle(std::vector<double>{0.0}, spec.active_samples());
  CoarsePulse q = p;
  for (std::size_t k = 10; k < 20; ++k) p.values[0][k] = std::sin(0.7 * static_cast<double>(k));
  for (std::size_t k = 11; k < 21; ++k) q.values[0][k] = std::sin(0.7 * static_cast<double>(k - 1));
  const auto fp = gaussian_filter(zero_order_hold(p, spec), spec).values[0];
  const auto fq = gaussian_filter(zero_order_hold(q, spec), spec).values[0];
  for (std::size_t m = 100; m + 10 < 460; ++m) CHECK(std::abs(fq[m + 10] - fp[m]) < 1e-14);
}

TEST_CASE("pulse csv round-trips bit-identically") {
  ScheduleSpec spec;
  const CoarsePulse p = random_coarse(spec, 3, 9);
  std::stringstream ss;
  write_pulse_csv(ss, {"P", "S1", "S2"}, coarse_grid(p, spec), spec.coarse_dt);
  const std::string text = ss.str();
  CHECK(text.rfind("t_ns,delta_P_GHz,delta_S1_GHz,delta_S2_GHz\n", 0) == 0);

  std::stringstream in(text);
  const PulseTable table = read_pulse_csv(in);
  CHECK(table.labels == std::vector<std::string>{"P", "S1", "S2"});
  const CoarsePulse back = coarse_from_table(table, spec, p.idle);
  CHECK(back.values == p.values);

  ScheduleSpec other = spec;
  other.gate_time = 40.0;
  std::stringstream again(text);
  CHECK_THROWS_AS(coarse_from_table(read_pulse_csv(again), other, p.idle), grid_mismatch);

  std::stringstream bad("time,delta_P_GHz\n0,1\n");
  CHECK_THROWS_AS(read_pulse_csv(bad), grid_mismatch);
}

TEST_CASE("resampling keeps endpoints and constants") {
  ScheduleSpec from, to;
  from.gate_time = 40.0;
  to.gate_time = 56.0;
  CoarsePulse p = CoarsePulse::at_idle(std::vector<double>{2.0}, from.active_samples());
  for (std::size_t k = 0; k < p.values[0].size(); ++k) p.values[0][k] = 0.1 * static_cast<double>(k);
  const CoarsePulse r = resample(p, to);
  REQUIRE(r.values[0].size() == to.active_samples());
  CHECK(r.values[0].front() == doctest::Approx(0.0));
  CHECK(r.values[0].back() == doctest::Approx(p.values[0].back()));
  const CoarsePulse same = resample(p, from);
  for (std::size_t k = 0; k < p.values[0].size(); ++k)
    CHECK(same.values[0][k] == doctest::Approx(p.values[0][k]).epsilon(1e-14));
}
