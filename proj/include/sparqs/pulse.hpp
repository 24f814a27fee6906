#pragma once

// Piecewise-constant detuning controls.
//
// The optimizer sees coarse samples (1 ns by default) inside the active
// window [buffer, t_g − buffer). Both buffers are pinned at each control's
// idle detuning. Simulation runs on a fine grid (0.1 ns): the coarse pulse is
// held, then smoothed by a truncated, renormalized Gaussian whose input is
// extended past both ends with the idle value.
//
// All pulse values are detunings δ/2π in GHz.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sparqs {

struct ScheduleSpec {
  double gate_time = 56.0;     // t_g, including both buffers [ns]
  double coarse_dt = 1.0;      // [ns]
  double fine_dt = 0.1;        // [ns]
  double buffer = 4.0;         // [ns] on each side
  double filter_sigma = 0.4;   // [ns]
  double filter_cutoff = 5.0;  // kernel truncated at ±cutoff·σ

  /// Throws schedule_error with a readable message if inconsistent. The
  /// active window must hold at least three coarse samples.
  void validate() const;

  std::size_t fine_steps() const;        // t_g / fine_dt
  std::size_t coarse_steps() const;      // t_g / coarse_dt
  std::size_t active_samples() const;    // (t_g − 2·buffer) / coarse_dt
  std::size_t buffer_samples() const;    // buffer / coarse_dt
  std::size_t fine_per_coarse() const;   // coarse_dt / fine_dt

  bool operator==(const ScheduleSpec&) const = default;
};

struct CoarsePulse {
  /// values[c][k]: control c, active sample k.
  std::vector<std::vector<double>> values;
  /// Idle detuning per control, held in both buffers.
  std::vector<double> idle;

  std::size_t controls() const { return values.size(); }

  /// Every active sample equal to idle.
  static CoarsePulse at_idle(std::span<const double> idle, std::size_t samples);

  std::vector<double> flatten() const;
  static CoarsePulse unflatten(std::span<const double> flat, std::span<const double> idle);
};

struct FinePulse {
  std::vector<std::vector<double>> values;  // values[c][m]
  std::vector<double> idle;

  std::size_t controls() const { return values.size(); }
  std::size_t steps() const { return values.empty() ? 0 : values.front().size(); }
};

/// Each fine sample takes the value of its enclosing coarse interval; buffer
/// samples take the idle value.
FinePulse zero_order_hold(const CoarsePulse& pulse, const ScheduleSpec& spec);

/// Normalized Gaussian taps on the fine grid, length 2h+1 with
/// h = floor(cutoff·σ / fine_dt).
std::vector<double> gaussian_kernel(const ScheduleSpec& spec);

FinePulse gaussian_filter(const FinePulse& fine, const ScheduleSpec& spec);

/// Explicit form of gaussian_filter ∘ zero_order_hold for one control:
///   fine = W · active + idle · offset
/// W is (fine steps × active samples), identical for every control.
class FilterMatrix {
 public:
  explicit FilterMatrix(const ScheduleSpec& spec);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return w_[r * cols_ + c]; }
  /// 1 − row sum of W; multiplies the idle value.
  std::span<const double> idle_weight() const { return idle_weight_; }

  /// W·u + idle·offset
  std::vector<double> apply(std::span<const double> active, double idle) const;
  /// Wᵀ·v
  std::vector<double> apply_transpose(std::span<const double> fine) const;

  FinePulse apply(const CoarsePulse& pulse) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> w_;
  std::vector<double> idle_weight_;
};

/// "P", "S1", "S2" → "delta_P_GHz", ...
std::string pulse_column_name(const std::string& control_label);

/// Pulse CSV. Coarse files list every coarse sample of [0, t_g) including
/// the pinned buffers; fine files every fine sample. 17 significant digits.
void write_pulse_csv(std::ostream& os, const std::vector<std::string>& labels,
                     const std::vector<std::vector<double>>& samples, double dt);

struct PulseTable {
  std::vector<std::string> labels;  // control labels parsed from the header
  std::vector<double> t;
  std::vector<std::vector<double>> values;  // values[c][row]
};

PulseTable read_pulse_csv(std::istream& is);

/// Full coarse grid of [0, t_g) including buffer samples, per control.
std::vector<std::vector<double>> coarse_grid(const CoarsePulse& pulse, const ScheduleSpec& spec);

/// Inverse of coarse_grid: strips the buffers. Throws grid_mismatch if the
/// table length does not match the schedule.
CoarsePulse coarse_from_table(const PulseTable& table, const ScheduleSpec& spec,
                              std::span<const double> idle);

/// Linear resampling of the active window onto another schedule, used to
/// warm-start a different gate time.
CoarsePulse resample(const CoarsePulse& pulse, const ScheduleSpec& to);

}  // namespace sparqs
