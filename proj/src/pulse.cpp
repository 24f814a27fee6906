#include "sparqs/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "sparqs/errors.hpp"
#include "sparqs/kernels.hpp"

namespace sparqs {
namespace {

// Ratio a/b when it is an integer up to round-off, else -1.
long integer_ratio(double a, double b) {
  const double r = a / b;
  const double n = std::round(r);
  if (n < 0 || std::abs(r - n) > 1e-9 * std::max(1.0, std::abs(r))) return -1;
  return static_cast<long>(n);
}

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void ScheduleSpec::validate() const {
  auto fail = [](const std::string& msg) { throw schedule_error("schedule: " + msg); };
  if (!(fine_dt > 0.0)) fail("fine_dt must be positive");
  if (!(coarse_dt > 0.0)) fail("coarse_dt must be positive");
  if (!(buffer >= 0.0)) fail("buffer must be non-negative");
  if (!(filter_sigma > 0.0)) fail("filter_sigma must be positive");
  if (!(filter_cutoff > 0.0)) fail("filter_cutoff must be positive");
  if (!(gate_time > 2.0 * buffer))
    fail("gate_time " + fmt_num(gate_time) + " ns must exceed twice the buffer (" +
         fmt_num(2.0 * buffer) + " ns)");
  if (integer_ratio(coarse_dt, fine_dt) < 1) fail("coarse_dt must be an integer multiple of fine_dt");
  if (integer_ratio(gate_time, coarse_dt) < 1) fail("gate_time must be an integer multiple of coarse_dt");
  if (integer_ratio(buffer, coarse_dt) < 0) fail("buffer must be an integer multiple of coarse_dt");
  if (gate_time - 2.0 * buffer < 3.0 * coarse_dt - 1e-9)
    fail("gate_time " + fmt_num(gate_time) + " ns leaves fewer than three " + fmt_num(coarse_dt) +
         " ns control samples between the buffers");
}

std::size_t ScheduleSpec::fine_steps() const {
  return static_cast<std::size_t>(std::llround(gate_time / fine_dt));
}
std::size_t ScheduleSpec::coarse_steps() const {
  return static_cast<std::size_t>(std::llround(gate_time / coarse_dt));
}
std::size_t ScheduleSpec::buffer_samples() const {
  return static_cast<std::size_t>(std::llround(buffer / coarse_dt));
}
std::size_t ScheduleSpec::active_samples() const { return coarse_steps() - 2 * buffer_samples(); }
std::size_t ScheduleSpec::fine_per_coarse() const {
  return static_cast<std::size_t>(std::llround(coarse_dt / fine_dt));
}

CoarsePulse CoarsePulse::at_idle(std::span<const double> idle, std::size_t samples) {
  CoarsePulse p;
  p.idle.assign(idle.begin(), idle.end());
  for (double v : idle) p.values.emplace_back(samples, v);
  return p;
}

std::vector<double> CoarsePulse::flatten() const {
  std::vector<double> flat;
  for (const auto& v : values) flat.insert(flat.end(), v.begin(), v.end());
  return flat;
}

CoarsePulse CoarsePulse::unflatten(std::span<const double> flat, std::span<const double> idle) {
  const std::size_t n = idle.size();
  if (n == 0 || flat.size() % n != 0)
    throw grid_mismatch("unflatten: " + std::to_string(flat.size()) +
                        " values do not split over " + std::to_string(n) + " controls");
  const std::size_t k = flat.size() / n;
  CoarsePulse p;
  p.idle.assign(idle.begin(), idle.end());
  for (std::size_t c = 0; c < n; ++c)
    p.values.emplace_back(flat.begin() + c * k, flat.begin() + (c + 1) * k);
  return p;
}

FinePulse zero_order_hold(const CoarsePulse& pulse, const ScheduleSpec& spec) {
  spec.validate();
  const std::size_t active = spec.active_samples();
  const std::size_t ratio = spec.fine_per_coarse();
  const std::size_t offset = spec.buffer_samples() * ratio;
  if (pulse.idle.size() != pulse.values.size())
    throw grid_mismatch("pulse: idle list and control list differ in length");
  FinePulse fine;
  fine.idle = pulse.idle;
  for (std::size_t c = 0; c < pulse.controls(); ++c) {
    if (pulse.values[c].size() != active)
      throw grid_mismatch("pulse: control " + std::to_string(c) + " has " +
                          std::to_string(pulse.values[c].size()) + " active samples, schedule needs " +
                          std::to_string(active));
    std::vector<double> v(spec.fine_steps(), pulse.idle[c]);
    for (std::size_t k = 0; k < active; ++k)
      std::fill_n(v.begin() + offset + k * ratio, ratio, pulse.values[c][k]);
    fine.values.push_back(std::move(v));
  }
  return fine;
}

std::vector<double> gaussian_kernel(const ScheduleSpec& spec) {
  const auto half = static_cast<std::size_t>(
      std::floor(spec.filter_cutoff * spec.filter_sigma / spec.fine_dt + 1e-9));
  std::vector<double> w(2 * half + 1);
  double sum = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double t = (static_cast<double>(j) - static_cast<double>(half)) * spec.fine_dt;
    w[j] = std::exp(-0.5 * t * t / (spec.filter_sigma * spec.filter_sigma));
    sum += w[j];
  }
  for (double& x : w) x /= sum;
  return w;
}

FinePulse gaussian_filter(const FinePulse& fine, const ScheduleSpec& spec) {
  if (!(spec.filter_sigma > 0.0)) throw schedule_error("schedule: filter_sigma must be positive");
  const auto w = gaussian_kernel(spec);
  const std::size_t half = w.size() / 2;
  FinePulse out;
  out.idle = fine.idle;
  for (std::size_t c = 0; c < fine.controls(); ++c) {
    const auto& x = fine.values[c];
    std::vector<double> padded(x.size() + 2 * half, fine.idle[c]);
    std::copy(x.begin(), x.end(), padded.begin() + half);
    std::vector<double> y(x.size());
    kernels::active().dconvolve(x.size(), padded.data(), half, w.data(), y.data());
    out.values.push_back(std::move(y));
  }
  return out;
}

FilterMatrix::FilterMatrix(const ScheduleSpec& spec)
    : rows_(spec.fine_steps()), cols_(spec.active_samples()) {
  spec.validate();
  const auto w = gaussian_kernel(spec);
  const long half = static_cast<long>(w.size() / 2);
  const long ratio = static_cast<long>(spec.fine_per_coarse());
  const long start = static_cast<long>(spec.buffer_samples()) * ratio;
  const long stop = start + static_cast<long>(cols_) * ratio;
  w_.assign(rows_ * cols_, 0.0);
  idle_weight_.assign(rows_, 0.0);
  for (long m = 0; m < static_cast<long>(rows_); ++m) {
    for (long j = -half; j <= half; ++j) {
      const long src = m + j;
      const double tap = w[static_cast<std::size_t>(j + half)];
      if (src >= start && src < stop)
        w_[static_cast<std::size_t>(m) * cols_ + static_cast<std::size_t>((src - start) / ratio)] += tap;
      else
        idle_weight_[static_cast<std::size_t>(m)] += tap;
    }
  }
}

std::vector<double> FilterMatrix::apply(std::span<const double> active, double idle) const {
  if (active.size() != cols_) throw grid_mismatch("filter matrix: wrong number of active samples");
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    double acc = idle * idle_weight_[r];
    const double* row = w_.data() + r * cols_;
    for (std::size_t c = 0; c < cols_; ++c) acc += row[c] * active[c];
    out[r] = acc;
  }
  return out;
}

std::vector<double> FilterMatrix::apply_transpose(std::span<const double> fine) const {
  if (fine.size() != rows_) throw grid_mismatch("filter matrix: wrong number of fine samples");
  std::vector<double> out(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const double* row = w_.data() + r * cols_;
    for (std::size_t c = 0; c < cols_; ++c) out[c] += row[c] * fine[r];
  }
  return out;
}

FinePulse FilterMatrix::apply(const CoarsePulse& pulse) const {
  FinePulse out;
  out.idle = pulse.idle;
  for (std::size_t c = 0; c < pulse.controls(); ++c)
    out.values.push_back(apply(pulse.values[c], pulse.idle[c]));
  return out;
}

std::string pulse_column_name(const std::string& control_label) {
  return "delta_" + control_label + "_GHz";
}

void write_pulse_csv(std::ostream& os, const std::vector<std::string>& labels,
                     const std::vector<std::vector<double>>& samples, double dt) {
  if (labels.size() != samples.size()) throw grid_mismatch("pulse csv: label/sample count mismatch");
  os << "t_ns";
  for (const auto& l : labels) os << ',' << pulse_column_name(l);
  os << '\n';
  const std::size_t n = samples.empty() ? 0 : samples.front().size();
  for (std::size_t m = 0; m < n; ++m) {
    os << fmt_num(static_cast<double>(m) * dt);
    for (const auto& s : samples) os << ',' << fmt_num(s[m]);
    os << '\n';
  }
}

PulseTable read_pulse_csv(std::istream& is) {
  PulseTable table;
  std::string line;
  if (!std::getline(is, line)) throw grid_mismatch("pulse csv: empty input");
  {
    std::stringstream header(line);
    std::string cell;
    std::getline(header, cell, ',');
    if (cell != "t_ns") throw grid_mismatch("pulse csv: first column must be t_ns");
    while (std::getline(header, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      const std::string pre = "delta_", post = "_GHz";
      if (cell.size() <= pre.size() + post.size() || cell.rfind(pre, 0) != 0 ||
          cell.compare(cell.size() - post.size(), post.size(), post) != 0)
        throw grid_mismatch("pulse csv: unexpected column '" + cell + "'");
      table.labels.push_back(cell.substr(pre.size(), cell.size() - pre.size() - post.size()));
    }
  }
  table.values.resize(table.labels.size());
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> nums;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw grid_mismatch("pulse csv: bad number on row " + std::to_string(row));
      nums.push_back(v);
    }
    if (nums.size() != table.labels.size() + 1)
      throw grid_mismatch("pulse csv: row " + std::to_string(row) + " has " +
                          std::to_string(nums.size()) + " fields");
    table.t.push_back(nums[0]);
    for (std::size_t c = 0; c < table.labels.size(); ++c) table.values[c].push_back(nums[c + 1]);
  }
  return table;
}

std::vector<std::vector<double>> coarse_grid(const CoarsePulse& pulse, const ScheduleSpec& spec) {
  const std::size_t buf = spec.buffer_samples();
  std::vector<std::vector<double>> out;
  for (std::size_t c = 0; c < pulse.controls(); ++c) {
    std::vector<double> v(spec.coarse_steps(), pulse.idle[c]);
    std::copy(pulse.values[c].begin(), pulse.values[c].end(), v.begin() + buf);
    out.push_back(std::move(v));
  }
  return out;
}

CoarsePulse coarse_from_table(const PulseTable& table, const ScheduleSpec& spec,
                              std::span<const double> idle) {
  if (table.values.size() != idle.size())
    throw grid_mismatch("pulse csv: " + std::to_string(table.values.size()) +
                        " controls in file, problem has " + std::to_string(idle.size()));
  if (table.t.size() != spec.coarse_steps())
    throw grid_mismatch("pulse csv: " + std::to_string(table.t.size()) +
                        " rows, schedule has " + std::to_string(spec.coarse_steps()) +
                        " coarse samples");
  const std::size_t buf = spec.buffer_samples();
  CoarsePulse p;
  p.idle.assign(idle.begin(), idle.end());
  for (const auto& col : table.values)
    p.values.emplace_back(col.begin() + static_cast<long>(buf),
                          col.begin() + static_cast<long>(buf + spec.active_samples()));
  return p;
}

CoarsePulse resample(const CoarsePulse& pulse, const ScheduleSpec& to) {
  const std::size_t n_to = to.active_samples();
  CoarsePulse out;
  out.idle = pulse.idle;
  for (const auto& v : pulse.values) {
    const std::size_t n_from = v.size();
    std::vector<double> r(n_to);
    for (std::size_t k = 0; k < n_to; ++k) {
      if (n_from == 1 || n_to == 1) {
        r[k] = v[std::min(k, n_from - 1)];
        continue;
      }
      const double x = static_cast<double>(k) * static_cast<double>(n_from - 1) /
                       static_cast<double>(n_to - 1);
      const auto i = std::min(static_cast<std::size_t>(x), n_from - 2);
      const double f = x - static_cast<double>(i);
      r[k] = (1.0 - f) * v[i] + f * v[i + 1];
    }
    out.values.push_back(std::move(r));
  }
  return out;
}

}  // namespace sparqs
