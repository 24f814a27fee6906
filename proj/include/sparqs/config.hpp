#pragma once

// Run configuration. The file format is plain text:
//
//   # comment
//   [device]
//   qubit_freq = 7.5, 8.0, 8.5
//
// Sections are device, schedule, optimizer and run. Every key is optional;
// anything left out keeps its default, and the defaults are the canonical
// device with a 56 ns iFREDKIN(+) target. Unknown sections or keys, repeated
// keys and malformed values are errors that name the offending line.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sparqs/device.hpp"
#include "sparqs/experiments.hpp"
#include "sparqs/grape.hpp"
#include "sparqs/problem.hpp"
#include "sparqs/pulse.hpp"

namespace sparqs {

struct SweepSettings {
  double t_min = 40.0;
  double t_max = 70.0;
  double t_step = 1.0;
  bool warm_start = true;
};

struct RunConfig {
  DeviceParams device = canonical_params();
  ScheduleSpec schedule;
  Bounds bounds;
  OptimizerOptions optimizer;
  ProblemKind problem = ProblemKind::ifredkin_plus;
  std::string out_dir = "out";
  SweepSettings sweep;
  std::string initial_state = "0|110";
  std::vector<std::string> watch = default_watch();

  ControlProblem build_problem() const;
};

/// Throws config_error("<source>:<line>: ...") on any problem, including
/// values that fail the device, schedule or optimizer checks.
RunConfig parse_config(std::istream& is, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Runs every module-level check on a config assembled in code.
void validate(const RunConfig& config);

/// Writes a config file that parses back to the same values.
void write_config(std::ostream& os, const RunConfig& config);

}  // namespace sparqs
