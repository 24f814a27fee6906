// sparqs: optimize and inspect Z-controlled gates on the bus-coupled cell.
//
// Exit status: 0 success, 1 a quantitative target was missed, 2 usage or
// configuration error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "sparqs/config.hpp"
#include "sparqs/errors.hpp"
#include "sparqs/experiments.hpp"
#include "sparqs/grape.hpp"
#include "sparqs/kernels.hpp"
#include "sparqs/objective.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sparqs;

namespace {

constexpr int kOk = 0;
constexpr int kMissed = 1;
constexpr int kUsage = 2;
constexpr const char* kOutEnv = "SPARQS_OUT_DIR";

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> gate_time;
  std::optional<std::string> problem;
};

// Precedence: command line, then SPARQS_OUT_DIR (output directory only),
// then the config file, then built-in defaults.
RunConfig resolve(const Globals& g) {
  RunConfig cfg = g.config_path.empty() ? RunConfig{} : load_config(g.config_path);
  if (const char* env = std::getenv(kOutEnv); env && *env) cfg.out_dir = env;
  if (g.out) cfg.out_dir = *g.out;
  if (g.seed) cfg.optimizer.seed = *g.seed;
  if (g.gate_time) cfg.schedule.gate_time = *g.gate_time;
  if (g.problem) cfg.problem = parse_problem_kind(*g.problem);
  validate(cfg);
  return cfg;
}

fs::path prepare_out(const RunConfig& cfg) {
  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

void write_pulses(const fs::path& dir, const ControlProblem& problem, const CoarsePulse& pulse) {
  const ScheduleSpec& s = problem.schedule;
  auto coarse = open_out(dir / "pulse_coarse.csv");
  write_pulse_csv(coarse, problem.control_labels(), coarse_grid(pulse, s), s.coarse_dt);
  const FinePulse fine = FilterMatrix(s).apply(pulse);
  auto fine_os = open_out(dir / "pulse_fine.csv");
  write_pulse_csv(fine_os, problem.control_labels(), fine.values, s.fine_dt);
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_optimize(const Globals& g, std::optional<std::size_t> restarts,
                 std::optional<std::size_t> iterations, bool quiet) {
  RunConfig cfg = resolve(g);
  if (restarts) cfg.optimizer.restarts = *restarts;
  if (iterations) cfg.optimizer.max_iterations = *iterations;
  cfg.optimizer.validate();
  const ControlProblem problem = cfg.build_problem();
  const fs::path dir = prepare_out(cfg);

  auto log = open_out(dir / "optimizer.log");
  OptimizerOptions opts = cfg.optimizer;
  opts.log = &log;
  if (!quiet) {
    std::cerr << "optimizing " << to_string(cfg.problem) << " at t_g = " << problem.schedule.gate_time
              << " ns, " << problem.variables() << " variables, kernels: "
              << kernels::name(kernels::active().isa) << '\n';
  }
  const OptimizeResult r = optimize(problem, opts);

  write_pulses(dir, problem, r.best_pulse);
  {
    auto os = open_out(dir / "fidelity_trace.csv");
    os << "iteration,fidelity\n";
    for (std::size_t i = 0; i < r.trace.size(); ++i) os << i << ',' << fmt17(r.trace[i]) << '\n';
  }
  {
    auto os = open_out(dir / "config.ini");
    write_config(os, cfg);
  }
  json restarts_json = json::array();
  for (const auto& s : r.restarts)
    restarts_json.push_back({{"restart", s.restart},
                             {"fidelity", s.fidelity},
                             {"iterations", s.iterations},
                             {"termination", std::string(to_string(s.reason))}});
  const json result = {
      {"schema", 1},
      {"problem", std::string(to_string(cfg.problem))},
      {"fidelity", r.best_fidelity},
      {"target_fidelity", opts.target_fidelity},
      {"reached", r.reached(opts.target_fidelity)},
      {"gate_time_ns", problem.schedule.gate_time},
      {"seed", opts.seed},
      {"controls", problem.control_labels()},
      {"termination", std::string(to_string(r.reason))},
      {"best_restart", r.restart_index},
      {"restarts_used", r.restarts_used},
      {"iterations", r.iterations},
      {"iterations_total", r.iterations_total},
      {"restarts", restarts_json},
      {"timing", {{"wall_seconds", r.wall_seconds}}},
  };
  open_out(dir / "result.json") << result.dump(2) << '\n';

  std::printf("fidelity %.10f (target %.6g) after %zu restart(s), %s\n", r.best_fidelity,
              opts.target_fidelity, r.restarts_used, std::string(to_string(r.reason)).c_str());
  return r.reached(opts.target_fidelity) ? kOk : kMissed;
}

CoarsePulse load_pulse(const fs::path& path, const ControlProblem& problem, FinePulse* fine_out) {
  std::ifstream in(path);
  if (!in) throw config_error(path.string() + ": cannot open pulse file");
  const PulseTable table = read_pulse_csv(in);
  if (table.labels != problem.control_labels())
    throw grid_mismatch(path.string() + ": pulse columns do not match the problem's controls");
  const ScheduleSpec& s = problem.schedule;
  if (!table.t.empty() && table.t.size() == s.fine_steps() && fine_out) {
    fine_out->values = table.values;
    fine_out->idle = problem.idle;
    return {};
  }
  CoarsePulse pulse = coarse_from_table(table, s, problem.idle);
  if (fine_out) *fine_out = FilterMatrix(s).apply(pulse);
  return pulse;
}

int cmd_trajectory(const Globals& g, std::string pulse_path, std::optional<std::string> initial,
                   std::optional<std::string> watch) {
  RunConfig cfg = resolve(g);
  const ControlProblem problem = cfg.build_problem();
  const fs::path dir = prepare_out(cfg);
  if (pulse_path.empty()) pulse_path = (dir / "pulse_coarse.csv").string();
  FinePulse fine;
  load_pulse(pulse_path, problem, &fine);

  const BasisLabel start = BasisLabel::parse(initial.value_or(cfg.initial_state));
  std::vector<std::string> watched = cfg.watch;
  if (watch) {
    watched.clear();
    std::stringstream ss(*watch);
    for (std::string item; std::getline(ss, item, ',');) watched.push_back(item);
  }
  const Trajectory tr = trajectory(problem.hamiltonian, fine, problem.schedule, start, watched);
  auto os = open_out(dir / "trajectory.csv");
  write_trajectory_csv(os, tr);

  std::printf("final populations at t = %.6g ns:\n", tr.t.back());
  for (std::size_t c = 0; c < tr.columns.size(); ++c)
    std::printf("  %-12s %.10f\n", tr.columns[c].c_str(), tr.populations.back()[c]);
  return kOk;
}

int cmd_sweep(const Globals& g, std::optional<double> t_min, std::optional<double> t_max,
              std::optional<double> t_step, bool no_warm, std::optional<std::size_t> restarts,
              std::optional<std::size_t> iterations) {
  RunConfig cfg = resolve(g);
  if (restarts) cfg.optimizer.restarts = *restarts;
  if (iterations) cfg.optimizer.max_iterations = *iterations;
  cfg.optimizer.validate();
  if (t_min) cfg.sweep.t_min = *t_min;
  if (t_max) cfg.sweep.t_max = *t_max;
  if (t_step) cfg.sweep.t_step = *t_step;
  if (no_warm) cfg.sweep.warm_start = false;
  const std::vector<double> times = gate_time_range(cfg.sweep.t_min, cfg.sweep.t_max, cfg.sweep.t_step);
  const ControlProblem problem = cfg.build_problem();
  for (double t : times) problem.with_gate_time(t);  // reject bad grids before any work
  const fs::path dir = prepare_out(cfg);

  SweepOptions so;
  so.warm_start = cfg.sweep.warm_start;
  const SweepResult res = speed_limit_sweep(problem, times, cfg.optimizer, so, [](const SweepPoint& p) {
    std::fprintf(stderr, "t_g = %g ns: fidelity %.10f, %zu restart(s)\n", p.gate_time, p.best_fidelity,
                 p.restarts_used);
  });
  auto os = open_out(dir / "sweep.csv");
  write_sweep_csv(os, res);

  std::printf("problem %s, %zu controls\n", std::string(to_string(cfg.problem)).c_str(), problem.controls());
  if (const auto tmin = res.minimal_feasible()) {
    std::printf("minimal feasible gate time: %g ns\n", *tmin);
    return kOk;
  }
  std::printf("no gate time reached fidelity %g\n", res.target);
  return kMissed;
}

int cmd_checkgrad(const Globals& g, std::size_t probes, double fd_step, bool corrupt) {
  RunConfig cfg = resolve(g);
  ControlProblem problem = cfg.build_problem();
  problem.corrupt_filter_adjoint = corrupt;
  const CoarsePulse pulse =
      random_pulse(problem, cfg.optimizer.initial_scale, restart_seed(cfg.optimizer.seed, 0));
  const GradientCheck gc = check_gradient(problem, pulse, probes, fd_step, cfg.optimizer.seed);
  std::printf("max relative error %.3e, max absolute error %.3e over %zu probes\n",
              gc.max_relative_error, gc.max_absolute_error, gc.probes);
  return gc.max_relative_error < 1e-5 ? kOk : kMissed;
}

int cmd_print_target(const Globals& g) {
  const RunConfig cfg = resolve(g);
  const ControlProblem problem = cfg.build_problem();
  const TargetGate& t = problem.target;
  std::printf("%s on %zu states:", t.name.c_str(), t.subspace.size());
  for (std::size_t i : t.subspace.indices)
    std::printf(" %s", basis_label(i, problem.device.dims).str().c_str());
  std::printf("\n");
  for (std::size_t r = 0; r < t.unitary.rows(); ++r) {
    for (std::size_t c = 0; c < t.unitary.cols(); ++c) {
      const cplx v = t.unitary(r, c);
      const char* s = v == cplx(0, 0)   ? "0"
                      : v == cplx(1, 0)  ? "1"
                      : v == cplx(-1, 0) ? "-1"
                      : v == cplx(0, 1)  ? "i"
                      : v == cplx(0, -1) ? "-i"
                                         : nullptr;
      if (s)
        std::printf(" %3s", s);
      else
        std::printf(" (%g,%g)", v.real(), v.imag());
    }
    std::printf("\n");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal Z-control pulses for a bus-coupled three-qubit cell"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "Config file (sections device, schedule, optimizer, run)")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Master seed for the restarts");
  app.add_option("--out", g.out, std::string("Output directory (else $") + kOutEnv + ", else config)");
  app.add_option("--gate-time", g.gate_time, "Gate time in ns, buffers included");
  app.add_option("--problem", g.problem, "ifredkin+, ifredkin- or iswap-baseline")
      ->check(CLI::IsMember({"ifredkin+", "ifredkin-", "iswap-baseline"}));

  auto* opt = app.add_subcommand("optimize", "Run multi-start GRAPE and write pulses and result.json");
  std::optional<std::size_t> restarts, iterations;
  bool quiet = false;
  opt->add_option("--restarts", restarts, "Override optimizer.restarts");
  opt->add_option("--max-iterations", iterations, "Override optimizer.max_iterations");
  opt->add_flag("--quiet", quiet, "No progress on stderr");

  auto* traj = app.add_subcommand("trajectory", "Populations over time for a pulse file");
  std::string pulse_path;
  std::optional<std::string> initial, watch;
  traj->add_option("--pulse", pulse_path, "Coarse or fine pulse CSV (default <out>/pulse_coarse.csv)");
  traj->add_option("--initial", initial, "Initial basis state, e.g. 0|110");
  traj->add_option("--watch", watch, "Comma-separated labels, 'leak' and 'other'");

  auto* sweep = app.add_subcommand("sweep", "Best fidelity over a range of gate times");
  std::optional<double> t_min, t_max, t_step;
  bool no_warm = false;
  sweep->add_option("--t-min", t_min, "Shortest gate time [ns]");
  sweep->add_option("--t-max", t_max, "Longest gate time [ns]");
  sweep->add_option("--t-step", t_step, "Gate-time increment [ns]");
  sweep->add_flag("--no-warm-start", no_warm, "Start every gate time from random pulses only");
  sweep->add_option("--restarts", restarts, "Override optimizer.restarts");
  sweep->add_option("--max-iterations", iterations, "Override optimizer.max_iterations");

  auto* grad = app.add_subcommand("checkgrad", "Compare the analytic gradient with finite differences");
  std::size_t probes = 100;
  double fd_step = 1e-5;
  bool corrupt = false;
  grad->add_option("--probes", probes, "Random coordinates to probe")->check(CLI::PositiveNumber);
  grad->add_option("--fd-step", fd_step, "Central-difference step [GHz]")->check(CLI::PositiveNumber);
  grad->add_flag("--corrupt-adjoint", corrupt, "Break the filter adjoint on purpose (self-test)");

  auto* target = app.add_subcommand("print-target", "Print the target gate and its subspace");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (opt->parsed()) return cmd_optimize(g, restarts, iterations, quiet);
    if (traj->parsed()) return cmd_trajectory(g, pulse_path, initial, watch);
    if (sweep->parsed()) return cmd_sweep(g, t_min, t_max, t_step, no_warm, restarts, iterations);
    if (grad->parsed()) return cmd_checkgrad(g, probes, fd_step, corrupt);
    if (target->parsed()) return cmd_print_target(g);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const schedule_error& e) {
    std::cerr << "schedule error: " << e.what() << '\n';
    return kUsage;
  } catch (const invalid_label& e) {
    std::cerr << "label error: " << e.what() << '\n';
    return kUsage;
  } catch (const grid_mismatch& e) {
    std::cerr << "pulse error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
