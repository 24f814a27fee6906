#include "sparqs/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "sparqs/errors.hpp"

namespace sparqs {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Parsers throw std::invalid_argument with a short description; the caller
// adds the location.
double to_double(const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty())
    throw std::invalid_argument("expected a number, got '" + v + "'");
  return out;
}

std::uint64_t to_uint(const std::string& v) {
  std::uint64_t out = 0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty())
    throw std::invalid_argument("expected a non-negative integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw std::invalid_argument("expected true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("empty entry in list '" + v + "'");
    out.push_back(item);
  }
  if (out.empty()) throw std::invalid_argument("expected a comma-separated list");
  return out;
}

std::vector<double> to_doubles(const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split_list(v)) out.push_back(to_double(s));
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& v, const std::function<std::string(const T&)>& f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + f(v[i]);
  return out;
}

struct Field {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(RunConfig&)> get;
};

template <class Get>
Field real(Get ref) {
  return {[ref](RunConfig& c, const std::string& v) { ref(c) = to_double(v); },
          [ref](RunConfig& c) { return fmt(ref(c)); }};
}

template <class Get>
Field integer(Get ref) {
  return {[ref](RunConfig& c, const std::string& v) {
            ref(c) = static_cast<std::remove_reference_t<decltype(ref(c))>>(to_uint(v));
          },
          [ref](RunConfig& c) { return std::to_string(ref(c)); }};
}

template <class Get>
Field reals(Get ref) {
  return {[ref](RunConfig& c, const std::string& v) { ref(c) = to_doubles(v); },
          [ref](RunConfig& c) {
            return join<double>(ref(c), [](const double& d) { return fmt(d); });
          }};
}

using Section = std::map<std::string, Field>;

const std::map<std::string, Section>& fields() {
  static const std::map<std::string, Section> table = {
      {"device",
       {
           {"bus_freq", real([](RunConfig& c) -> double& { return c.device.bus_freq; })},
           {"frame_freq", real([](RunConfig& c) -> double& { return c.device.frame_freq; })},
           {"qubit_freq", reals([](RunConfig& c) -> std::vector<double>& { return c.device.qubit_freq; })},
           {"anharmonicity",
            reals([](RunConfig& c) -> std::vector<double>& { return c.device.anharmonicity; })},
           {"coupling", reals([](RunConfig& c) -> std::vector<double>& { return c.device.coupling; })},
           {"levels",
            {[](RunConfig& c, const std::string& v) {
               std::vector<std::size_t> lv;
               for (const auto& s : split_list(v)) lv.push_back(to_uint(s));
               c.device.dims = SubsystemDims(lv);
             },
             [](const RunConfig& c) {
               return join<std::size_t>(c.device.dims.levels(),
                                        [](const std::size_t& n) { return std::to_string(n); });
             }}},
       }},
      {"schedule",
       {
           {"gate_time", real([](RunConfig& c) -> double& { return c.schedule.gate_time; })},
           {"coarse_dt", real([](RunConfig& c) -> double& { return c.schedule.coarse_dt; })},
           {"fine_dt", real([](RunConfig& c) -> double& { return c.schedule.fine_dt; })},
           {"buffer", real([](RunConfig& c) -> double& { return c.schedule.buffer; })},
           {"filter_sigma", real([](RunConfig& c) -> double& { return c.schedule.filter_sigma; })},
           {"filter_cutoff", real([](RunConfig& c) -> double& { return c.schedule.filter_cutoff; })},
           {"lower_bound", real([](RunConfig& c) -> double& { return c.bounds.lower; })},
           {"upper_bound", real([](RunConfig& c) -> double& { return c.bounds.upper; })},
       }},
      {"optimizer",
       {
           {"target_fidelity", real([](RunConfig& c) -> double& { return c.optimizer.target_fidelity; })},
           {"max_iterations",
            integer([](RunConfig& c) -> std::size_t& { return c.optimizer.max_iterations; })},
           {"restarts", integer([](RunConfig& c) -> std::size_t& { return c.optimizer.restarts; })},
           {"initial_scale", real([](RunConfig& c) -> double& { return c.optimizer.initial_scale; })},
           {"memory", integer([](RunConfig& c) -> std::size_t& { return c.optimizer.memory; })},
           {"armijo", real([](RunConfig& c) -> double& { return c.optimizer.armijo; })},
           {"backtrack", real([](RunConfig& c) -> double& { return c.optimizer.backtrack; })},
           {"max_backtracks",
            integer([](RunConfig& c) -> std::size_t& { return c.optimizer.max_backtracks; })},
           {"initial_step", real([](RunConfig& c) -> double& { return c.optimizer.initial_step; })},
           {"h0", real([](RunConfig& c) -> double& { return c.optimizer.h0; })},
           {"stall_window",
            integer([](RunConfig& c) -> std::size_t& { return c.optimizer.stall_window; })},
           {"stall_reduction", real([](RunConfig& c) -> double& { return c.optimizer.stall_reduction; })},
           {"curvature", real([](RunConfig& c) -> double& { return c.optimizer.curvature; })},
           {"box",
            {[](RunConfig& c, const std::string& v) { c.optimizer.box = parse_box_handling(v); },
             [](const RunConfig& c) { return std::string(to_string(c.optimizer.box)); }}},
           {"gradient_tolerance",
            real([](RunConfig& c) -> double& { return c.optimizer.gradient_tolerance; })},
       }},
      {"run",
       {
           {"problem",
            {[](RunConfig& c, const std::string& v) { c.problem = parse_problem_kind(v); },
             [](const RunConfig& c) { return std::string(to_string(c.problem)); }}},
           {"seed", integer([](RunConfig& c) -> std::uint64_t& { return c.optimizer.seed; })},
           {"out",
            {[](RunConfig& c, const std::string& v) {
               if (v.empty()) throw std::invalid_argument("output directory is empty");
               c.out_dir = v;
             },
             [](const RunConfig& c) { return c.out_dir; }}},
           {"sweep_min", real([](RunConfig& c) -> double& { return c.sweep.t_min; })},
           {"sweep_max", real([](RunConfig& c) -> double& { return c.sweep.t_max; })},
           {"sweep_step", real([](RunConfig& c) -> double& { return c.sweep.t_step; })},
           {"warm_start",
            {[](RunConfig& c, const std::string& v) { c.sweep.warm_start = to_bool(v); },
             [](const RunConfig& c) { return std::string(c.sweep.warm_start ? "true" : "false"); }}},
           {"initial_state",
            {[](RunConfig& c, const std::string& v) { c.initial_state = BasisLabel::parse(v).str(); },
             [](const RunConfig& c) { return c.initial_state; }}},
           {"watch",
            {[](RunConfig& c, const std::string& v) { c.watch = split_list(v); },
             [](const RunConfig& c) {
               return join<std::string>(c.watch, [](const std::string& s) { return s; });
             }}},
       }},
  };
  return table;
}

}  // namespace

ControlProblem RunConfig::build_problem() const {
  ControlProblem p = make_problem(problem, device, schedule);
  p.bounds = bounds;
  p.validate();
  return p;
}

void validate(const RunConfig& config) {
  config.device.validate();
  config.schedule.validate();
  config.optimizer.validate();
  config.build_problem();
  gate_time_range(config.sweep.t_min, config.sweep.t_max, config.sweep.t_step);
  BasisLabel::parse(config.initial_state);
}

RunConfig parse_config(std::istream& is, const std::string& source) {
  RunConfig config;
  const auto& table = fields();
  std::string section;
  std::set<std::string> seen;
  std::map<std::string, std::size_t> section_line;
  auto fail = [&](std::size_t line, const std::string& msg) -> config_error {
    return config_error(source + ":" + std::to_string(line) + ": " + msg);
  };

  std::size_t lineno = 0;
  for (std::string raw; std::getline(is, raw);) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw fail(lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!table.count(section))
        throw fail(lineno, "unknown section [" + section + "] (expected device, schedule, optimizer or run)");
      if (section_line.count(section)) throw fail(lineno, "section [" + section + "] appears twice");
      section_line[section] = lineno;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw fail(lineno, "expected 'key = value'");
    if (section.empty()) throw fail(lineno, "key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto& keys = table.at(section);
    const auto it = keys.find(key);
    if (it == keys.end()) throw fail(lineno, "unknown key '" + key + "' in [" + section + "]");
    if (!seen.insert(section + "." + key).second)
      throw fail(lineno, "key '" + key + "' set twice in [" + section + "]");
    try {
      it->second.set(config, value);
    } catch (const std::exception& e) {
      throw fail(lineno, key + ": " + e.what());
    }
  }

  // Cross-field checks are reported against the header of the section that
  // owns the failing value.
  auto check = [&](const std::string& sec, const std::function<void()>& f) {
    try {
      f();
    } catch (const std::exception& e) {
      const auto at = section_line.find(sec);
      throw fail(at == section_line.end() ? lineno : at->second, "[" + sec + "] " + e.what());
    }
  };
  check("device", [&] { config.device.validate(); });
  check("schedule", [&] { config.schedule.validate(); });
  check("optimizer", [&] { config.optimizer.validate(); });
  check("schedule", [&] { config.build_problem(); });
  check("run", [&] { gate_time_range(config.sweep.t_min, config.sweep.t_max, config.sweep.t_step); });
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error(path.string() + ": cannot open config file");
  return parse_config(in, path.string());
}

void write_config(std::ostream& os, const RunConfig& config) {
  RunConfig copy = config;  // field accessors hand out references
  bool first = true;
  for (const char* sec : {"device", "schedule", "optimizer", "run"}) {
    os << (first ? "" : "\n") << '[' << sec << "]\n";
    first = false;
    for (const auto& [key, field] : fields().at(sec)) os << key << " = " << field.get(copy) << '\n';
  }
}

}  // namespace sparqs
