#include "molgate/config.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "molgate/errors.hpp"
#include "molgate/output.hpp"
#include "molgate/parallel.hpp"

namespace molgate {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size() || !std::isfinite(v)) {
    throw ConfigError("field '" + key + "': expected a number, got '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size() || v < -2147483647L || v > 2147483647L) {
    throw ConfigError("field '" + key + "': expected an integer, got '" + text + "'");
  }
  return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("field '" + key + "': expected true/false, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(item));
      item.clear();
    } else {
      item += c;
    }
  }
  if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

const char* to_string(Tier tier) {
  return tier == Tier::Internal ? "internal" : "composite";
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 1) throw std::invalid_argument("linspace: points must be >= 1");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
  }
  return grid;
}

RunConfig RunConfig::defaults() {
  RunConfig c;
  if (const char* env = std::getenv("MOLGATE_OUT_DIR"); env && *env) c.out_dir = env;
  return c;
}

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> k{
      "tier", "t_w", "theta", "phi", "J", "J0", "J_min", "J_max", "J_samples",
      "n_max", "ell_over_L", "omega_over_Omega", "motional_state", "trap",
      "fidelity_construction", "steps_per_pulse", "unitarity_tol", "convergence_tol",
      "store_trajectory", "ddi_check", "threads", "out", "fig1_J_min", "fig1_J_max",
      "fig1_points", "fig2_J0_min", "fig2_J0_max", "fig2_points", "fig2_ratios",
      "fig2_inputs", "phase_points", "report_samples"};
  return k;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "tier") {
    const std::string t = trim(value);
    if (t == "internal") tier = Tier::Internal;
    else if (t == "composite") tier = Tier::Composite;
    else throw ConfigError("field 'tier': expected internal or composite, got '" + value + "'");
  } else if (key == "t_w") {
    pulse_width = parse_double(key, value);
  } else if (key == "theta") {
    if (trim(value) == "auto") relative_phase.reset();
    else relative_phase = parse_double(key, value);
  } else if (key == "phi") {
    target_phase = parse_double(key, value);
  } else if (key == "J") {
    ddi = parse_double(key, value);
  } else if (key == "J0") {
    j0 = parse_double(key, value);
  } else if (key == "J_min") {
    average_min = parse_double(key, value);
  } else if (key == "J_max") {
    average_max = parse_double(key, value);
  } else if (key == "J_samples") {
    average_samples = parse_int(key, value);
  } else if (key == "n_max") {
    n_max = parse_int(key, value);
  } else if (key == "ell_over_L") {
    ell_over_L = parse_double(key, value);
  } else if (key == "omega_over_Omega") {
    omega_over_Omega = parse_double(key, value);
  } else if (key == "motional_state") {
    motional_state = trim(value);
  } else if (key == "trap") {
    include_trap = parse_bool(key, value);
  } else if (key == "fidelity_construction") {
    try {
      fidelity_construction = parse_motional_fidelity(trim(value));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("field 'fidelity_construction': ") + e.what());
    }
  } else if (key == "steps_per_pulse") {
    if (trim(value) == "auto") steps_per_pulse.reset();
    else steps_per_pulse = parse_int(key, value);
  } else if (key == "unitarity_tol") {
    unitarity_tol = parse_double(key, value);
  } else if (key == "convergence_tol") {
    convergence_tol = parse_double(key, value);
  } else if (key == "store_trajectory") {
    store_trajectory = parse_bool(key, value);
  } else if (key == "ddi_check") {
    ddi_check = parse_bool(key, value);
  } else if (key == "threads") {
    const int t = parse_int(key, value);
    require(t >= 0, "field 'threads': must be >= 0 (0 = all cores)");
    threads = static_cast<unsigned>(t);
  } else if (key == "out") {
    out_dir = trim(value);
  } else if (key == "fig1_J_min") {
    fig1_min = parse_double(key, value);
  } else if (key == "fig1_J_max") {
    fig1_max = parse_double(key, value);
  } else if (key == "fig1_points") {
    fig1_points = parse_int(key, value);
  } else if (key == "fig2_J0_min") {
    fig2_min = parse_double(key, value);
  } else if (key == "fig2_J0_max") {
    fig2_max = parse_double(key, value);
  } else if (key == "fig2_points") {
    fig2_points = parse_int(key, value);
  } else if (key == "fig2_ratios") {
    fig2_ratios.clear();
    for (const auto& item : split_list(value)) fig2_ratios.push_back(parse_double(key, item));
  } else if (key == "fig2_inputs") {
    fig2_inputs = split_list(value);
  } else if (key == "phase_points") {
    phase_points = parse_int(key, value);
  } else if (key == "report_samples") {
    report_samples = parse_int(key, value);
  } else {
    throw ConfigError("unknown field '" + key + "'");
  }
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    std::ostringstream os;
    os << path.string() << ":" << e.line() << ": " << e.message();
    throw ConfigError(os.str());
  }
  RunConfig c = defaults();
  for (const auto& [key, node] : tree) {
    if (!node.empty()) {
      throw ConfigError(path.string() + ": sections are not supported (found [" + key + "])");
    }
    try {
      c.set(key, node.data());
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
  }
  return c;
}

void RunConfig::validate() const {
  require(pulse_width > 0.0 && pulse_width < 1.0,
          "t_w must lie in (0, 1) in units of the pulse duration");
  require(average_samples >= 1, "J_samples must be >= 1");
  require(average_max >= average_min, "J_max must be >= J_min");
  require(n_max >= 4, "n_max must be >= 4 (the quartic DDI term needs headroom)");
  require(ell_over_L >= 0.0 && ell_over_L < 0.5, "ell_over_L must lie in [0, 0.5)");
  require(omega_over_Omega >= 0.0, "omega_over_Omega must be >= 0");
  if (steps_per_pulse) {
    require(*steps_per_pulse >= 2 && *steps_per_pulse % 2 == 0,
            "steps_per_pulse must be an even integer >= 2");
  }
  require(unitarity_tol > 0.0, "unitarity_tol must be positive");
  require(convergence_tol > 0.0, "convergence_tol must be positive");
  require(fig1_points >= 1 && fig1_max >= fig1_min, "fig1 grid must be nonempty and sorted");
  require(fig2_points >= 1 && fig2_max >= fig2_min, "fig2 grid must be nonempty and sorted");
  require(!fig2_ratios.empty(), "fig2_ratios must not be empty");
  require(!fig2_inputs.empty(), "fig2_inputs must not be empty");
  require(phase_points >= 2, "phase_points must be >= 2");
  require(report_samples >= 1, "report_samples must be >= 1");
  require(!out_dir.empty(), "out must name a directory");
  if (ddi_check) {
    require(ddi != 0.0, "J = 0 cannot produce an entangling gate; pass --no-ddi-check to run anyway");
    require(j0 != 0.0, "J0 = 0 cannot produce an entangling gate; pass --no-ddi-check to run anyway");
  }
  for (const auto& state : std::vector<std::string>{motional_state}) {
    try {
      (void)MotionalState::parse(state, n_max);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("field 'motional_state': ") + e.what());
    }
  }
  for (const auto& state : fig2_inputs) {
    try {
      (void)MotionalState::parse(state, n_max);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("field 'fig2_inputs': ") + e.what());
    }
  }
}

double RunConfig::resolved_relative_phase() const {
  return relative_phase ? *relative_phase : relative_phase_for(target_phase);
}

int RunConfig::resolved_steps(Tier t) const {
  if (steps_per_pulse) return *steps_per_pulse;
  return t == Tier::Internal ? 4000 : 1000;
}

unsigned RunConfig::resolved_threads() const {
  return threads == 0 ? default_thread_count() : threads;
}

PulseSequence RunConfig::pulses() const {
  return PulseSequence::calibrated(pulse_width, 1.0, resolved_relative_phase());
}

PropagationOptions RunConfig::propagation(Tier t) const {
  PropagationOptions o;
  o.steps_per_segment = resolved_steps(t);
  o.unitarity_tol = unitarity_tol;
  o.store_trajectory = store_trajectory;
  return o;
}

MotionalSpace RunConfig::motional_space(double j0_ratio, double ratio) const {
  const double rabi = pulses().peak_rabi();
  return MotionalSpace{n_max, omega_over_Omega * rabi, ratio, j0_ratio * rabi};
}

std::vector<double> RunConfig::average_grid() const {
  return linspace(average_min, average_max, average_samples);
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> e;
  auto d = [](double x) { return format_double(x); };
  e.emplace_back("tier", to_string(tier));
  e.emplace_back("t_w", d(pulse_width));
  e.emplace_back("theta", d(resolved_relative_phase()));
  e.emplace_back("phi", d(target_phase));
  e.emplace_back("Omega_T", d(pulses().peak_rabi()));
  e.emplace_back("J", d(ddi));
  e.emplace_back("J0", d(j0));
  e.emplace_back("J_min", d(average_min));
  e.emplace_back("J_max", d(average_max));
  e.emplace_back("J_samples", std::to_string(average_samples));
  e.emplace_back("n_max", std::to_string(n_max));
  e.emplace_back("ell_over_L", d(ell_over_L));
  e.emplace_back("omega_over_Omega", d(omega_over_Omega));
  e.emplace_back("motional_state", motional_state);
  e.emplace_back("trap", include_trap ? "true" : "false");
  e.emplace_back("fidelity_construction", to_string(fidelity_construction));
  e.emplace_back("steps_per_pulse_internal", std::to_string(resolved_steps(Tier::Internal)));
  e.emplace_back("steps_per_pulse_composite", std::to_string(resolved_steps(Tier::Composite)));
  e.emplace_back("unitarity_tol", d(unitarity_tol));
  e.emplace_back("convergence_tol", d(convergence_tol));
  e.emplace_back("fig1_J_min", d(fig1_min));
  e.emplace_back("fig1_J_max", d(fig1_max));
  e.emplace_back("fig1_points", std::to_string(fig1_points));
  e.emplace_back("fig2_J0_min", d(fig2_min));
  e.emplace_back("fig2_J0_max", d(fig2_max));
  e.emplace_back("fig2_points", std::to_string(fig2_points));
  std::vector<std::string> ratios;
  for (double r : fig2_ratios) ratios.push_back(d(r));
  e.emplace_back("fig2_ratios", join(ratios));
  e.emplace_back("fig2_inputs", join(fig2_inputs));
  e.emplace_back("phase_points", std::to_string(phase_points));
  e.emplace_back("report_samples", std::to_string(report_samples));
  return e;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : echo()) j[k] = v;
  j["out"] = out_dir;
  j["threads"] = resolved_threads();
  return j;
}

}  // namespace molgate
