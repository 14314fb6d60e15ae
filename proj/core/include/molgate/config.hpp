#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "molgate/fidelity.hpp"
#include "molgate/motion.hpp"
#include "molgate/propagator.hpp"
#include "molgate/pulse.hpp"

namespace molgate {

enum class Tier { Internal, Composite };

const char* to_string(Tier tier);

// Every tunable of a run. Defaults reproduce the headline configuration:
// t_w = 0.234 T, CZ target, omega = Omega, n_max = 40, J0 averaged over
// [3, 5] hbar Omega with 21 samples. Energies are ratios to hbar Omega.
struct RunConfig {
  Tier tier = Tier::Internal;

  double pulse_width = 0.234;              // t_w / T
  std::optional<double> relative_phase;    // theta; unset -> derived from phi
  double target_phase = 3.141592653589793;  // phi

  double ddi = 4.0;  // J / (hbar Omega), internal tier
  double j0 = 4.0;   // J0 / (hbar Omega), composite tier
  double average_min = 3.0;
  double average_max = 5.0;
  int average_samples = 21;

  int n_max = 40;
  double ell_over_L = 0.04;
  double omega_over_Omega = 1.0;
  std::string motional_state = "vac";
  bool include_trap = true;
  MotionalFidelity fidelity_construction = MotionalFidelity::TraceOut;

  std::optional<int> steps_per_pulse;  // unset -> 4000 internal, 1000 composite
  double unitarity_tol = 1e-9;
  double convergence_tol = 1e-8;
  bool store_trajectory = false;
  bool ddi_check = true;

  unsigned threads = 0;  // 0 -> available parallelism
  std::string out_dir = "molgate-out";

  double fig1_min = 0.5;
  double fig1_max = 8.0;
  int fig1_points = 151;
  double fig2_min = 1.0;
  double fig2_max = 8.0;
  int fig2_points = 29;
  std::vector<double> fig2_ratios{0.04, 0.07, 0.1};
  std::vector<std::string> fig2_inputs{"one", "plus", "vac", "thermal(2)"};
  int phase_points = 16;
  int report_samples = 200;

  // Defaults, with out_dir taken from $MOLGATE_OUT_DIR when set.
  static RunConfig defaults();

  // Reads `key = value` lines ('#' or ';' comments) on top of defaults().
  // Throws ConfigError naming the file and line or the offending field.
  static RunConfig load(const std::filesystem::path& path);

  // Sets one field from its text form; ConfigError on unknown key or bad value.
  void set(const std::string& key, const std::string& value);

  // Range checks; ConfigError with an actionable message.
  void validate() const;

  double resolved_relative_phase() const;
  int resolved_steps(Tier t) const;
  unsigned resolved_threads() const;

  // Calibrated pulse pair for this configuration.
  PulseSequence pulses() const;
  PropagationOptions propagation(Tier t) const;
  MotionalSpace motional_space(double j0_ratio, double ratio) const;
  std::vector<double> average_grid() const;

  // Ordered echo of every resolved field, as written into output headers.
  std::vector<std::pair<std::string, std::string>> echo() const;
  nlohmann::json to_json() const;

  static const std::vector<std::string>& keys();
};

// Evenly spaced grid including both endpoints; a single point gives `lo`.
std::vector<double> linspace(double lo, double hi, int points);

}  // namespace molgate
