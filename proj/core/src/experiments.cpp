#include "molgate/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "molgate/adiabatic.hpp"
#include "molgate/gate_sequence.hpp"
#include "molgate/parallel.hpp"

namespace molgate {
namespace {

constexpr double kPi = std::numbers::pi;

double log10_infidelity(double fidelity) {
  return std::log10(std::max(1.0 - fidelity, 1e-300));
}

double wrap_symmetric(double x) {
  double r = wrap_angle(x);
  if (r > kPi) r -= 2.0 * kPi;
  return r;
}

}  // namespace

InternalEvaluation evaluate_internal(const RunConfig& config, double ddi_ratio) {
  const PulseSequence pulses = config.pulses();
  const GateModel model = GateModel::from_ratio(pulses, ddi_ratio, config.target_phase);
  PropagationOptions opts = config.propagation(Tier::Internal);
  opts.store_trajectory = false;
  opts.tracked_indices = {static_cast<Index>(kUpExcited), static_cast<Index>(kExcitedUp)};
  const auto n = static_cast<Index>(InternalBasis::kDimension);
  const auto run = propagate(internal_driven_hamiltonian(model), gate_schedule(pulses),
                             CMatrix::Identity(n, n), opts);
  InternalEvaluation out;
  out.propagator = run.final_state;
  out.unitarity_residual = run.unitarity_residual;
  for (std::size_t i = 0; i < 4; ++i) out.ddi_time[i] = run.tracked_time(static_cast<Index>(i));
  out.report = gate_fidelity(run.final_state, controlled_phase_target(config.target_phase));
  out.report.with("tier", "internal")
      .with("J_over_Omega", ddi_ratio)
      .with("theta", pulses.relative_phase())
      .with("t_w", pulses.width());
  return out;
}

CompositeEvaluation evaluate_composite(const RunConfig& config, double j0_ratio, double ratio,
                                       const std::vector<MotionalState>& inputs) {
  if (inputs.empty()) throw std::invalid_argument("evaluate_composite: no inputs");
  const PulseSequence pulses = config.pulses();
  const GateModel model{pulses, 0.0, config.target_phase};
  const MotionalSpace space = config.motional_space(j0_ratio, ratio);
  const Index m = space.dimension();
  const Index dim = static_cast<Index>(InternalBasis::kDimension) * m;

  // Fock inputs (thermal components, vac, one) share one column group per
  // level; other pure inputs get their own group of 4 columns.
  std::vector<CVector> chis;
  std::vector<Index> fock_group(static_cast<std::size_t>(m), -1);
  auto fock_column = [&](Index n) {
    if (fock_group[n] < 0) {
      CVector chi = CVector::Zero(m);
      chi(n) = 1.0;
      fock_group[n] = static_cast<Index>(chis.size());
      chis.push_back(std::move(chi));
    }
    return fock_group[n];
  };
  std::vector<std::vector<std::pair<Index, double>>> uses(inputs.size());  // (group, weight)
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    if (inputs[s].dimension() != m) {
      throw std::invalid_argument("evaluate_composite: input '" + inputs[s].name() +
                                  "' has the wrong Fock dimension");
    }
    if (inputs[s].is_thermal()) {
      const auto& w = inputs[s].as_thermal().weights;
      for (Index n = 0; n < m; ++n) {
        if (w[n] != 0.0) uses[s].emplace_back(fock_column(n), w[n]);
      }
      continue;
    }
    const CVector& amp = inputs[s].as_pure().amplitudes;
    Index level = -1;
    if ((amp.array() != Complex(0.0)).count() == 1) {
      amp.cwiseAbs().maxCoeff(&level);
      if (amp(level) != Complex(1.0)) level = -1;
    }
    if (level >= 0) {
      uses[s].emplace_back(fock_column(level), 1.0);
    } else {
      uses[s].emplace_back(static_cast<Index>(chis.size()), 1.0);
      chis.push_back(amp);
    }
  }
  CMatrix initial(dim, 4 * static_cast<Index>(chis.size()));
  for (std::size_t c = 0; c < chis.size(); ++c) {
    initial.middleCols(4 * static_cast<Index>(c), 4) = computational_inputs(chis[c]);
  }

  PropagationOptions opts = config.propagation(Tier::Composite);
  opts.store_trajectory = false;
  const auto h = composite_driven_hamiltonian(model, space, config.include_trap);
  const auto run = propagate(h, gate_schedule(pulses), initial, opts);

  const Eigen::Matrix4cd target = controlled_phase_target(config.target_phase);
  CompositeEvaluation out;
  out.trace_out.assign(inputs.size(), 0.0);
  out.projection.assign(inputs.size(), 0.0);
  out.unitarity_residual = run.unitarity_residual;
  std::vector<double> trace(chis.size()), projection(chis.size());
  for (std::size_t c = 0; c < chis.size(); ++c) {
    const CMatrix cols = run.final_state.middleCols(4 * static_cast<Index>(c), 4);
    trace[c] = motional_fidelity(cols, chis[c], target, MotionalFidelity::TraceOut);
    projection[c] = motional_fidelity(cols, chis[c], target, MotionalFidelity::Projection);
  }
  for (std::size_t s = 0; s < inputs.size(); ++s) {
    for (const auto& [group, w] : uses[s]) {
      out.trace_out[s] += w * trace[static_cast<std::size_t>(group)];
      out.projection[s] += w * projection[static_cast<std::size_t>(group)];
    }
  }
  return out;
}

FidelityReport composite_report(const RunConfig& config, double j0_ratio, double ratio,
                                const MotionalState& input, MotionalFidelity construction) {
  return composite_report(config, j0_ratio, ratio, input, construction,
                          evaluate_composite(config, j0_ratio, ratio, {input}));
}

FidelityReport composite_report(const RunConfig& config, double j0_ratio, double ratio,
                                const MotionalState& input, MotionalFidelity construction,
                                const CompositeEvaluation& eval) {
  FidelityReport r;
  r.fidelity = construction == MotionalFidelity::TraceOut ? eval.trace_out[0]
                                                          : eval.projection[0];
  r.infidelity = 1.0 - r.fidelity;
  r.target_phase = wrap_angle(config.target_phase);
  r.with("tier", "composite")
      .with("J0_over_Omega", j0_ratio)
      .with("ell_over_L", ratio)
      .with("motional_state", input.name())
      .with("n_max", std::to_string(config.n_max))
      .with("theta", config.resolved_relative_phase())
      .with("fidelity_construction", to_string(construction));
  return r;
}

SweepSpec fig1_spec(const RunConfig& config) {
  SweepSpec s{"fig1", "J_over_Omega", linspace(config.fig1_min, config.fig1_max, config.fig1_points),
              Tier::Internal, {}};
  s.fixed = {{"theta", format_double(config.resolved_relative_phase())},
             {"phi", format_double(config.target_phase)},
             {"t_w", format_double(config.pulse_width)}};
  return s;
}

SweepSpec fig2_spec(const RunConfig& config) {
  SweepSpec s{"fig2", "J0_over_Omega", linspace(config.fig2_min, config.fig2_max, config.fig2_points),
              Tier::Composite, {}};
  s.fixed = {{"n_max", std::to_string(config.n_max)},
             {"omega_over_Omega", format_double(config.omega_over_Omega)},
             {"trap", config.include_trap ? "true" : "false"}};
  return s;
}

std::vector<Fig1Row> fig1_scan(const RunConfig& config, const std::vector<double>& grid) {
  return parallel_map(grid.size(), config.resolved_threads(), [&](std::size_t i) {
    const auto eval = evaluate_internal(config, grid[i]);
    Fig1Row row;
    row.ddi_ratio = grid[i];
    row.fidelity = eval.report.fidelity;
    row.log10_infidelity = log10_infidelity(row.fidelity);
    row.td_up_up = eval.ddi_time[kUpUp];
    row.td_up_down = eval.ddi_time[kUpDown];
    row.td_down_up = eval.ddi_time[kDownUp];
    row.td_down_down = eval.ddi_time[kDownDown];
    return row;
  });
}

CsvTable fig1_table(const RunConfig& config, const std::vector<Fig1Row>& rows) {
  CsvTable t({"J_over_Omega", "fidelity", "log10_infidelity", "td_up_down_over_T",
              "td_down_up_over_T", "td_up_up_over_T", "td_down_down_over_T"});
  add_standard_header(t, config, "fig1");
  for (const auto& r : rows) {
    t.add_row(std::vector<double>{r.ddi_ratio, r.fidelity, r.log10_infidelity, r.td_up_down,
                                  r.td_down_up, r.td_up_up, r.td_down_down});
  }
  return t;
}

int count_interior_minima(const std::vector<double>& values) {
  int count = 0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] < values[i - 1] && values[i] < values[i + 1]) ++count;
  }
  return count;
}

std::vector<Fig2Row> fig2_scan(const RunConfig& config, const std::vector<double>& ratios,
                               const std::vector<std::string>& inputs,
                               const std::vector<double>& grid) {
  std::vector<MotionalState> states;
  for (const auto& name : inputs) states.push_back(MotionalState::parse(name, config.n_max));
  const std::size_t points = ratios.size() * grid.size();
  auto evals = parallel_map(points, config.resolved_threads(), [&](std::size_t k) {
    return evaluate_composite(config, grid[k % grid.size()], ratios[k / grid.size()], states);
  });
  std::vector<Fig2Row> rows;
  for (std::size_t ri = 0; ri < ratios.size(); ++ri) {
    for (std::size_t s = 0; s < states.size(); ++s) {
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const auto& e = evals[ri * grid.size() + g];
        rows.push_back({ratios[ri], states[s].name(), grid[g], e.trace_out[s],
                        log10_infidelity(e.trace_out[s]), e.projection[s]});
      }
    }
  }
  return rows;
}

CsvTable fig2_table(const RunConfig& config, const std::vector<Fig2Row>& rows) {
  CsvTable t({"ell_over_L", "motional_state", "J0_over_Omega", "fidelity", "log10_infidelity",
              "fidelity_projection"});
  add_standard_header(t, config, "fig2");
  for (const auto& r : rows) {
    t.add_row({format_double(r.ratio), r.input, format_double(r.j0_ratio),
               format_double(r.fidelity), format_double(r.log10_infidelity),
               format_double(r.fidelity_projection)});
  }
  return t;
}

Table1 table1_run(const RunConfig& config) {
  Table1 table;
  table.ratios = config.fig2_ratios;
  table.inputs = config.fig2_inputs;
  table.samples = config.average_grid();
  std::vector<MotionalState> states;
  for (const auto& name : table.inputs) states.push_back(MotionalState::parse(name, config.n_max));

  const std::size_t n_samples = table.samples.size();
  auto evals = parallel_map(table.ratios.size() * n_samples, config.resolved_threads(),
                            [&](std::size_t k) {
                              return evaluate_composite(config, table.samples[k % n_samples],
                                                        table.ratios[k / n_samples], states);
                            });
  const std::size_t rows = states.size();
  const std::size_t cols = table.ratios.size();
  table.trace_out.assign(rows, std::vector<double>(cols, 0.0));
  table.projection.assign(rows, std::vector<double>(cols, 0.0));
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t k = 0; k < n_samples; ++k) {
      const auto& e = evals[c * n_samples + k];
      for (std::size_t r = 0; r < rows; ++r) {
        table.trace_out[r][c] += e.trace_out[r] / static_cast<double>(n_samples);
        table.projection[r][c] += e.projection[r] / static_cast<double>(n_samples);
      }
    }
  }
  return table;
}

const std::vector<std::vector<double>>& table1_reference() {
  static const std::vector<std::vector<double>> ref{
      {0.99995, 0.99983, 0.99906},
      {0.99995, 0.99988, 0.99940},
      {0.99996, 0.99993, 0.99974},
      {0.99995, 0.99957, 0.99830},
  };
  return ref;
}

double table1_max_deviation(const std::vector<std::vector<double>>& computed) {
  const auto& ref = table1_reference();
  if (computed.size() != ref.size()) {
    throw std::invalid_argument("table1_max_deviation: table shape differs from the reference");
  }
  double worst = 0.0;
  for (std::size_t r = 0; r < ref.size(); ++r) {
    if (computed[r].size() != ref[r].size()) {
      throw std::invalid_argument("table1_max_deviation: table shape differs from the reference");
    }
    for (std::size_t c = 0; c < ref[r].size(); ++c) {
      worst = std::max(worst, std::abs(computed[r][c] - ref[r][c]));
    }
  }
  return worst;
}

CsvTable table1_table(const RunConfig& config, const Table1& table) {
  CsvTable t({"motional_state", "ell_over_L", "fidelity_trace_out", "fidelity_projection"});
  add_standard_header(t, config, "table1");
  for (std::size_t r = 0; r < table.inputs.size(); ++r) {
    for (std::size_t c = 0; c < table.ratios.size(); ++c) {
      t.add_row({table.inputs[r], format_double(table.ratios[c]),
                 format_double(table.trace_out[r][c]), format_double(table.projection[r][c])});
    }
  }
  return t;
}

std::string format_table1(const Table1& table) {
  std::ostringstream os;
  auto print = [&](const char* title, const std::vector<std::vector<double>>& cells) {
    os << title << "\n" << std::left << std::setw(14) << "state \\ l/L";
    for (double r : table.ratios) os << std::setw(12) << r;
    os << "\n";
    for (std::size_t i = 0; i < table.inputs.size(); ++i) {
      os << std::setw(14) << table.inputs[i];
      for (double v : cells[i]) os << std::setw(12) << std::fixed << std::setprecision(5) << v;
      os << std::defaultfloat << "\n";
    }
  };
  print("J0-averaged fidelity (trace over final motional states)", table.trace_out);
  print("J0-averaged fidelity (projection on initial motional state)", table.projection);
  return os.str();
}

std::vector<double> phase_scan_thetas(const RunConfig& config) {
  std::vector<double> thetas;
  for (int k = 0; k < config.phase_points; ++k) {
    thetas.push_back(kPi * k / config.phase_points);
  }
  return thetas;
}

std::vector<PhaseScanRow> phase_tunability_scan(const RunConfig& config,
                                                const std::vector<double>& thetas) {
  return parallel_map(thetas.size(), config.resolved_threads(), [&](std::size_t i) {
    RunConfig c = config;
    c.relative_phase = thetas[i];
    const auto eval = evaluate_internal(c, config.ddi);
    const auto fit = fit_controlled_phase(eval.propagator);
    PhaseScanRow row;
    row.theta = thetas[i];
    row.best_phase = fit.phase;
    row.fidelity = fit.fidelity;
    row.predicted_phase = controlled_phase_for(thetas[i]);
    row.discrepancy = wrap_symmetric(fit.phase - row.predicted_phase);
    row.local_z_fidelity = fit_controlled_phase_with_local_z(eval.propagator).fidelity;
    return row;
  });
}

CsvTable phase_scan_table(const RunConfig& config, const std::vector<PhaseScanRow>& rows) {
  CsvTable t({"theta", "best_fit_phase", "fidelity", "predicted_phase", "discrepancy",
              "local_z_fidelity"});
  add_standard_header(t, config, "phase-scan");
  for (const auto& r : rows) {
    t.add_row(std::vector<double>{r.theta, r.best_phase, r.fidelity, r.predicted_phase,
                                  r.discrepancy, r.local_z_fidelity});
  }
  return t;
}

PhaseScanSummary summarize_phase_scan(const std::vector<PhaseScanRow>& rows) {
  if (rows.size() < 2) throw std::invalid_argument("summarize_phase_scan: need >= 2 rows");
  PhaseScanSummary s;
  s.min_fidelity = 1.0;
  std::vector<double> phases;
  for (const auto& r : rows) {
    s.min_fidelity = std::min(s.min_fidelity, r.fidelity);
    s.max_discrepancy = std::max(s.max_discrepancy, std::abs(r.discrepancy));
    phases.push_back(r.best_phase);
  }
  std::sort(phases.begin(), phases.end());
  for (std::size_t i = 1; i < phases.size(); ++i) {
    s.max_gap = std::max(s.max_gap, phases[i] - phases[i - 1]);
  }
  s.max_gap = std::max(s.max_gap, phases.front() + 2.0 * kPi - phases.back());

  std::vector<double> slopes;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double dtheta = rows[i].theta - rows[i - 1].theta;
    slopes.push_back(wrap_symmetric(rows[i].best_phase - rows[i - 1].best_phase) / dtheta);
  }
  for (double x : slopes) s.mean_slope += x / static_cast<double>(slopes.size());
  for (double x : slopes) {
    s.max_slope_deviation =
        std::max(s.max_slope_deviation, std::abs(x - s.mean_slope) / std::abs(s.mean_slope));
  }
  return s;
}

AdiabaticReport adiabatic_report(const RunConfig& config) {
  const PulseSequence pulses = config.pulses();
  const GateModel model = GateModel::from_ratio(pulses, config.ddi, config.target_phase);
  AdiabaticReport report;
  const auto track = track_adiabatic_branch(model, config.report_samples);
  report.branch_continuous = track.continuous;
  for (std::size_t k = 0; k < track.times.size(); ++k) {
    const double t = track.times[k];
    AdiabaticSample s;
    s.time = t;
    s.rabi = pulses.envelope(t);
    if (model.ddi != 0.0 || s.rabi != Complex{}) {
      const auto sys = dressed_eigensystem(model.ddi, s.rabi);
      s.energies = {sys.level(+1, +1).energy, sys.level(+1, -1).energy,
                    sys.level(-1, +1).energy, sys.level(-1, -1).energy};
    }
    s.tracked_branch = track.branch[k];
    report.samples.push_back(s);
  }
  report.phase = adiabatic_phase(model);
  PropagationOptions opts = config.propagation(Tier::Internal);
  opts.store_trajectory = false;
  report.ddi_time = ddi_superposition_times(model, opts);
  const auto run = propagate(internal_driven_hamiltonian(model), first_pulse_schedule(pulses),
                             bell_basis().b_plus, opts);
  report.propagated_phase = -std::arg(bell_basis().b_plus.dot(run.final_state.col(0)));
  return report;
}

CsvTable adiabatic_table(const RunConfig& config, const AdiabaticReport& report) {
  CsvTable t({"t_over_T", "rabi_re", "rabi_im", "xi_plus_plus", "xi_plus_minus",
              "xi_minus_plus", "xi_minus_minus", "tracked_branch"});
  add_standard_header(t, config, "adiabatic-report");
  t.add_header("adiabatic_phase", format_double(report.phase));
  t.add_header("propagated_phase_B_plus", format_double(report.propagated_phase));
  t.add_header("branch_continuous", report.branch_continuous ? "true" : "false");
  t.add_header("td_up_up", format_double(report.ddi_time[kUpUp]));
  t.add_header("td_up_down", format_double(report.ddi_time[kUpDown]));
  t.add_header("td_down_up", format_double(report.ddi_time[kDownUp]));
  t.add_header("td_down_down", format_double(report.ddi_time[kDownDown]));
  for (const auto& s : report.samples) {
    t.add_row(std::vector<double>{s.time, s.rabi.real(), s.rabi.imag(), s.energies[0],
                                  s.energies[1], s.energies[2], s.energies[3],
                                  static_cast<double>(s.tracked_branch)});
  }
  return t;
}

void add_standard_header(CsvTable& table, const RunConfig& config, const std::string& scan) {
  table.add_header("molgate_version", MOLGATE_VERSION);
  table.add_header("scan", scan);
  for (const auto& [k, v] : config.echo()) table.add_header(k, v);
}

ScanFiles write_scan(const RunConfig& config, const std::string& scan, CsvTable table,
                     const std::string& x_column, const std::string& y_column,
                     const std::string& group_column) {
  auto echo = config.echo();
  echo.emplace(echo.begin(), "scan", scan);
  const std::filesystem::path dir(config.out_dir);
  std::filesystem::create_directories(dir);
  const std::string stem = scan + "_" + config_digest(echo);
  ScanFiles files{dir / (stem + ".csv"), dir / (stem + ".gp")};
  table.write(files.csv);
  std::ofstream plot(files.plot);
  if (!plot) throw std::runtime_error("cannot write " + files.plot.string());
  plot << gnuplot_script(files.csv, scan, table.columns(), x_column, y_column, group_column);
  return files;
}

}  // namespace molgate
