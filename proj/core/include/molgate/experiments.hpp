#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "molgate/config.hpp"
#include "molgate/fidelity.hpp"
#include "molgate/output.hpp"

namespace molgate {

// One internal-tier gate: propagator, fidelity against the configured
// controlled phase, and t_d for the four computational inputs.
struct InternalEvaluation {
  CMatrix propagator;
  FidelityReport report;
  std::array<double, 4> ddi_time{};
  double unitarity_residual = 0.0;
};

InternalEvaluation evaluate_internal(const RunConfig& config, double ddi_ratio);

// Fidelities of one composite-tier gate for several motional inputs, all
// from a single batched propagation.
struct CompositeEvaluation {
  std::vector<double> trace_out;   // one per requested input
  std::vector<double> projection;  // same order
  double unitarity_residual = 0.0;
};

CompositeEvaluation evaluate_composite(const RunConfig& config, double j0_ratio,
                                       double ratio,
                                       const std::vector<MotionalState>& inputs);

FidelityReport composite_report(const RunConfig& config, double j0_ratio, double ratio,
                                const MotionalState& input,
                                MotionalFidelity construction);
// Same, from an evaluation whose first input is `input`.
FidelityReport composite_report(const RunConfig& config, double j0_ratio, double ratio,
                                const MotionalState& input, MotionalFidelity construction,
                                const CompositeEvaluation& eval);

// A one-dimensional sweep and the fixed parameters echoed with it.
struct SweepSpec {
  std::string scan;
  std::string parameter;
  std::vector<double> grid;
  Tier tier = Tier::Internal;
  Parameters fixed;
};

SweepSpec fig1_spec(const RunConfig& config);
SweepSpec fig2_spec(const RunConfig& config);

struct Fig1Row {
  double ddi_ratio = 0.0;
  double fidelity = 0.0;
  double log10_infidelity = 0.0;
  double td_up_down = 0.0;  // units of T
  double td_down_up = 0.0;
  double td_up_up = 0.0;
  double td_down_down = 0.0;
};

std::vector<Fig1Row> fig1_scan(const RunConfig& config, const std::vector<double>& grid);
CsvTable fig1_table(const RunConfig& config, const std::vector<Fig1Row>& rows);

// Strict interior local minima of a sampled curve.
int count_interior_minima(const std::vector<double>& values);

struct Fig2Row {
  double ratio = 0.0;
  std::string input;
  double j0_ratio = 0.0;
  double fidelity = 0.0;  // trace-out
  double log10_infidelity = 0.0;
  double fidelity_projection = 0.0;
};

std::vector<Fig2Row> fig2_scan(const RunConfig& config, const std::vector<double>& ratios,
                               const std::vector<std::string>& inputs,
                               const std::vector<double>& grid);
CsvTable fig2_table(const RunConfig& config, const std::vector<Fig2Row>& rows);

// J0-averaged fidelities, rows = motional inputs, columns = l/L.
struct Table1 {
  std::vector<double> ratios;
  std::vector<std::string> inputs;
  std::vector<double> samples;
  std::vector<std::vector<double>> trace_out;
  std::vector<std::vector<double>> projection;
};

Table1 table1_run(const RunConfig& config);

// Published reference grid for the default table (rows one, plus, vac,
// thermal(2); columns l/L = 0.04, 0.07, 0.1).
const std::vector<std::vector<double>>& table1_reference();

// Largest |computed - reference| over the table for one construction.
double table1_max_deviation(const std::vector<std::vector<double>>& computed);

CsvTable table1_table(const RunConfig& config, const Table1& table);
std::string format_table1(const Table1& table);

struct PhaseScanRow {
  double theta = 0.0;
  double best_phase = 0.0;      // phi* maximising F over controlled-phase targets
  double fidelity = 0.0;        // F against diag(1, 1, 1, e^{i phi*})
  double predicted_phase = 0.0; // pi - 2 theta from the pulse-phase relation
  double discrepancy = 0.0;     // wrapped phi* - predicted, in (-pi, pi]
  double local_z_fidelity = 0.0;
};

// theta_k = pi k / phase_points. The controlled phase depends on 2 theta, so
// half a turn of theta already sweeps phi once around the circle.
std::vector<double> phase_scan_thetas(const RunConfig& config);

std::vector<PhaseScanRow> phase_tunability_scan(const RunConfig& config,
                                                const std::vector<double>& thetas);
CsvTable phase_scan_table(const RunConfig& config, const std::vector<PhaseScanRow>& rows);

struct PhaseScanSummary {
  double min_fidelity = 0.0;
  double max_gap = 0.0;        // largest circular gap between sorted phi*
  double mean_slope = 0.0;     // mean wrapped d(phi*)/d(theta)
  double max_slope_deviation = 0.0;  // relative to the mean slope
  double max_discrepancy = 0.0;
};

PhaseScanSummary summarize_phase_scan(const std::vector<PhaseScanRow>& rows);

struct AdiabaticSample {
  double time = 0.0;
  Complex rabi;
  std::array<double, 4> energies{};  // xi for (+,+), (+,-), (-,+), (-,-)
  int tracked_branch = 0;
};

struct AdiabaticReport {
  std::vector<AdiabaticSample> samples;
  double phase = 0.0;
  std::array<double, 4> ddi_time{};
  bool branch_continuous = true;
  double propagated_phase = 0.0;  // -arg <B_+|U_pulse1|B_+>
};

AdiabaticReport adiabatic_report(const RunConfig& config);
CsvTable adiabatic_table(const RunConfig& config, const AdiabaticReport& report);

struct ScanFiles {
  std::filesystem::path csv;
  std::filesystem::path plot;
};

// Writes `<scan>_<digest>.csv` plus a gnuplot script next to it. The CSV
// header echoes the version, the scan name and the full configuration.
ScanFiles write_scan(const RunConfig& config, const std::string& scan, CsvTable table,
                     const std::string& x_column, const std::string& y_column,
                     const std::string& group_column = {});

// Header block shared by every output table.
void add_standard_header(CsvTable& table, const RunConfig& config, const std::string& scan);

}  // namespace molgate
