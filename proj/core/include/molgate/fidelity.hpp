#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "molgate/linalg.hpp"
#include "molgate/motion.hpp"

namespace molgate {

using Parameters = std::vector<std::pair<std::string, std::string>>;

struct FidelityReport {
  double fidelity = 0.0;
  double infidelity = 1.0;
  double target_phase = 0.0;
  std::optional<double> best_fit_phase;
  Parameters parameters;  // every input echoed, in insertion order

  FidelityReport& with(std::string key, std::string value);
  FidelityReport& with(std::string key, double value);

  // Parameters first, then fidelity and infidelity.
  std::vector<std::string> csv_columns() const;
  std::vector<std::string> csv_values() const;
  nlohmann::json to_json() const;
};

// diag(1, 1, 1, e^{i phi}) on (|up,up>, |up,down>, |down,up>, |down,down>).
Eigen::Matrix4cd controlled_phase_target(double phi);

// (Tr(M M^dag) + |Tr M|^2) / (n (n + 1)) with n = 4.
double average_gate_fidelity(const Eigen::Matrix4cd& m);

// Computational block of u: u is 9x9, or 9x4 holding U|j> for the four
// computational inputs.
Eigen::Matrix4cd computational_block(const CMatrix& u);

// Leakage-aware average fidelity of the internal-tier propagator.
FidelityReport gate_fidelity(const CMatrix& u, const Eigen::Matrix4cd& target);

enum class MotionalFidelity {
  // Sum over final Fock states k of the fidelity of M_k = <k|U|chi>.
  TraceOut,
  // Single block M = <chi|U|chi>.
  Projection,
};

const char* to_string(MotionalFidelity construction);
MotionalFidelity parse_motional_fidelity(const std::string& name);

// Fidelity for a pure motional input from the evolved columns
// U (|j> (x) chi), j = 0..3, each of length 9 * chi.size().
double motional_fidelity(const CMatrix& evolved, const CVector& chi,
                         const Eigen::Matrix4cd& target,
                         MotionalFidelity construction);

// Fidelity of a full composite propagator for a pure or thermal input.
// Thermal inputs are the Bose-Einstein weighted mean over Fock inputs.
FidelityReport gate_fidelity_with_motion(const CMatrix& u,
                                         const Eigen::Matrix4cd& target,
                                         const MotionalState& input,
                                         MotionalFidelity construction =
                                             MotionalFidelity::TraceOut);

struct AveragedReport {
  FidelityReport mean;
  std::vector<FidelityReport> samples;
};

// Arithmetic mean of the runner's fidelity over the samples. The mean report
// echoes the first sample's parameters with the swept one replaced by the
// sample range; any failing sample aborts with the sample value in the
// message.
AveragedReport average_over_parameter(
    const std::function<FidelityReport(double)>& runner,
    const std::vector<double>& samples, const std::string& parameter,
    unsigned threads = 1);

struct PhaseFit {
  double phase = 0.0;     // in [0, 2 pi)
  double fidelity = 0.0;  // against controlled_phase_target(phase)
};

// Controlled phase maximising the fidelity of u (closed form).
PhaseFit fit_controlled_phase(const CMatrix& u);

struct LocalPhaseFit {
  double controlled_phase = 0.0;
  double first_local_phase = 0.0;   // Z phase on |down> of molecule i
  double second_local_phase = 0.0;  // Z phase on |down> of molecule ii
  double fidelity = 0.0;
};

// Diagnostic fit allowing single-qubit Z corrections as well as the
// controlled phase.
LocalPhaseFit fit_controlled_phase_with_local_z(const CMatrix& u);

}  // namespace molgate
