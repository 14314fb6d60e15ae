#include "molgate/fidelity.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "molgate/basis.hpp"
#include "molgate/output.hpp"
#include "molgate/parallel.hpp"
#include "molgate/pulse.hpp"

namespace molgate {
namespace {

constexpr int kN = 4;
constexpr double kNorm = kN * (kN + 1);

// Tr(M M^dag) + |Tr M|^2 accumulated over Kraus-like blocks.
double fidelity_sum(const Eigen::Matrix4cd& m) {
  return m.squaredNorm() + std::norm(m.trace());
}

}  // namespace

FidelityReport& FidelityReport::with(std::string key, std::string value) {
  parameters.emplace_back(std::move(key), std::move(value));
  return *this;
}

FidelityReport& FidelityReport::with(std::string key, double value) {
  return with(std::move(key), format_double(value));
}

std::vector<std::string> FidelityReport::csv_columns() const {
  std::vector<std::string> cols;
  for (const auto& [k, v] : parameters) cols.push_back(k);
  cols.emplace_back("target_phase");
  if (best_fit_phase) cols.emplace_back("best_fit_phase");
  cols.emplace_back("fidelity");
  cols.emplace_back("infidelity");
  return cols;
}

std::vector<std::string> FidelityReport::csv_values() const {
  std::vector<std::string> vals;
  for (const auto& [k, v] : parameters) vals.push_back(v);
  vals.push_back(format_double(target_phase));
  if (best_fit_phase) vals.push_back(format_double(*best_fit_phase));
  vals.push_back(format_double(fidelity));
  vals.push_back(format_double(infidelity));
  return vals;
}

nlohmann::json FidelityReport::to_json() const {
  nlohmann::json j;
  j["parameters"] = nlohmann::json::object();
  for (const auto& [k, v] : parameters) j["parameters"][k] = v;
  j["target_phase"] = target_phase;
  if (best_fit_phase) j["best_fit_phase"] = *best_fit_phase;
  j["fidelity"] = fidelity;
  j["infidelity"] = infidelity;
  return j;
}

Eigen::Matrix4cd controlled_phase_target(double phi) {
  Eigen::Matrix4cd t = Eigen::Matrix4cd::Identity();
  t(3, 3) = std::polar(1.0, phi);
  return t;
}

double average_gate_fidelity(const Eigen::Matrix4cd& m) {
  return fidelity_sum(m) / kNorm;
}

Eigen::Matrix4cd computational_block(const CMatrix& u) {
  constexpr auto d = static_cast<Index>(InternalBasis::kDimension);
  if (u.rows() != d || (u.cols() != d && u.cols() != kN)) {
    throw std::invalid_argument("gate_fidelity: expected a 9x9 or 9x4 propagator, got " +
                                std::to_string(u.rows()) + "x" + std::to_string(u.cols()));
  }
  return u.topLeftCorner(kN, kN);
}

FidelityReport gate_fidelity(const CMatrix& u, const Eigen::Matrix4cd& target) {
  const Eigen::Matrix4cd m = target.adjoint() * computational_block(u);
  FidelityReport r;
  r.fidelity = average_gate_fidelity(m);
  r.infidelity = 1.0 - r.fidelity;
  r.target_phase = std::arg(target(3, 3));
  if (r.target_phase < 0.0) r.target_phase += 2.0 * std::numbers::pi;
  return r;
}

const char* to_string(MotionalFidelity construction) {
  return construction == MotionalFidelity::TraceOut ? "trace_out" : "projection";
}

MotionalFidelity parse_motional_fidelity(const std::string& name) {
  if (name == "trace_out") return MotionalFidelity::TraceOut;
  if (name == "projection") return MotionalFidelity::Projection;
  throw std::invalid_argument("fidelity construction must be trace_out or projection, got '" +
                              name + "'");
}

double motional_fidelity(const CMatrix& evolved, const CVector& chi,
                         const Eigen::Matrix4cd& target, MotionalFidelity construction) {
  const Index m = chi.size();
  if (m < 1 || evolved.rows() != static_cast<Index>(InternalBasis::kDimension) * m ||
      evolved.cols() != kN) {
    throw std::invalid_argument("motional_fidelity: evolved columns have the wrong shape");
  }
  if (std::abs(chi.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("motional_fidelity: input motional state is not normalised");
  }
  const Eigen::Matrix4cd target_dag = target.adjoint();
  if (construction == MotionalFidelity::Projection) {
    Eigen::Matrix4cd block;
    for (int i = 0; i < kN; ++i) {
      for (int j = 0; j < kN; ++j) {
        block(i, j) = chi.dot(evolved.col(j).segment(i * m, m));
      }
    }
    return average_gate_fidelity(target_dag * block);
  }
  double total = 0.0;
  Eigen::Matrix4cd block;
  for (Index k = 0; k < m; ++k) {
    for (int i = 0; i < kN; ++i) {
      for (int j = 0; j < kN; ++j) block(i, j) = evolved(i * m + k, j);
    }
    total += fidelity_sum(target_dag * block);
  }
  return total / kNorm;
}

FidelityReport gate_fidelity_with_motion(const CMatrix& u, const Eigen::Matrix4cd& target,
                                         const MotionalState& input,
                                         MotionalFidelity construction) {
  const Index m = input.dimension();
  const Index dim = static_cast<Index>(InternalBasis::kDimension) * m;
  if (u.rows() != dim || u.cols() != dim) {
    throw std::invalid_argument("gate_fidelity_with_motion: propagator is " +
                                std::to_string(u.rows()) + "x" + std::to_string(u.cols()) +
                                ", expected " + std::to_string(dim));
  }
  auto columns_for = [&](const CVector& chi) {
    CMatrix cols(dim, kN);
    for (int j = 0; j < kN; ++j) cols.col(j) = u.middleCols(j * m, m) * chi;
    return cols;
  };
  FidelityReport r;
  if (input.is_thermal()) {
    const auto& w = input.as_thermal().weights;
    double f = 0.0;
    for (Index n = 0; n < m; ++n) {
      if (w[n] == 0.0) continue;
      CVector chi = CVector::Zero(m);
      chi(n) = 1.0;
      f += w[n] * motional_fidelity(columns_for(chi), chi, target, construction);
    }
    r.fidelity = f;
  } else {
    const CVector& chi = input.as_pure().amplitudes;
    r.fidelity = motional_fidelity(columns_for(chi), chi, target, construction);
  }
  r.infidelity = 1.0 - r.fidelity;
  r.target_phase = wrap_angle(std::arg(target(3, 3)));
  r.with("motional_state", input.name());
  r.with("fidelity_construction", to_string(construction));
  return r;
}

AveragedReport average_over_parameter(const std::function<FidelityReport(double)>& runner,
                                      const std::vector<double>& samples,
                                      const std::string& parameter, unsigned threads) {
  if (samples.empty()) {
    throw std::invalid_argument("average_over_parameter: no samples");
  }
  AveragedReport out;
  out.samples = parallel_map(samples.size(), threads, [&](std::size_t i) {
    try {
      return runner(samples[i]);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "sample " << parameter << " = " << format_double(samples[i]) << ": " << e.what();
      throw std::runtime_error(os.str());
    }
  });
  double sum = 0.0;
  for (const auto& s : out.samples) sum += s.fidelity;
  out.mean = out.samples.front();
  out.mean.fidelity = sum / static_cast<double>(samples.size());
  out.mean.infidelity = 1.0 - out.mean.fidelity;
  out.mean.best_fit_phase.reset();
  Parameters echoed;
  for (auto& [k, v] : out.mean.parameters) {
    if (k != parameter) echoed.emplace_back(k, v);
  }
  echoed.emplace_back(parameter + "_min", format_double(samples.front()));
  echoed.emplace_back(parameter + "_max", format_double(samples.back()));
  echoed.emplace_back(parameter + "_samples", std::to_string(samples.size()));
  out.mean.parameters = std::move(echoed);
  return out;
}

PhaseFit fit_controlled_phase(const CMatrix& u) {
  const Eigen::Matrix4cd block = computational_block(u);
  // Only |Tr M|^2 = |u00 + u11 + u22 + e^{-i phi} u33|^2 depends on phi, so
  // the maximum aligns the last term with the sum of the others.
  const Complex rest = block(0, 0) + block(1, 1) + block(2, 2);
  const double phase = wrap_angle(std::arg(block(3, 3)) - std::arg(rest));
  return {phase, average_gate_fidelity(controlled_phase_target(phase).adjoint() * block)};
}

LocalPhaseFit fit_controlled_phase_with_local_z(const CMatrix& u) {
  const Eigen::Matrix4cd block = computational_block(u);
  // Any diagonal unitary is global x local Z x controlled phase, so the
  // optimum aligns each diagonal entry's phase.
  const double a00 = std::arg(block(0, 0));
  const double a01 = std::arg(block(1, 1));
  const double a10 = std::arg(block(2, 2));
  const double a11 = std::arg(block(3, 3));
  LocalPhaseFit fit;
  fit.second_local_phase = wrap_angle(a01 - a00);
  fit.first_local_phase = wrap_angle(a10 - a00);
  fit.controlled_phase = wrap_angle(a11 - a10 - a01 + a00);
  Eigen::Matrix4cd target = Eigen::Matrix4cd::Zero();
  target(0, 0) = std::polar(1.0, a00);
  target(1, 1) = std::polar(1.0, a01);
  target(2, 2) = std::polar(1.0, a10);
  target(3, 3) = std::polar(1.0, a11);
  fit.fidelity = average_gate_fidelity(target.adjoint() * block);
  return fit;
}

}  // namespace molgate
