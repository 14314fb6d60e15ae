#include "molgate/invariants.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "molgate/adiabatic.hpp"
#include "molgate/experiments.hpp"
#include "molgate/gate_sequence.hpp"

namespace molgate {
namespace {

CheckResult below(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value, threshold, std::isfinite(value) && value < threshold,
          std::move(detail)};
}

CheckResult exact_zero(std::string name, double value, std::string detail = {}) {
  return {std::move(name), value, 0.0, value == 0.0, std::move(detail)};
}

// Worst disagreement between the closed-form dressed states and a numerical
// eigensolver: eigenvalues, eigenvector residual and normalisation.
double eigensystem_error(std::mt19937_64& rng, int samples) {
  std::uniform_real_distribution<double> ddi(-30.0, 30.0);
  std::uniform_real_distribution<double> amp(0.0, 30.0);
  std::uniform_real_distribution<double> arg(0.0, 2.0 * std::numbers::pi);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double j = ddi(rng);
    const Complex rabi = std::polar(amp(rng), arg(rng));
    const auto sys = dressed_eigensystem(j, rabi);
    const auto sectors = sector_hamiltonians(j, rabi);
    for (int alpha : {+1, -1}) {
      const Eigen::Matrix2cd& h = sectors.sector(alpha);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
      // eta = + is the upper eigenvalue.
      const double num_hi = es.eigenvalues()(1);
      const double num_lo = es.eigenvalues()(0);
      worst = std::max(worst, std::abs(sys.level(alpha, +1).energy - num_hi));
      worst = std::max(worst, std::abs(sys.level(alpha, -1).energy - num_lo));
      for (int eta : {+1, -1}) {
        const auto& lv = sys.level(alpha, eta);
        const Eigen::Vector2cd r = h * lv.vector - lv.energy * lv.vector;
        worst = std::max(worst, r.cwiseAbs().maxCoeff());
        worst = std::max(worst, std::abs(lv.vector.norm() - 1.0));
        // Also compare with the numerical eigenvector up to phase.
        const Eigen::Vector2cd v = es.eigenvectors().col(eta > 0 ? 1 : 0);
        worst = std::max(worst, std::abs(std::abs(v.dot(lv.vector)) - 1.0));
      }
    }
  }
  return worst;
}

double parity_violation(const RunConfig& config) {
  MotionalSpace space = config.motional_space(config.j0, 0.1);
  const CMatrix j = ddi_operator(space);
  double worst = 0.0;
  for (Index m = 0; m < j.rows(); ++m) {
    for (Index n = 0; n < j.cols(); ++n) {
      if ((m + n) % 2 == 1) worst = std::max(worst, std::abs(j(m, n)));
    }
  }
  return worst;
}

CMatrix embed_target(const Eigen::Matrix4cd& target) {
  const auto n = static_cast<Index>(InternalBasis::kDimension);
  CMatrix u = CMatrix::Identity(n, n);
  u.topLeftCorner(4, 4) = target;
  return u;
}

CMatrix random_unitary(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  CMatrix h(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < n; ++k) h(i, k) = Complex(g(rng), g(rng));
  }
  h = (0.5 * (h + h.adjoint())).eval();
  return expm_hermitian(h, 1.0);
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(const RunConfig& config,
                                             const InvariantOptions& options) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(options.seed);
  const PulseSequence pulses = config.pulses();
  const double unitarity_tol = config.unitarity_tol;
  const auto target = controlled_phase_target(config.target_phase);

  // Internal tier at the configured J.
  const auto internal = evaluate_internal(config, config.ddi);
  out.push_back(below("unitarity internal", internal.unitarity_residual, unitarity_tol,
                      "Frobenius |U^dag U - I|, 9x9 gate"));

  out.push_back(below("analytic eigensystem", eigensystem_error(rng, options.eigensystem_samples),
                      1e-12, std::to_string(options.eigensystem_samples) + " random (J, Omega_mu)"));

  out.push_back(exact_zero("J-operator parity", parity_violation(config),
                           "largest <m|J|n> with m + n odd"));

  {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double f0 = average_gate_fidelity(computational_block(internal.propagator).adjoint() *
                                            target);
    double worst = 0.0;
    for (int k = 0; k < 16; ++k) {
      const Complex g = std::polar(1.0, phase(rng));
      const CMatrix u = g * internal.propagator;
      worst = std::max(worst,
                       std::abs(gate_fidelity(u, target).fidelity - internal.report.fidelity));
    }
    worst = std::max(worst, std::abs(f0 - internal.report.fidelity));
    out.push_back(below("global phase invariance", worst, 1e-12, "16 random gamma"));
  }

  {
    // The Z gate on molecule ii breaks the exchange symmetry except for
    // theta = +-pi/2, where the two single-excitation inputs are mirror
    // images. Check there; the asymmetry at the configured theta goes in
    // the detail.
    RunConfig mirror = config;
    mirror.relative_phase = std::numbers::pi / 2;
    const auto sym = evaluate_internal(mirror, config.ddi);
    out.push_back(below("t_d(up,down) = t_d(down,up)",
                        std::abs(sym.ddi_time[kUpDown] - sym.ddi_time[kDownUp]), 1e-8,
                        "theta = pi/2, t_d = " + format_double(sym.ddi_time[kUpDown]) +
                            "; configured theta differs by " +
                            format_double(internal.ddi_time[kUpDown] -
                                          internal.ddi_time[kDownUp])));
    out.push_back(exact_zero("t_d(up,up) = 0",
                             std::max(internal.ddi_time[kUpUp], sym.ddi_time[kUpUp])));
  }

  {
    // A factorised U = CZ (x) U_motion must score F = 1 for every input.
    const Index m = config.n_max + 1;
    const CMatrix u = kron(embed_target(target), random_unitary(rng, m));
    double worst = 0.0;
    for (const char* name : {"vac", "one", "plus", "thermal(2)"}) {
      const auto state = MotionalState::parse(name, config.n_max);
      const double f =
          gate_fidelity_with_motion(u, target, state, MotionalFidelity::TraceOut).fidelity;
      worst = std::max(worst, std::abs(1.0 - f));
    }
    out.push_back(below("factorized evolution F = 1", worst, 1e-10, "trace-out construction"));
  }

  if (options.composite) {
    // With l/L = 0 the operator J collapses to -J0, and the vacuum column of
    // the composite gate must reproduce the internal gate at J = -J0.
    RunConfig c = config;
    c.steps_per_pulse = config.resolved_steps(Tier::Internal);
    const MotionalSpace space = c.motional_space(c.j0, 0.0);
    const Index m = space.dimension();
    const GateModel zero_model{pulses, 0.0, c.target_phase};
    PropagationOptions opts = c.propagation(Tier::Composite);
    CVector vac = CVector::Zero(m);
    vac(0) = 1.0;
    const auto comp = propagate(composite_driven_hamiltonian(zero_model, space, c.include_trap),
                                gate_schedule(pulses), computational_inputs(vac), opts);
    CMatrix reduced(InternalBasis::kDimension, 4);
    for (Index i = 0; i < static_cast<Index>(InternalBasis::kDimension); ++i) {
      reduced.row(i) = comp.final_state.row(i * m);
    }
    const GateModel flipped = GateModel::from_ratio(pulses, -c.j0, c.target_phase);
    const CMatrix ref = gate_propagator(flipped, opts).leftCols(4);
    out.push_back(below("l/L = 0 matches internal J = -J0", (reduced - ref).cwiseAbs().maxCoeff(),
                        1e-12, "vacuum columns, same step grid"));
    out.push_back(below("unitarity composite l/L = 0", comp.unitarity_residual, unitarity_tol));

    const auto eval = evaluate_composite(config, config.j0, 0.1,
                                         {MotionalState::parse("vac", config.n_max),
                                          MotionalState::parse("thermal(2)", config.n_max)});
    out.push_back(below("unitarity composite l/L = 0.1", eval.unitarity_residual, unitarity_tol,
                        "Gram drift of all propagated columns"));
  }

  if (options.certify) {
    const GateModel model = GateModel::from_ratio(pulses, config.ddi, config.target_phase);
    const auto n = static_cast<Index>(InternalBasis::kDimension);
    const Metric fidelity = [&](const CMatrix& u) { return gate_fidelity(u, target).fidelity; };
    const auto report =
        convergence_certify(internal_driven_hamiltonian(model), gate_schedule(pulses),
                            CMatrix::Identity(n, n), config.propagation(Tier::Internal),
                            config.convergence_tol, fidelity);
    CheckResult r = below("convergence internal", report.record.back().state_difference,
                          config.convergence_tol, report.summary());
    r.passed = report.passed;
    out.push_back(r);

    if (options.composite) {
      const MotionalSpace space = config.motional_space(config.j0, 0.1);
      const GateModel comp_model{pulses, 0.0, config.target_phase};
      CVector vac = CVector::Zero(space.dimension());
      vac(0) = 1.0;
      const Metric motional = [&](const CMatrix& cols) {
        return motional_fidelity(cols, vac, target, MotionalFidelity::TraceOut);
      };
      const auto comp = convergence_certify(
          composite_driven_hamiltonian(comp_model, space, config.include_trap),
          gate_schedule(pulses), computational_inputs(vac), config.propagation(Tier::Composite),
          config.convergence_tol, motional);
      CheckResult rc = below("convergence composite", comp.record.back().state_difference,
                             config.convergence_tol, comp.summary());
      rc.passed = comp.passed;
      out.push_back(rc);
    }
  }
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

std::string format_check(const CheckResult& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s  %-36s value=%.3e threshold=%.1e", r.passed ? "ok  " : "FAIL",
                r.name.c_str(), r.value, r.threshold);
  std::string s = buf;
  if (!r.detail.empty()) s += "  (" + r.detail + ")";
  return s;
}

}  // namespace molgate
