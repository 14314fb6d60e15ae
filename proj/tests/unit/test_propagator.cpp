#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "molgate/errors.hpp"
#include "molgate/fidelity.hpp"
#include "molgate/gate_sequence.hpp"
#include "molgate/propagator.hpp"

using namespace molgate;

namespace {

CMatrix random_hermitian(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> g;
  CMatrix h(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) h(i, j) = Complex(g(rng), g(rng));
  }
  return 0.5 * (h + h.adjoint());
}

GateModel default_model(double ratio = 4.0) {
  return GateModel::from_ratio(PulseSequence::calibrated(0.234, 1.0, std::numbers::pi), ratio,
                               std::numbers::pi);
}

// Fourth-order commutator-free Magnus with two exponentials per step,
// exponentials from Eigen's general matrix exponential.
CMatrix magnus_reference(const GateModel& model, double t0, double t1, int steps) {
  const double c1 = 0.5 - std::sqrt(3.0) / 6.0, c2 = 0.5 + std::sqrt(3.0) / 6.0;
  const double a1 = 0.25 + std::sqrt(3.0) / 6.0, a2 = 0.25 - std::sqrt(3.0) / 6.0;
  const double dt = (t1 - t0) / steps;
  CMatrix u = CMatrix::Identity(9, 9);
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * dt;
    const CMatrix h1 = hamiltonian_at(model, t + c1 * dt);
    const CMatrix h2 = hamiltonian_at(model, t + c2 * dt);
    const CMatrix e1 = (Complex(0.0, -dt) * (a1 * h1 + a2 * h2)).exp();
    const CMatrix e2 = (Complex(0.0, -dt) * (a2 * h1 + a1 * h2)).exp();
    u = e2 * e1 * u;
  }
  return u;
}

}  // namespace

TEST(Propagator, ConstantHamiltonianMatchesMatrixExponential) {
  std::mt19937_64 rng(3);
  const CMatrix h0 = random_hermitian(rng, 6);
  const DrivenHamiltonian h(h0, CMatrix::Zero(6, 6), [](double) { return Complex(0.0); });
  PropagationOptions opts;
  opts.steps_per_segment = 7;
  const auto run = propagate(h, Schedule{0.0, 1.3, {}}, CMatrix::Identity(6, 6), opts);
  const CMatrix ref = (Complex(0.0, -1.3) * h0).exp();
  EXPECT_LT((run.final_state - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Propagator, TimeOrderedAgainstMagnusReference) {
  const auto model = default_model();
  PropagationOptions opts;
  const auto run = propagate(internal_driven_hamiltonian(model),
                             first_pulse_schedule(model.pulses), CMatrix::Identity(9, 9), opts);
  const CMatrix ref = magnus_reference(model, 0.0, 1.0, 4000);
  EXPECT_LT((run.final_state - ref).cwiseAbs().maxCoeff(), 1e-9);

  // exp(-i int H dt) ignores time ordering and is visibly wrong here.
  const double area = pulse_area(model.pulses.peak_rabi(), 0.234, 1.0);
  const CMatrix averaged = 0.5 * area * (drive_coupling() + drive_coupling().adjoint()) +
                           model.ddi * ddi_coupling();
  const CMatrix naive = (Complex(0.0, -1.0) * averaged).exp();
  EXPECT_GT((naive - ref).cwiseAbs().maxCoeff(), 1e-2);
}

TEST(Propagator, FullGateMatchesMagnusWithKicks) {
  const auto model = default_model(3.3);
  const CMatrix z = single_qubit_phase_gate(Molecule::Second, std::numbers::pi);
  const CMatrix ref = z * magnus_reference(model, 1.0, 2.0, 4000) * z *
                      magnus_reference(model, 0.0, 1.0, 4000);
  PropagationOptions opts;
  EXPECT_LT((gate_propagator(model, opts) - ref).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Propagator, CompositionOfSegments) {
  const auto model = default_model();
  const auto h = internal_driven_hamiltonian(model);
  const CMatrix z = single_qubit_phase_gate(Molecule::Second, std::numbers::pi);
  PropagationOptions opts;
  opts.steps_per_segment = 500;
  CVector psi = CVector::Zero(9);
  psi(kDownDown) = std::sqrt(0.5);
  psi(kUpDown) = Complex(0.0, std::sqrt(0.5));
  const auto whole = propagate(h, gate_schedule(model.pulses), psi, opts);
  const auto first = propagate(h, Schedule{0.0, 1.0, {Kick{1.0, z}}}, psi, opts);
  const auto second = propagate(h, Schedule{1.0, 2.0, {Kick{2.0, z}}}, first.final_state, opts);
  EXPECT_LT((whole.final_state - second.final_state).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_NEAR(whole.final_state.norm(), 1.0, 1e-9);
}

TEST(Propagator, TrackedPopulationAgainstRabiFormula) {
  // Static two-level coupling g sigma_x: P_1(t) = sin^2(g t).
  const double g = 2.7, T = 1.4;
  CMatrix h0(2, 2);
  h0 << 0.0, g, g, 0.0;
  const DrivenHamiltonian h(h0, CMatrix::Zero(2, 2), [](double) { return Complex(0.0); });
  PropagationOptions opts;
  opts.steps_per_segment = 400;
  opts.tracked_indices = {1};
  CVector psi = CVector::Zero(2);
  psi(0) = 1.0;
  const auto run = propagate(h, Schedule{0.0, T, {}}, psi, opts);
  EXPECT_NEAR(run.tracked_time(0), T / 2.0 - std::sin(2.0 * g * T) / (4.0 * g), 1e-9);
  opts.steps_per_segment = 401;
  EXPECT_THROW(propagate(h, Schedule{0.0, T, {}}, psi, opts), std::invalid_argument);
}

TEST(Propagator, TrajectoryLandsOnTheGrid) {
  const auto model = default_model();
  PropagationOptions opts;
  opts.steps_per_segment = 50;
  opts.store_trajectory = true;
  const auto run = propagate(internal_driven_hamiltonian(model), gate_schedule(model.pulses),
                             CMatrix::Identity(9, 9), opts);
  ASSERT_EQ(run.trajectory.size(), 101u);
  EXPECT_DOUBLE_EQ(run.trajectory.back().time, 2.0);
  EXPECT_EQ((run.trajectory.back().state - run.final_state).norm(), 0.0);
  EXPECT_NEAR(run.trajectory[50].time, 1.0, 1e-15);
}

TEST(Propagator, UnitarityGuard) {
  const auto model = default_model();
  PropagationOptions opts;
  opts.steps_per_segment = 20;
  opts.unitarity_tol = 1e-30;
  EXPECT_THROW(propagate(internal_driven_hamiltonian(model), gate_schedule(model.pulses),
                         CMatrix::Identity(9, 9), opts),
               NumericalError);
}

TEST(Propagator, RejectsBadInput) {
  const auto model = default_model();
  const auto h = internal_driven_hamiltonian(model);
  PropagationOptions opts;
  EXPECT_THROW(propagate(h, Schedule{0.0, 1.0, {}}, CMatrix::Identity(4, 4), opts),
               std::invalid_argument);
  EXPECT_THROW(propagate(h, Schedule{1.0, 1.0, {}}, CMatrix::Identity(9, 9), opts),
               std::invalid_argument);
  EXPECT_THROW(propagate(h, Schedule{0.0, 1.0, {Kick{1.5, CMatrix::Identity(9, 9)}}},
                         CMatrix::Identity(9, 9), opts),
               std::invalid_argument);
  EXPECT_THROW(propagate(h, Schedule{0.0, 1.0, {Kick{0.5, 2.0 * CMatrix::Identity(9, 9)}}},
                         CMatrix::Identity(9, 9), opts),
               std::invalid_argument);
  CMatrix not_hermitian = CMatrix::Zero(2, 2);
  not_hermitian(0, 1) = 1.0;
  EXPECT_THROW(DrivenHamiltonian(not_hermitian, CMatrix::Zero(2, 2),
                                 [](double) { return Complex(0.0); }),
               std::invalid_argument);
}

TEST(Propagator, ConvergenceCertificate) {
  const auto model = default_model();
  const auto h = internal_driven_hamiltonian(model);
  const auto sched = gate_schedule(model.pulses);
  const Metric f = [](const CMatrix& u) {
    return gate_fidelity(u, controlled_phase_target(std::numbers::pi)).fidelity;
  };
  PropagationOptions opts;
  const auto good = convergence_certify(h, sched, CMatrix::Identity(9, 9), opts, 1e-8, f);
  EXPECT_TRUE(good.passed) << good.summary();
  EXPECT_EQ(good.record.size(), 2u);
  EXPECT_EQ(good.accepted_steps, 4000);

  opts.steps_per_segment = 10;
  const auto coarse = convergence_certify(h, sched, CMatrix::Identity(9, 9), opts, 1e-8, f);
  EXPECT_FALSE(coarse.passed);
  EXPECT_GT(coarse.record.back().state_difference, 1e-8);
  EXPECT_NE(coarse.summary().find("FAIL"), std::string::npos);

  const DrivenHamiltonian zero(CMatrix::Zero(3, 3), CMatrix::Zero(3, 3),
                               [](double) { return Complex(0.0); });
  opts.steps_per_segment = 2;
  EXPECT_TRUE(convergence_certify(zero, Schedule{0.0, 1.0, {}}, CMatrix::Identity(3, 3), opts)
                  .passed);
}

TEST(Propagator, ConvergedPropagationRefines) {
  const auto model = default_model();
  PropagationOptions opts;
  opts.steps_per_segment = 100;
  const auto run = propagate_converged(internal_driven_hamiltonian(model),
                                       gate_schedule(model.pulses), CMatrix::Identity(9, 9), opts,
                                       1e-8, 6);
  EXPECT_GT(run.steps_per_segment, 100);
  EXPECT_FALSE(run.convergence.empty());
  opts.steps_per_segment = 4;
  EXPECT_THROW(propagate_converged(internal_driven_hamiltonian(model), gate_schedule(model.pulses),
                                   CMatrix::Identity(9, 9), opts, 1e-14, 1),
               ConvergenceError);
}

TEST(Propagator, BlockExponentialMatchesDense) {
  std::mt19937_64 rng(11);
  CMatrix h = CMatrix::Zero(7, 7);
  h.block(0, 0, 3, 3) = random_hermitian(rng, 3);
  h.block(4, 4, 2, 2) = random_hermitian(rng, 2);
  h(3, 3) = 0.4;
  h(6, 6) = -1.1;
  const BlockExponential be(h);
  EXPECT_EQ(be.block_count(), 4u);
  EXPECT_EQ(be.largest_block(), 3u);
  const CMatrix ref = (Complex(0.0, -0.37) * h).exp();
  EXPECT_LT((be.exponential(0.37).dense() - ref).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((expm_hermitian(h, 0.37) - ref).cwiseAbs().maxCoeff(), 1e-13);
}
