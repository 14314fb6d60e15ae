#include <cmath>

#include <gtest/gtest.h>

#include "molgate/gate_sequence.hpp"
#include "molgate/motion.hpp"

using namespace molgate;

TEST(Motion, LadderOperators) {
  const CMatrix a = annihilation_operator(6);
  const CMatrix comm = a * a.adjoint() - a.adjoint() * a;
  for (Index n = 0; n < 6; ++n) EXPECT_NEAR(comm(n, n).real(), 1.0, 1e-14);
  EXPECT_TRUE((a.adjoint() * a).isApprox(number_operator(6)));
  EXPECT_THROW(annihilation_operator(-1), std::invalid_argument);
}

TEST(Motion, GaussianMomentsOfTheQuadrature) {
  const CMatrix x = quadrature_operator(10);
  const CMatrix x2 = x * x;
  const CMatrix x4 = x2 * x2;
  // Vacuum of a unit-width Gaussian: <X^2> = 1, <X^4> = 3.
  EXPECT_NEAR(x2(0, 0).real(), 1.0, 1e-14);
  EXPECT_NEAR(x4(0, 0).real(), 3.0, 1e-13);
  // <n|X^2|n> = 2n + 1.
  EXPECT_NEAR(x2(1, 1).real(), 3.0, 1e-14);
  EXPECT_NEAR(x2(4, 4).real(), 9.0, 1e-13);
}

TEST(Motion, DdiOperator) {
  MotionalSpace s{40, 1.0, 0.1, 2.0};
  const CMatrix j = ddi_operator(s);
  EXPECT_EQ(hermiticity_residual(j), 0.0);
  const double r2 = 0.01;
  EXPECT_NEAR(j(0, 0).real(), 2.0 * (3.0 * r2 - 45.0 / 8.0 * r2 * r2 * 3.0 - 1.0), 1e-14);
  for (Index m = 0; m < j.rows(); ++m) {
    for (Index n = 0; n < j.cols(); ++n) {
      if ((m + n) % 2) EXPECT_EQ(j(m, n), Complex(0.0));
    }
  }
  s.ratio = 0.0;
  EXPECT_EQ((ddi_operator(s) + 2.0 * CMatrix::Identity(41, 41)).cwiseAbs().maxCoeff(), 0.0);
  s.n_max = 3;
  EXPECT_THROW(ddi_operator(s), std::invalid_argument);
}

TEST(Motion, ThermalWeights) {
  const auto w = thermal_weights(2.0, 40);
  double sum = 0.0, mean = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) {
    sum += w[n];
    mean += n * w[n];
  }
  EXPECT_NEAR(sum, 1.0, 1e-15);
  EXPECT_NEAR(w[1] / w[0], 2.0 / 3.0, 1e-15);
  // Geometric tail beyond n_max = 40.
  EXPECT_NEAR(1.0 - thermal_kept_mass(2.0, 40), std::pow(2.0 / 3.0, 41), 1e-15);
  EXPECT_NEAR(mean, 2.0, 1e-5);
  EXPECT_EQ(thermal_weights(0.0, 5)[0], 1.0);
  EXPECT_THROW(thermal_weights(-1.0, 5), std::invalid_argument);
}

TEST(Motion, StateParsing) {
  const auto vac = MotionalState::parse("vac", 10);
  EXPECT_FALSE(vac.is_thermal());
  EXPECT_EQ(vac.as_pure().amplitudes(0), Complex(1.0));
  EXPECT_EQ(vac.dimension(), 11);
  const auto plus = MotionalState::parse("plus", 10);
  EXPECT_NEAR(std::abs(plus.as_pure().amplitudes(1)), std::sqrt(0.5), 1e-15);
  EXPECT_EQ(MotionalState::parse("one", 10).as_pure().amplitudes(1), Complex(1.0));
  const auto th = MotionalState::parse("thermal(2)", 40);
  ASSERT_TRUE(th.is_thermal());
  EXPECT_EQ(th.as_thermal().mean_occupation, 2.0);
  EXPECT_EQ(th.name(), "thermal(2)");
  EXPECT_THROW(MotionalState::parse("squeezed", 10), std::invalid_argument);
  EXPECT_THROW(MotionalState::parse("thermal(x)", 10), std::invalid_argument);
  // Too much weight beyond the cutoff.
  EXPECT_THROW(MotionalState::parse("thermal(2)", 5), std::invalid_argument);
  CVector bad = CVector::Ones(3);
  EXPECT_THROW(MotionalState::pure(bad, "bad"), std::invalid_argument);
}

TEST(Motion, CompositeHamiltonianSplitsConsistently) {
  const auto pulses = PulseSequence::calibrated(0.234, 1.0, 0.6);
  const GateModel model{pulses, 0.0, 3.14};
  const MotionalSpace space{8, pulses.peak_rabi(), 0.1, 4.0 * pulses.peak_rabi()};
  const auto split = composite_driven_hamiltonian(model, space);
  for (double t : {0.0, 0.4, 1.7}) {
    const CMatrix h = composite_hamiltonian(model, space, t);
    EXPECT_EQ(h.rows(), 9 * 9);
    EXPECT_EQ(hermiticity_residual(h), 0.0);
    EXPECT_NEAR((split(t) - h).cwiseAbs().maxCoeff(), 0.0, 1e-13);
    const CMatrix ref = kron(hamiltonian_at(model, t), CMatrix::Identity(9, 9)) +
                        kron(ddi_coupling(), ddi_operator(space)) +
                        kron(CMatrix::Identity(9, 9), space.omega * number_operator(8));
    EXPECT_NEAR((h - ref).cwiseAbs().maxCoeff(), 0.0, 1e-13);
  }
  const CMatrix no_trap = composite_hamiltonian(model, space, 0.3, false);
  EXPECT_NEAR((composite_hamiltonian(model, space, 0.3) - no_trap -
               kron(CMatrix::Identity(9, 9), space.omega * number_operator(8)))
                  .cwiseAbs()
                  .maxCoeff(),
              0.0, 1e-13);
}
