#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "molgate/fidelity.hpp"
#include "molgate/pulse.hpp"

using namespace molgate;

namespace {

constexpr double kPi = std::numbers::pi;

CMatrix embed(const Eigen::Matrix4cd& block) {
  CMatrix u = CMatrix::Identity(9, 9);
  u.topLeftCorner(4, 4) = block;
  return u;
}

Eigen::Matrix4cd diag_phases(double a, double b, double c, double d) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = std::polar(1.0, a);
  m(1, 1) = std::polar(1.0, b);
  m(2, 2) = std::polar(1.0, c);
  m(3, 3) = std::polar(1.0, d);
  return m;
}

}  // namespace

TEST(Fidelity, PerfectAndIdentityGates) {
  const auto cz = controlled_phase_target(kPi);
  EXPECT_NEAR(gate_fidelity(embed(cz), cz).fidelity, 1.0, 1e-15);
  // Identity against CZ: M = diag(1, 1, 1, -1), (4 + 4) / 20.
  EXPECT_NEAR(gate_fidelity(CMatrix::Identity(9, 9), cz).fidelity, 0.4, 1e-15);
  const auto r = gate_fidelity(embed(cz), cz);
  EXPECT_NEAR(r.infidelity, 0.0, 1e-15);
}

TEST(Fidelity, LeakageIsPenalised) {
  // |down,down> fully leaks out: M = diag(1, 1, 1, 0); F = (3 + 9) / 20.
  CMatrix u = CMatrix::Identity(9, 9);
  u(3, 3) = 0.0;
  u(8, 3) = 1.0;
  u(3, 8) = 1.0;
  u(8, 8) = 0.0;
  EXPECT_NEAR(gate_fidelity(u, controlled_phase_target(0.0)).fidelity, 0.6, 1e-15);
}

TEST(Fidelity, ShapesAndGlobalPhase) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  CMatrix u(9, 9);
  for (Index i = 0; i < 9; ++i) {
    for (Index j = 0; j < 9; ++j) u(i, j) = Complex(g(rng), g(rng));
  }
  const auto target = controlled_phase_target(1.0);
  const double f = gate_fidelity(u, target).fidelity;
  EXPECT_NEAR(gate_fidelity(u.leftCols(4), target).fidelity, f, 1e-15);
  EXPECT_NEAR(gate_fidelity(std::polar(1.0, 2.1) * u, target).fidelity, f, 1e-12);
  EXPECT_THROW(computational_block(CMatrix::Identity(3, 3)), std::invalid_argument);
  EXPECT_THROW(computational_block(CMatrix::Identity(9, 5)), std::invalid_argument);
}

TEST(Fidelity, PhaseFitBeatsBruteForceScan) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 5; ++trial) {
    CMatrix h(9, 9);
    for (Index i = 0; i < 9; ++i) {
      for (Index j = 0; j < 9; ++j) h(i, j) = Complex(g(rng), g(rng));
    }
    const CMatrix u = expm_hermitian(0.5 * (h + h.adjoint()), 0.3);
    const auto fit = fit_controlled_phase(u);
    double best_phi = 0.0, best_f = -1.0;
    constexpr int kScan = 200000;
    for (int k = 0; k < kScan; ++k) {
      const double phi = 2.0 * kPi * k / kScan;
      const double f = gate_fidelity(u, controlled_phase_target(phi)).fidelity;
      if (f > best_f) {
        best_f = f;
        best_phi = phi;
      }
    }
    EXPECT_GE(fit.fidelity, best_f - 1e-15);
    EXPECT_LT(std::abs(std::remainder(fit.phase - best_phi, 2.0 * kPi)), 2.0 * kPi / kScan);
  }
  const auto exact = fit_controlled_phase(embed(controlled_phase_target(5.9)));
  EXPECT_NEAR(exact.phase, 5.9, 1e-12);
  EXPECT_NEAR(exact.fidelity, 1.0, 1e-15);
}

TEST(Fidelity, LocalZFitAbsorbsSingleQubitPhases) {
  const double a = 0.7, b = -1.3, phi = 2.2;
  const auto block = diag_phases(0.0, b, a, a + b + phi);
  const auto fit = fit_controlled_phase_with_local_z(embed(block));
  EXPECT_NEAR(fit.fidelity, 1.0, 1e-12);
  EXPECT_NEAR(fit.controlled_phase, phi, 1e-9);
  EXPECT_NEAR(wrap_angle(fit.first_local_phase), wrap_angle(a), 1e-9);
  EXPECT_NEAR(wrap_angle(fit.second_local_phase), wrap_angle(b), 1e-9);
}

TEST(Fidelity, MotionalConstructions) {
  const int n_max = 6;
  const Index m = n_max + 1;
  // CZ (x) exp(-i w N): factorised, so trace-out gives 1 and projection
  // gives |<chi|exp(-i w N)|chi>|^2.
  const double w = 0.8;
  CMatrix phase = CMatrix::Zero(m, m);
  for (Index n = 0; n < m; ++n) phase(n, n) = std::polar(1.0, -w * n);
  const auto cz = controlled_phase_target(kPi);
  const CMatrix u = kron(embed(cz), phase);
  const auto plus = MotionalState::plus(n_max);
  EXPECT_NEAR(gate_fidelity_with_motion(u, cz, plus, MotionalFidelity::TraceOut).fidelity, 1.0,
              1e-14);
  const Complex c = 0.5 * (1.0 + std::polar(1.0, -w));
  EXPECT_NEAR(gate_fidelity_with_motion(u, cz, plus, MotionalFidelity::Projection).fidelity,
              std::norm(c), 1e-14);

  // A thermal input is the weighted mean of Fock inputs.
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  CMatrix h(9 * m, 9 * m);
  for (Index i = 0; i < h.rows(); ++i) {
    for (Index j = 0; j < h.cols(); ++j) h(i, j) = 0.05 * Complex(g(rng), g(rng));
  }
  const CMatrix v = expm_hermitian(0.5 * (h + h.adjoint()), 1.0);
  const auto th = MotionalState::thermal(0.05, n_max);
  double manual = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    manual += th.as_thermal().weights[n] *
              gate_fidelity_with_motion(v, cz, MotionalState::fock(n, n_max)).fidelity;
  }
  EXPECT_NEAR(gate_fidelity_with_motion(v, cz, th).fidelity, manual, 1e-14);
  EXPECT_THROW(gate_fidelity_with_motion(CMatrix::Identity(9, 9), cz, plus),
               std::invalid_argument);
  EXPECT_EQ(parse_motional_fidelity("projection"), MotionalFidelity::Projection);
  EXPECT_STREQ(to_string(MotionalFidelity::TraceOut), "trace_out");
  EXPECT_THROW(parse_motional_fidelity("partial"), std::invalid_argument);
}

TEST(Fidelity, AverageOverParameter) {
  auto runner = [](double x) {
    FidelityReport r;
    r.fidelity = 1.0 - x * x;
    r.infidelity = x * x;
    r.with("J", x).with("tier", "internal");
    return r;
  };
  const auto avg = average_over_parameter(runner, {0.1, 0.2, 0.3}, "J", 2);
  EXPECT_NEAR(avg.mean.fidelity, 1.0 - (0.01 + 0.04 + 0.09) / 3.0, 1e-15);
  EXPECT_EQ(avg.samples.size(), 3u);
  bool has_min = false, has_plain = false;
  for (const auto& [k, v] : avg.mean.parameters) {
    has_min |= k == "J_min";
    has_plain |= k == "J";
  }
  EXPECT_TRUE(has_min);
  EXPECT_FALSE(has_plain);

  auto failing = [](double x) -> FidelityReport {
    if (x > 0.15) throw std::runtime_error("boom");
    return {};
  };
  try {
    average_over_parameter(failing, {0.1, 0.2}, "J");
    FAIL() << "expected a throw";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("J = 0.2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(average_over_parameter(runner, {}, "J"), std::invalid_argument);
}

TEST(Fidelity, ReportSerialisation) {
  FidelityReport r;
  r.fidelity = 0.75;
  r.infidelity = 0.25;
  r.target_phase = kPi;
  r.with("J", 4.0);
  const auto cols = r.csv_columns();
  ASSERT_EQ(cols.size(), 4u);
  EXPECT_EQ(cols.front(), "J");
  EXPECT_EQ(cols.back(), "infidelity");
  EXPECT_EQ(r.csv_values()[2], "0.75");
  EXPECT_EQ(r.to_json()["parameters"]["J"], "4");
}
