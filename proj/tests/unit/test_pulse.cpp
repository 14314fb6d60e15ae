#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "molgate/errors.hpp"
#include "molgate/pulse.hpp"

using namespace molgate;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed form of the offset-Gaussian area on [0, T].
double area_closed_form(double peak, double tw, double T) {
  return peak * (tw * std::sqrt(2.0 * kPi) * std::erf(T / (2.0 * std::sqrt(2.0) * tw)) -
                 T * std::exp(-T * T / (8.0 * tw * tw)));
}

}  // namespace

TEST(Pulse, AreaMatchesErfClosedForm) {
  for (double tw : {0.05, 0.1, 0.234, 0.4, 0.9}) {
    EXPECT_NEAR(pulse_area(1.7, tw, 1.0), area_closed_form(1.7, tw, 1.0), 1e-13) << tw;
  }
  EXPECT_NEAR(pulse_area(2.0, 0.5, 3.0), area_closed_form(2.0, 0.5, 3.0), 1e-13);
}

TEST(Pulse, CalibrationGivesPiArea) {
  const double peak = calibrate_pulse_area(0.234, 1.0);
  EXPECT_NEAR(pulse_area(peak, 0.234, 1.0), kPi, 1e-10);
  EXPECT_NEAR(peak, kPi / area_closed_form(1.0, 0.234, 1.0), 1e-9);
  // Reference value for the default width.
  EXPECT_NEAR(peak, 6.749926733, 1e-8);
}

TEST(Pulse, CalibrationRejectsVanishingWidth) {
  EXPECT_THROW(calibrate_pulse_area(1e-300, 1.0), CalibrationError);
  EXPECT_THROW(calibrate_pulse_area(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(calibrate_pulse_area(1.5, 1.0), std::invalid_argument);
}

TEST(Pulse, EnvelopeShape) {
  const auto p = PulseSequence::calibrated(0.234, 1.0, 0.7);
  EXPECT_EQ(p.envelope(0.0), std::complex<double>(0.0));
  EXPECT_EQ(p.envelope(1.0), std::complex<double>(0.0));
  EXPECT_EQ(p.envelope(2.0), std::complex<double>(0.0));
  EXPECT_NEAR(p.envelope(0.5).real(),
              p.peak_rabi() * (1.0 - std::exp(-1.0 / (8.0 * 0.234 * 0.234))), 1e-14);
  // Second pulse is the first one rotated by theta.
  const auto second = p.envelope(1.3);
  EXPECT_NEAR(std::abs(second), p.single_pulse(0.3), 1e-14);
  EXPECT_NEAR(std::arg(second), 0.7, 1e-14);
  EXPECT_NEAR(p.envelope(0.2).real(), p.envelope(0.8).real(), 1e-14);
  EXPECT_THROW(p.envelope(-1e-9), std::domain_error);
  EXPECT_THROW(p.envelope(2.0 + 1e-9), std::domain_error);
}

TEST(Pulse, PhaseRelationRoundTrips) {
  EXPECT_NEAR(relative_phase_for(kPi), kPi, 1e-15);
  for (double phi = 0.0; phi < 2.0 * kPi; phi += 0.37) {
    EXPECT_NEAR(controlled_phase_for(relative_phase_for(phi)), phi, 1e-12);
    // theta and theta + pi give the same controlled phase.
    const double theta = relative_phase_for(phi);
    EXPECT_NEAR(controlled_phase_for(theta + kPi), phi, 1e-12);
  }
  EXPECT_DOUBLE_EQ(wrap_angle(-0.5), 2.0 * kPi - 0.5);
  EXPECT_DOUBLE_EQ(wrap_angle(2.0 * kPi), 0.0);
}
