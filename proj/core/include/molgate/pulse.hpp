#pragma once

#include <complex>
#include <numbers>

namespace molgate {

// Two identical Gaussian-minus-offset microwave pulses back to back. Units:
// hbar = 1 and the single-pulse duration T is the time unit by convention,
// although any positive duration is accepted.
//
//   pulse 1 (0 <= t <= T):  Omega [exp(-(t - T/2)^2 / (2 t_w^2)) - exp(-T^2 / (8 t_w^2))]
//   pulse 2 (T < t <= 2T):  e^{i theta} * pulse1(t - T)
class PulseSequence {
 public:
  PulseSequence(double peak_rabi, double width, double duration,
                double relative_phase);

  // Peak Rabi frequency chosen so that pulse 1 has area pi.
  static PulseSequence calibrated(double width, double duration,
                                  double relative_phase);

  double peak_rabi() const { return peak_rabi_; }
  double width() const { return width_; }
  double duration() const { return duration_; }
  double relative_phase() const { return relative_phase_; }
  double total_duration() const { return 2.0 * duration_; }

  // Omega_mu(t) on [0, 2T]; std::domain_error outside.
  std::complex<double> envelope(double t) const;

  // Real envelope of a single pulse on [0, T].
  double single_pulse(double t) const;

  PulseSequence with_relative_phase(double theta) const {
    return {peak_rabi_, width_, duration_, theta};
  }

 private:
  double peak_rabi_;
  double width_;
  double duration_;
  double relative_phase_;
  double offset_;
};

// Area of one pulse with the given peak, by adaptive Gauss-Kronrod quadrature.
double pulse_area(double peak_rabi, double width, double duration);

// Unique peak Rabi frequency giving pulse area `target_area` (default pi).
// Throws CalibrationError if the residual exceeds `area_tolerance` or the
// width is so small that the area underflows.
double calibrate_pulse_area(double width, double duration,
                            double target_area = std::numbers::pi,
                            double area_tolerance = 1e-10);

// Relative phase of pulse 2 that produces the controlled phase phi on
// |down,down>, theta = -(pi + phi)/2 wrapped to [0, 2 pi).
double relative_phase_for(double controlled_phase);

// Inverse map, phi = pi - 2 theta wrapped to [0, 2 pi). Two values of theta
// (theta and theta + pi) give the same phi.
double controlled_phase_for(double relative_phase);

// Wrap an angle to [0, 2 pi).
double wrap_angle(double x);

}  // namespace molgate
