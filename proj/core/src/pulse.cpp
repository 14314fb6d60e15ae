#include "molgate/pulse.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "molgate/errors.hpp"

namespace molgate {
namespace {

constexpr double kPi = std::numbers::pi;

void check_shape(double width, double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("pulse duration must be positive");
  }
  if (!(width > 0.0) || !(width < duration)) {
    throw std::invalid_argument("pulse width must satisfy 0 < t_w < T, got " +
                                std::to_string(width));
  }
}

double unit_envelope(double t, double width, double duration, double offset) {
  const double x = t - 0.5 * duration;
  return std::exp(-x * x / (2.0 * width * width)) - offset;
}

double offset_for(double width, double duration) {
  return std::exp(-duration * duration / (8.0 * width * width));
}

}  // namespace

PulseSequence::PulseSequence(double peak_rabi, double width, double duration,
                             double relative_phase)
    : peak_rabi_(peak_rabi),
      width_(width),
      duration_(duration),
      relative_phase_(relative_phase),
      offset_(0.0) {
  check_shape(width, duration);
  if (!std::isfinite(peak_rabi)) {
    throw std::invalid_argument("peak Rabi frequency must be finite");
  }
  offset_ = offset_for(width, duration);
}

PulseSequence PulseSequence::calibrated(double width, double duration,
                                        double relative_phase) {
  return {calibrate_pulse_area(width, duration), width, duration,
          relative_phase};
}

double PulseSequence::single_pulse(double t) const {
  if (t < 0.0 || t > duration_) {
    throw std::domain_error("single_pulse: t outside [0, T]");
  }
  // Exact zeros at the endpoints, where the two exponentials cancel.
  if (t == 0.0 || t == duration_) return 0.0;
  return peak_rabi_ * unit_envelope(t, width_, duration_, offset_);
}

std::complex<double> PulseSequence::envelope(double t) const {
  if (!(t >= 0.0 && t <= 2.0 * duration_)) {
    throw std::domain_error("pulse envelope: t = " + std::to_string(t) +
                            " outside [0, 2T]");
  }
  if (t <= duration_) return single_pulse(t);
  return std::polar(1.0, relative_phase_) * single_pulse(t - duration_);
}

double pulse_area(double peak_rabi, double width, double duration) {
  check_shape(width, duration);
  const double offset = offset_for(width, duration);
  auto f = [&](double t) {
    return unit_envelope(t, width, duration, offset);
  };
  using boost::math::quadrature::gauss_kronrod;
  // Split at the peak so the narrow-width limit is resolved from an endpoint.
  const double half = 0.5 * duration;
  const double left = gauss_kronrod<double, 61>::integrate(f, 0.0, half, 30, 1e-14);
  const double right =
      gauss_kronrod<double, 61>::integrate(f, half, duration, 30, 1e-14);
  return peak_rabi * (left + right);
}

double calibrate_pulse_area(double width, double duration, double target_area,
                            double area_tolerance) {
  check_shape(width, duration);
  // The area is linear in the peak, so the root is one quadrature away;
  // the residual check below guards against a failed quadrature.
  const double unit_area = pulse_area(1.0, width, duration);
  if (!(unit_area > 0.0) || !std::isfinite(target_area / unit_area)) {
    throw CalibrationError("pulse calibration failed: unit area " +
                           std::to_string(unit_area) + " for t_w = " +
                           std::to_string(width));
  }
  double peak = target_area / unit_area;
  for (int iter = 0; iter < 4; ++iter) {
    const double residual = pulse_area(peak, width, duration) - target_area;
    if (std::abs(residual) < area_tolerance) return peak;
    peak -= residual / unit_area;
  }
  throw CalibrationError("pulse calibration did not reach area tolerance for t_w = " +
                         std::to_string(width));
}

double wrap_angle(double x) {
  double r = std::fmod(x, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  if (r >= 2.0 * kPi) r = 0.0;
  return r;
}

double relative_phase_for(double controlled_phase) {
  return wrap_angle(-0.5 * (kPi + controlled_phase));
}

double controlled_phase_for(double relative_phase) {
  return wrap_angle(kPi - 2.0 * relative_phase);
}

}  // namespace molgate
