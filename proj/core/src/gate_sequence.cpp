#include "molgate/gate_sequence.hpp"

#include <numbers>

namespace molgate {

Schedule gate_schedule(const PulseSequence& pulses) {
  const CMatrix z = single_qubit_phase_gate(Molecule::Second, std::numbers::pi);
  const double t = pulses.duration();
  return Schedule{0.0, 2.0 * t, {Kick{t, z}, Kick{2.0 * t, z}}};
}

Schedule first_pulse_schedule(const PulseSequence& pulses) {
  return Schedule{0.0, pulses.duration(), {}};
}

DrivenHamiltonian internal_driven_hamiltonian(const GateModel& model) {
  const PulseSequence pulses = model.pulses;
  return DrivenHamiltonian(model.ddi * ddi_coupling(), drive_coupling(),
                           [pulses](double t) { return pulses.envelope(t); });
}

CMatrix computational_inputs(const CVector& chi) {
  const Index m = chi.size();
  CMatrix inputs = CMatrix::Zero(InternalBasis::kDimension * m,
                                 InternalBasis::kComputationalDimension);
  for (Index j = 0; j < static_cast<Index>(InternalBasis::kComputationalDimension); ++j) {
    inputs.block(j * m, j, m, 1) = chi;
  }
  return inputs;
}

CMatrix gate_propagator(const GateModel& model, const PropagationOptions& options) {
  const auto h = internal_driven_hamiltonian(model);
  const auto n = static_cast<Index>(InternalBasis::kDimension);
  return propagate(h, gate_schedule(model.pulses), CMatrix::Identity(n, n), options)
      .final_state;
}

}  // namespace molgate
