#pragma once

#include "molgate/linalg.hpp"
#include "molgate/model.hpp"
#include "molgate/propagator.hpp"

namespace molgate {

// Pulse 1 on [0, T], pi phase gate on |down> of molecule ii at T, pulse 2 on
// [T, 2T], and the same phase gate again at 2T:
//   U = Z_ii U_pulse2 Z_ii U_pulse1.
Schedule gate_schedule(const PulseSequence& pulses);

// Pulse 1 only, no phase gates.
Schedule first_pulse_schedule(const PulseSequence& pulses);

// The 9-level Hamiltonian of `model` in split form.
DrivenHamiltonian internal_driven_hamiltonian(const GateModel& model);

// Columns |j> (x) chi for the four computational internal states j, on a
// space with motional dimension chi.size() (1 for the internal tier).
CMatrix computational_inputs(const CVector& chi);

// Full 9x9 gate propagator of the internal tier.
CMatrix gate_propagator(const GateModel& model, const PropagationOptions& options);

}  // namespace molgate
