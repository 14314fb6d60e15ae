#pragma once

#include "molgate/basis.hpp"
#include "molgate/linalg.hpp"
#include "molgate/pulse.hpp"

namespace molgate {

// Internal-state gate model without motion. `ddi` is the spin-exchange
// strength J in absolute units (hbar = 1, 1/T); use from_ratio to give J in
// units of hbar * Omega.
struct GateModel {
  PulseSequence pulses;
  double ddi = 0.0;
  double target_phase = 0.0;

  static GateModel from_ratio(const PulseSequence& pulses, double ddi_ratio,
                              double target_phase) {
    return {pulses, ddi_ratio * pulses.peak_rabi(), target_phase};
  }
};

// sum over molecules of |e><down|, i.e. the lowering part of the microwave
// coupling before multiplying by Omega_mu(t)/2.
const CMatrix& drive_coupling();

// |up,e><e,up| + |e,up><up,e| (unit strength).
const CMatrix& ddi_coupling();

// H(t) = (Omega_mu(t)/2) drive_coupling + h.c. + J ddi_coupling.
CMatrix hamiltonian_at(const GateModel& model, double t);

// Instantaneous phase gate: every basis state whose `target` molecule is in
// |down> is multiplied by e^{i phase}. |e> components are untouched.
CMatrix single_qubit_phase_gate(Molecule target, double phase);

// Same gate addressed by 0 (molecule i) or 1 (molecule ii).
CMatrix single_qubit_phase_gate(int molecule_index, double phase);

}  // namespace molgate
