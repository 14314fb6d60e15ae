#include "molgate/model.hpp"

#include <stdexcept>
#include <string>

namespace molgate {
namespace {

CMatrix build_drive_coupling() {
  constexpr auto n = InternalBasis::kDimension;
  CMatrix a = CMatrix::Zero(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    const PairState s = InternalBasis::state(col);
    if (s.first == Level::Down) {
      const auto row = InternalBasis::index({Level::Excited, s.second});
      a(static_cast<Index>(row), static_cast<Index>(col)) += 1.0;
    }
    if (s.second == Level::Down) {
      const auto row = InternalBasis::index({s.first, Level::Excited});
      a(static_cast<Index>(row), static_cast<Index>(col)) += 1.0;
    }
  }
  return a;
}

CMatrix build_ddi_coupling() {
  constexpr auto n = InternalBasis::kDimension;
  CMatrix v = CMatrix::Zero(n, n);
  v(kUpExcited, kExcitedUp) = 1.0;
  v(kExcitedUp, kUpExcited) = 1.0;
  return v;
}

}  // namespace

const CMatrix& drive_coupling() {
  static const CMatrix a = build_drive_coupling();
  return a;
}

const CMatrix& ddi_coupling() {
  static const CMatrix v = build_ddi_coupling();
  return v;
}

CMatrix hamiltonian_at(const GateModel& model, double t) {
  const Complex rabi = model.pulses.envelope(t);
  const CMatrix drive = 0.5 * rabi * drive_coupling();
  return drive + drive.adjoint() + model.ddi * ddi_coupling();
}

CMatrix single_qubit_phase_gate(Molecule target, double phase) {
  constexpr auto n = InternalBasis::kDimension;
  const Complex factor = std::polar(1.0, phase);
  CVector diag = CVector::Ones(n);
  for (std::size_t i = 0; i < n; ++i) {
    const PairState s = InternalBasis::state(i);
    const Level level = target == Molecule::First ? s.first : s.second;
    if (level == Level::Down) diag(static_cast<Index>(i)) = factor;
  }
  return diag.asDiagonal();
}

CMatrix single_qubit_phase_gate(int molecule_index, double phase) {
  switch (molecule_index) {
    case 0:
      return single_qubit_phase_gate(Molecule::First, phase);
    case 1:
      return single_qubit_phase_gate(Molecule::Second, phase);
    default:
      throw std::invalid_argument("invalid molecule index " +
                                  std::to_string(molecule_index) +
                                  " (expected 0 or 1)");
  }
}

}  // namespace molgate
