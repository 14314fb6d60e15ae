#pragma once

#include <string>
#include <variant>
#include <vector>

#include "molgate/linalg.hpp"
#include "molgate/model.hpp"
#include "molgate/propagator.hpp"

namespace molgate {

// Truncated Fock space of the relative motional mode a_-. The
// centre-of-mass mode never couples to the internal states and is not
// represented. `omega` and `j0` are in absolute units (1/T).
struct MotionalSpace {
  int n_max = 40;
  double omega = 0.0;
  double ratio = 0.0;  // harmonic length over trap separation, l/L
  double j0 = 0.0;

  Index dimension() const { return n_max + 1; }
};

CMatrix annihilation_operator(int n_max);
CMatrix number_operator(int n_max);
// a + a^dagger
CMatrix quadrature_operator(int n_max);

// Operator-valued DDI strength on the Fock space:
//   J = J0 [3 r^2 (a + a^dag)^2 - (45/8) r^4 (a + a^dag)^4 - 1],  r = l/L,
// with the powers taken of the truncated quadrature matrix (the top few
// levels of the quartic term are inexact; convergence in n_max covers it).
CMatrix ddi_operator(const MotionalSpace& space);

// Bose-Einstein weights nbar^n / (nbar + 1)^(n+1), n = 0..n_max,
// renormalised to unit sum.
std::vector<double> thermal_weights(double mean_occupation, int n_max);

// Kept mass of the untruncated Bose-Einstein distribution.
double thermal_kept_mass(double mean_occupation, int n_max);

// Initial state of the a_- mode: a pure Fock-space vector or a thermal
// ensemble that is treated as a weighted mixture of Fock inputs.
class MotionalState {
 public:
  struct Pure {
    CVector amplitudes;
  };
  struct Thermal {
    double mean_occupation;
    std::vector<double> weights;
  };

  static MotionalState vacuum(int n_max);
  static MotionalState fock(int n, int n_max);
  // (|0> + |1>)/sqrt(2)
  static MotionalState plus(int n_max);
  static MotionalState thermal(double mean_occupation, int n_max);
  static MotionalState pure(CVector amplitudes, std::string name);
  // "vac", "one", "plus" or "thermal(<nbar>)"
  static MotionalState parse(const std::string& spec, int n_max);

  bool is_thermal() const { return std::holds_alternative<Thermal>(data_); }
  const Pure& as_pure() const { return std::get<Pure>(data_); }
  const Thermal& as_thermal() const { return std::get<Thermal>(data_); }
  const std::string& name() const { return name_; }
  Index dimension() const;

 private:
  MotionalState(std::variant<Pure, Thermal> data, std::string name)
      : data_(std::move(data)), name_(std::move(name)) {}
  std::variant<Pure, Thermal> data_;
  std::string name_;
};

// Dense H(t) on the (9 * (n_max + 1))-dimensional composite space:
//   H_drive(t) (x) I + (|up,e><e,up| + h.c.) (x) J_op + I (x) omega a^dag a.
// The scalar J of `model` is not used. The zero-point energy is dropped.
CMatrix composite_hamiltonian(const GateModel& model, const MotionalSpace& space,
                              double t, bool include_trap = true);

// Same Hamiltonian in the split form consumed by the propagator.
DrivenHamiltonian composite_driven_hamiltonian(const GateModel& model,
                                               const MotionalSpace& space,
                                               bool include_trap = true);

}  // namespace molgate
