#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "molgate/basis.hpp"
#include "molgate/linalg.hpp"
#include "molgate/model.hpp"
#include "molgate/propagator.hpp"

namespace molgate {

// |D_+-> = (|up,e> +- |e,up>)/sqrt2 and |B_+-> = (|up,down> +- |down,up>)/sqrt2
// as vectors in the canonical 9-level basis. Sector index alpha is +1 or -1.
struct BellBasis {
  CVector d_plus, d_minus, b_plus, b_minus;

  const CVector& d(int alpha) const;
  const CVector& b(int alpha) const;
};

const BellBasis& bell_basis();

// Two-level sector Hamiltonians in the ordered basis (|D_alpha>, |B_alpha>):
//   [[alpha J, Omega_mu/2], [Omega_mu^*/2, 0]].
struct SectorHamiltonians {
  Eigen::Matrix2cd plus;
  Eigen::Matrix2cd minus;

  const Eigen::Matrix2cd& sector(int alpha) const { return alpha > 0 ? plus : minus; }
};

SectorHamiltonians sector_hamiltonians(double ddi, Complex rabi);

struct DressedLevel {
  double energy = 0.0;          // xi_eta^(alpha)
  double normalization = 0.0;   // N_eta^(alpha); 0 in the zero-drive B limit
  Eigen::Vector2cd vector;      // components on (|D_alpha>, |B_alpha>)
};

// Closed-form eigensystem of both sectors:
//   xi_eta^(alpha) = (alpha J + eta Omega_bar)/2,  Omega_bar = sqrt(J^2 + |Omega_mu|^2)
//   |v> = N [xi |D_alpha> + (Omega_mu^*/2) |B_alpha>].
// At Omega_mu = 0 the branch with xi = 0 is the limit |B_alpha>.
struct DressedEigensystem {
  double generalized_rabi = 0.0;
  std::array<DressedLevel, 4> levels;  // (+,+), (+,-), (-,+), (-,-)

  const DressedLevel& level(int alpha, int eta) const;
  CVector embedded(int alpha, int eta) const;  // 9-level vector
};

// Throws BranchLabelError when J = Omega_mu = 0.
DressedEigensystem dressed_eigensystem(double ddi, Complex rabi);

// Branch eta of the + sector that starts on |B_+> at zero drive: -sign(J).
// Throws BranchLabelError for J = 0.
int adiabatic_branch(double ddi);

struct BranchTrack {
  std::vector<double> times;
  std::vector<int> branch;  // eta followed by maximal eigenvector overlap
  bool continuous = true;
};

// Follow the |B_+>-connected dressed state along pulse 1 on `samples + 1`
// equally spaced times.
BranchTrack track_adiabatic_branch(const GateModel& model, int samples = 400);

// Dynamical phase of the |B_+>-connected dressed branch over pulse 1,
// phi = int_0^T xi(t) dt. |B_+-> acquire e^{-+ i phi} in the adiabatic limit.
double adiabatic_phase(const GateModel& model);

// Time spent in |up,e> and |e,up> during the whole gate for a computational
// input state: t_d = sum_eta int_0^{2T} |<eta|U(tau)|input>|^2 dtau.
double ddi_superposition_time(const GateModel& model, PairState initial,
                              const PropagationOptions& options);

// t_d for all four computational inputs from a single propagation.
std::array<double, 4> ddi_superposition_times(const GateModel& model,
                                              const PropagationOptions& options);

}  // namespace molgate
