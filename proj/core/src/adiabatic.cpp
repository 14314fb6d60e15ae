#include "molgate/adiabatic.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "molgate/errors.hpp"
#include "molgate/gate_sequence.hpp"

namespace molgate {
namespace {

BellBasis make_bell_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  auto ket = [](std::size_t i) {
    CVector v = CVector::Zero(InternalBasis::kDimension);
    v(static_cast<Index>(i)) = 1.0;
    return v;
  };
  BellBasis b;
  b.d_plus = s * (ket(kUpExcited) + ket(kExcitedUp));
  b.d_minus = s * (ket(kUpExcited) - ket(kExcitedUp));
  b.b_plus = s * (ket(kUpDown) + ket(kDownUp));
  b.b_minus = s * (ket(kUpDown) - ket(kDownUp));
  return b;
}

std::size_t slot(int alpha, int eta) {
  return (alpha > 0 ? 0 : 2) + (eta > 0 ? 0 : 1);
}

double sign(double x) { return x > 0.0 ? 1.0 : x < 0.0 ? -1.0 : 0.0; }

// Roots of xi^2 - alpha J xi - |Omega|^2/4 = 0 as (eta=+, eta=-), with the
// small root taken from the root product to avoid cancellation.
std::pair<double, double> sector_energies(double aj, double rabi_sq,
                                          double generalized) {
  if (aj == 0.0) return {0.5 * generalized, -0.5 * generalized};
  const double big = 0.5 * (aj + sign(aj) * generalized);
  const double small = big != 0.0 ? -0.25 * rabi_sq / big : 0.0;
  return aj > 0.0 ? std::pair{big, small} : std::pair{small, big};
}

}  // namespace

const CVector& BellBasis::d(int alpha) const { return alpha > 0 ? d_plus : d_minus; }
const CVector& BellBasis::b(int alpha) const { return alpha > 0 ? b_plus : b_minus; }

const BellBasis& bell_basis() {
  static const BellBasis basis = make_bell_basis();
  return basis;
}

SectorHamiltonians sector_hamiltonians(double ddi, Complex rabi) {
  SectorHamiltonians h;
  for (int alpha : {+1, -1}) {
    Eigen::Matrix2cd m;
    m << alpha * ddi, 0.5 * rabi, 0.5 * std::conj(rabi), 0.0;
    (alpha > 0 ? h.plus : h.minus) = m;
  }
  return h;
}

const DressedLevel& DressedEigensystem::level(int alpha, int eta) const {
  return levels[slot(alpha, eta)];
}

CVector DressedEigensystem::embedded(int alpha, int eta) const {
  const auto& v = level(alpha, eta).vector;
  const auto& bell = bell_basis();
  return v(0) * bell.d(alpha) + v(1) * bell.b(alpha);
}

DressedEigensystem dressed_eigensystem(double ddi, Complex rabi) {
  const double rabi_sq = std::norm(rabi);
  if (ddi == 0.0 && rabi_sq == 0.0) {
    throw BranchLabelError("dressed_eigensystem: J = Omega_mu = 0 is fully degenerate");
  }
  DressedEigensystem out;
  out.generalized_rabi = std::sqrt(ddi * ddi + rabi_sq);
  for (int alpha : {+1, -1}) {
    const auto [xi_plus, xi_minus] =
        sector_energies(alpha * ddi, rabi_sq, out.generalized_rabi);
    for (int eta : {+1, -1}) {
      DressedLevel& level = out.levels[slot(alpha, eta)];
      level.energy = eta > 0 ? xi_plus : xi_minus;
      const Complex off = 0.5 * std::conj(rabi);
      const double norm_sq = level.energy * level.energy + 0.25 * rabi_sq;
      if (norm_sq == 0.0) {
        // Zero drive, B-like branch: the limit of the formula is |B_alpha>.
        level.normalization = 0.0;
        level.vector << 0.0, 1.0;
      } else {
        level.normalization = 1.0 / std::sqrt(norm_sq);
        level.vector << level.normalization * level.energy,
            level.normalization * off;
      }
    }
  }
  return out;
}

int adiabatic_branch(double ddi) {
  if (ddi == 0.0) {
    throw BranchLabelError("adiabatic branch undefined for J = 0");
  }
  return ddi > 0.0 ? -1 : +1;
}

BranchTrack track_adiabatic_branch(const GateModel& model, int samples) {
  if (samples < 1) throw std::invalid_argument("track_adiabatic_branch: samples < 1");
  BranchTrack track;
  const double duration = model.pulses.duration();
  int current = adiabatic_branch(model.ddi);
  Eigen::Vector2cd previous(0.0, 1.0);  // |B_+> in (D, B) components
  for (int k = 0; k <= samples; ++k) {
    const double t = duration * k / samples;
    const auto sys = dressed_eigensystem(model.ddi, model.pulses.envelope(t));
    const double keep = std::abs(sys.level(+1, current).vector.dot(previous));
    const double swap = std::abs(sys.level(+1, -current).vector.dot(previous));
    if (swap > keep) {
      current = -current;
      track.continuous = false;
    }
    previous = sys.level(+1, current).vector;
    track.times.push_back(t);
    track.branch.push_back(current);
  }
  return track;
}

double adiabatic_phase(const GateModel& model) {
  const int eta = adiabatic_branch(model.ddi);
  auto xi = [&](double t) {
    return dressed_eigensystem(model.ddi, model.pulses.envelope(t)).level(+1, eta).energy;
  };
  double error = 0.0;
  const double phase = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      xi, 0.0, model.pulses.duration(), 30, 1e-13, &error);
  if (!std::isfinite(phase) || error > 1e-10) {
    throw NumericalError("adiabatic_phase: quadrature did not reach 1e-10");
  }
  return phase;
}

std::array<double, 4> ddi_superposition_times(const GateModel& model,
                                              const PropagationOptions& options) {
  PropagationOptions opts = options;
  opts.tracked_indices = {static_cast<Index>(kUpExcited),
                          static_cast<Index>(kExcitedUp)};
  const auto h = internal_driven_hamiltonian(model);
  const auto run = propagate(h, gate_schedule(model.pulses),
                             computational_inputs(CVector::Ones(1)), opts);
  return {run.tracked_time(0), run.tracked_time(1), run.tracked_time(2),
          run.tracked_time(3)};
}

double ddi_superposition_time(const GateModel& model, PairState initial,
                              const PropagationOptions& options) {
  const std::size_t i = InternalBasis::index(initial);
  if (!InternalBasis::is_computational(i)) {
    throw std::invalid_argument("ddi_superposition_time: input must be a computational state");
  }
  return ddi_superposition_times(model, options)[i];
}

}  // namespace molgate
