#include "molgate/motion.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>


namespace molgate {
namespace {

void check_n_max(int n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
}

}  // namespace

CMatrix annihilation_operator(int n_max) {
  check_n_max(n_max);
  CMatrix a = CMatrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

CMatrix number_operator(int n_max) {
  check_n_max(n_max);
  CMatrix n = CMatrix::Zero(n_max + 1, n_max + 1);
  for (int k = 0; k <= n_max; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

CMatrix quadrature_operator(int n_max) {
  const CMatrix a = annihilation_operator(n_max);
  return a + a.adjoint();
}

CMatrix ddi_operator(const MotionalSpace& space) {
  if (space.n_max < 4) {
    throw std::invalid_argument("ddi_operator: n_max must be >= 4 for the quartic term");
  }
  const CMatrix x = quadrature_operator(space.n_max);
  const CMatrix x2 = x * x;
  const CMatrix x4 = x2 * x2;
  const double r2 = space.ratio * space.ratio;
  const Index d = space.dimension();
  return space.j0 *
         (3.0 * r2 * x2 - (45.0 / 8.0) * r2 * r2 * x4 - CMatrix::Identity(d, d));
}

double thermal_kept_mass(double mean_occupation, int n_max) {
  if (mean_occupation < 0.0) {
    throw std::invalid_argument("thermal state: mean occupation must be >= 0");
  }
  if (mean_occupation == 0.0) return 1.0;
  const double q = mean_occupation / (mean_occupation + 1.0);
  return 1.0 - std::pow(q, n_max + 1);
}

std::vector<double> thermal_weights(double mean_occupation, int n_max) {
  check_n_max(n_max);
  if (!(mean_occupation >= 0.0) || !std::isfinite(mean_occupation)) {
    throw std::invalid_argument("thermal_weights: mean occupation must be >= 0");
  }
  std::vector<double> w(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (mean_occupation == 0.0) {
    w[0] = 1.0;
    return w;
  }
  const double q = mean_occupation / (mean_occupation + 1.0);
  double p = 1.0 / (mean_occupation + 1.0);
  for (auto& x : w) {
    x = p;
    p *= q;
  }
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= sum;
  return w;
}

MotionalState MotionalState::pure(CVector amplitudes, std::string name) {
  if (amplitudes.size() == 0) {
    throw std::invalid_argument("motional state: empty amplitude vector");
  }
  if (std::abs(amplitudes.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("motional state '" + name + "' is not normalised");
  }
  return MotionalState(Pure{std::move(amplitudes)}, std::move(name));
}

MotionalState MotionalState::vacuum(int n_max) { return fock(0, n_max); }

MotionalState MotionalState::fock(int n, int n_max) {
  check_n_max(n_max);
  if (n < 0 || n > n_max) {
    throw std::invalid_argument("Fock level outside the truncated space");
  }
  CVector v = CVector::Zero(n_max + 1);
  v(n) = 1.0;
  std::string name = n == 0 ? "vac" : n == 1 ? "one" : "fock" + std::to_string(n);
  return pure(std::move(v), std::move(name));
}

MotionalState MotionalState::plus(int n_max) {
  if (n_max < 1) throw std::invalid_argument("plus state needs n_max >= 1");
  CVector v = CVector::Zero(n_max + 1);
  v(0) = v(1) = 1.0 / std::sqrt(2.0);
  return pure(std::move(v), "plus");
}

MotionalState MotionalState::thermal(double mean_occupation, int n_max) {
  auto weights = thermal_weights(mean_occupation, n_max);
  const double kept = thermal_kept_mass(mean_occupation, n_max);
  if (kept < 1.0 - 1e-6) {
    throw std::invalid_argument(
        "thermal state: truncation keeps only " + std::to_string(kept) +
        " of the Bose-Einstein mass; raise n_max");
  }
  std::ostringstream name;
  name << "thermal(" << mean_occupation << ")";
  return MotionalState(Thermal{mean_occupation, std::move(weights)}, name.str());
}

MotionalState MotionalState::parse(const std::string& spec, int n_max) {
  if (spec == "vac") return vacuum(n_max);
  if (spec == "one") return fock(1, n_max);
  if (spec == "plus") return plus(n_max);
  const std::string prefix = "thermal(";
  if (spec.rfind(prefix, 0) == 0 && spec.size() > prefix.size() + 1 &&
      spec.back() == ')') {
    const std::string body = spec.substr(prefix.size(), spec.size() - prefix.size() - 1);
    std::size_t used = 0;
    double nbar = 0.0;
    try {
      nbar = std::stod(body, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != body.size()) {
      throw std::invalid_argument("motional_state: bad thermal occupation '" + body + "'");
    }
    return thermal(nbar, n_max);
  }
  throw std::invalid_argument("motional_state must be vac, one, plus or thermal(<nbar>), got '" +
                              spec + "'");
}

Index MotionalState::dimension() const {
  if (is_thermal()) return static_cast<Index>(as_thermal().weights.size());
  return as_pure().amplitudes.size();
}

namespace {

CMatrix composite_static_part(const MotionalSpace& space, bool include_trap) {
  const CMatrix identity_internal =
      CMatrix::Identity(InternalBasis::kDimension, InternalBasis::kDimension);
  CMatrix h = kron(ddi_coupling(), ddi_operator(space));
  if (include_trap) {
    h += kron(identity_internal, space.omega * number_operator(space.n_max));
  }
  return h;
}

}  // namespace

CMatrix composite_hamiltonian(const GateModel& model, const MotionalSpace& space,
                              double t, bool include_trap) {
  return composite_driven_hamiltonian(model, space, include_trap)(t);
}

DrivenHamiltonian composite_driven_hamiltonian(const GateModel& model,
                                               const MotionalSpace& space,
                                               bool include_trap) {
  const PulseSequence pulses = model.pulses;
  return DrivenHamiltonian(composite_static_part(space, include_trap),
                           drive_coupling(),
                           [pulses](double t) { return pulses.envelope(t); },
                           space.dimension());
}

}  // namespace molgate
