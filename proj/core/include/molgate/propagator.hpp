#pragma once

#include <functional>
#include <string>
#include <vector>

#include "molgate/linalg.hpp"

namespace molgate {

// A Hermitian generator of the form
//
//   H(t) = H_static + [ (f(t)/2) L + (f(t)^*/2) L^dagger ] (x) I_motional
//
// on a space ordered internal-major (index = internal * motional_dim + n).
// L is the drive lowering coupling on the internal factor and f(t) the
// complex drive envelope. With motional_dim = 1 this is any driven
// few-level Hamiltonian.
class DrivenHamiltonian {
 public:
  using Envelope = std::function<Complex(double)>;

  DrivenHamiltonian(CMatrix static_part, CMatrix drive_coupling,
                    Envelope envelope, Index motional_dimension = 1);

  Index dimension() const { return static_part_.rows(); }
  Index internal_dimension() const { return drive_coupling_.rows(); }
  Index motional_dimension() const { return motional_dimension_; }
  const CMatrix& static_part() const { return static_part_; }
  const CMatrix& drive_coupling() const { return drive_coupling_; }
  Complex envelope(double t) const { return envelope_(t); }

  // Drive term on the internal factor only.
  CMatrix internal_drive(double t) const;

  // Dense H(t) on the full space.
  CMatrix operator()(double t) const;

 private:
  CMatrix static_part_;
  CMatrix drive_coupling_;
  Envelope envelope_;
  Index motional_dimension_;
};

// Instantaneous unitary on the internal factor, applied at `time`.
struct Kick {
  double time;
  CMatrix internal_unitary;
};

struct Schedule {
  double start = 0.0;
  double stop = 0.0;
  std::vector<Kick> kicks;
};

struct PropagationOptions {
  int steps_per_segment = 4000;
  double unitarity_tol = 1e-9;
  bool store_trajectory = false;
  // Full-space row indices whose summed population is integrated in time
  // for each column of the initial state.
  std::vector<Index> tracked_indices;
};

struct TrajectorySample {
  double time;
  CMatrix state;
};

struct ConvergenceStep {
  int steps;
  double state_difference;   // max |psi_N - psi_{N/2}| entrywise
  double metric_difference;  // |metric_N - metric_{N/2}|, 0 without a metric
};

struct ConvergenceReport {
  std::vector<ConvergenceStep> record;
  double tolerance = 0.0;
  bool monotone = true;
  bool passed = false;
  int accepted_steps = 0;

  std::string summary() const;
};

struct EvolutionResult {
  CMatrix final_state;  // U(stop, start) * initial
  std::vector<TrajectorySample> trajectory;
  Eigen::VectorXd tracked_time;
  double unitarity_residual = 0.0;
  int steps_per_segment = 0;
  std::vector<ConvergenceStep> convergence;
};

// Time-ordered evolution of `initial` (dimension x k) across the schedule.
// Segments between kicks are integrated with a fourth-order
// symmetric splitting of static and drive parts (Yoshida triple jump of
// Strang steps, drive sampled at the substep clock). Throws NumericalError
// if the columns' Gram matrix drifts by more than options.unitarity_tol.
EvolutionResult propagate(const DrivenHamiltonian& h, const Schedule& schedule,
                          const CMatrix& initial,
                          const PropagationOptions& options);

using Metric = std::function<double(const CMatrix& final_state)>;

// Reruns at half and double the configured step count and reports the
// differences. Passes iff the finest state and metric differences are both
// below `tolerance`.
ConvergenceReport convergence_certify(const DrivenHamiltonian& h,
                                      const Schedule& schedule,
                                      const CMatrix& initial,
                                      const PropagationOptions& options,
                                      double tolerance = 1e-8,
                                      const Metric& metric = {});

// Doubles the step count until successive runs agree to `tolerance`;
// throws ConvergenceError after `max_refinements` doublings.
EvolutionResult propagate_converged(const DrivenHamiltonian& h,
                                    const Schedule& schedule,
                                    const CMatrix& initial,
                                    const PropagationOptions& options,
                                    double tolerance = 1e-8,
                                    int max_refinements = 4,
                                    const Metric& metric = {});

}  // namespace molgate
