#include "molgate/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "molgate/errors.hpp"

namespace molgate {
namespace {

// Yoshida triple-jump weights for composing a symmetric second-order step
// into a fourth-order one.
const double kOuter = 1.0 / (2.0 - std::cbrt(2.0));
const double kInner = -std::cbrt(2.0) / (2.0 - std::cbrt(2.0));

// A unitary on the internal factor stored by sparsity blocks.
struct InternalBlocks {
  std::vector<std::vector<Index>> index;
  std::vector<CMatrix> unitary;
};

void apply_internal(const InternalBlocks& u, Index motional_dim, CMatrix& psi,
                    CMatrix& scratch) {
  const Index m = motional_dim;
  for (std::size_t b = 0; b < u.index.size(); ++b) {
    const auto& idx = u.index[b];
    const CMatrix& ub = u.unitary[b];
    const auto size = static_cast<Index>(idx.size());
    if (size == 1) {
      if (ub(0, 0) != Complex{1.0, 0.0}) psi.middleRows(idx[0] * m, m) *= ub(0, 0);
      continue;
    }
    scratch.resize(size * m, psi.cols());
    for (Index j = 0; j < size; ++j) {
      scratch.middleRows(j * m, m) = psi.middleRows(idx[j] * m, m);
    }
    for (Index i = 0; i < size; ++i) {
      auto row = psi.middleRows(idx[i] * m, m);
      row = ub(i, 0) * scratch.middleRows(0, m);
      for (Index j = 1; j < size; ++j) {
        if (ub(i, j) != Complex{}) row += ub(i, j) * scratch.middleRows(j * m, m);
      }
    }
  }
}

InternalBlocks blocks_of(const CMatrix& unitary) {
  InternalBlocks out;
  out.index = connected_blocks({&unitary});
  for (const auto& idx : out.index) out.unitary.push_back(unitary(idx, idx));
  return out;
}

class DriveStepper {
 public:
  explicit DriveStepper(const DrivenHamiltonian& h) : h_(h) {
    const CMatrix pattern = h.drive_coupling() + h.drive_coupling().adjoint();
    blocks_.index = connected_blocks({&pattern});
    blocks_.unitary.resize(blocks_.index.size());
  }

  // exp(-i h_drive(t) tau) on the internal factor.
  const InternalBlocks& exponential(double t, double tau) {
    const CMatrix drive = h_.internal_drive(t);
    for (std::size_t b = 0; b < blocks_.index.size(); ++b) {
      const auto& idx = blocks_.index[b];
      if (idx.size() == 1) {
        const double e = drive(idx[0], idx[0]).real();
        blocks_.unitary[b] = CMatrix::Constant(1, 1, std::exp(-kI * e * tau));
      } else {
        blocks_.unitary[b] = expm_hermitian(drive(idx, idx), tau);
      }
    }
    return blocks_;
  }

 private:
  const DrivenHamiltonian& h_;
  InternalBlocks blocks_;
};

void accumulate_population(const CMatrix& psi, const std::vector<Index>& rows,
                           double weight, Eigen::VectorXd& acc) {
  for (Index c = 0; c < psi.cols(); ++c) {
    double p = 0.0;
    for (Index r : rows) p += std::norm(psi(r, c));
    acc(c) += weight * p;
  }
}

double max_abs_difference(const CMatrix& a, const CMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

DrivenHamiltonian::DrivenHamiltonian(CMatrix static_part, CMatrix drive_coupling,
                                     Envelope envelope, Index motional_dimension)
    : static_part_(std::move(static_part)),
      drive_coupling_(std::move(drive_coupling)),
      envelope_(std::move(envelope)),
      motional_dimension_(motional_dimension) {
  if (motional_dimension_ < 1) {
    throw std::invalid_argument("DrivenHamiltonian: motional dimension < 1");
  }
  if (drive_coupling_.rows() != drive_coupling_.cols()) {
    throw std::invalid_argument("DrivenHamiltonian: drive coupling not square");
  }
  if (static_part_.rows() != static_part_.cols() ||
      static_part_.rows() != drive_coupling_.rows() * motional_dimension_) {
    throw std::invalid_argument("DrivenHamiltonian: dimension mismatch");
  }
  const double scale = std::max(1.0, static_part_.cwiseAbs().maxCoeff());
  if (hermiticity_residual(static_part_) > 1e-13 * scale) {
    throw std::invalid_argument("DrivenHamiltonian: static part is not Hermitian");
  }
  if (!envelope_) {
    throw std::invalid_argument("DrivenHamiltonian: empty envelope");
  }
}

CMatrix DrivenHamiltonian::internal_drive(double t) const {
  const CMatrix lowering = 0.5 * envelope_(t) * drive_coupling_;
  return lowering + lowering.adjoint();
}

CMatrix DrivenHamiltonian::operator()(double t) const {
  const CMatrix identity = CMatrix::Identity(motional_dimension_, motional_dimension_);
  return static_part_ + kron(internal_drive(t), identity);
}

std::string ConvergenceReport::summary() const {
  std::ostringstream os;
  os.precision(3);
  os << (passed ? "PASS" : "FAIL") << " tol=" << tolerance
     << " monotone=" << (monotone ? "yes" : "no");
  for (const auto& s : record) {
    os << " [N=" << s.steps << " dpsi=" << s.state_difference
       << " dF=" << s.metric_difference << "]";
  }
  return os.str();
}

EvolutionResult propagate(const DrivenHamiltonian& h, const Schedule& schedule,
                          const CMatrix& initial,
                          const PropagationOptions& options) {
  if (initial.rows() != h.dimension()) {
    throw std::invalid_argument("propagate: initial state dimension mismatch");
  }
  if (!(schedule.stop > schedule.start)) {
    throw std::invalid_argument("propagate: empty time span");
  }
  if (options.steps_per_segment < 1) {
    throw std::invalid_argument("propagate: steps_per_segment must be >= 1");
  }
  const bool tracking = !options.tracked_indices.empty();
  if (tracking && options.steps_per_segment % 2 != 0) {
    throw std::invalid_argument(
        "propagate: population tracking needs an even step count (Simpson rule)");
  }
  for (Index r : options.tracked_indices) {
    if (r < 0 || r >= h.dimension()) {
      throw std::invalid_argument("propagate: tracked index out of range");
    }
  }

  std::vector<Kick> kicks = schedule.kicks;
  std::stable_sort(kicks.begin(), kicks.end(),
                   [](const Kick& a, const Kick& b) { return a.time < b.time; });
  std::vector<InternalBlocks> kick_blocks;
  for (const auto& k : kicks) {
    if (k.time < schedule.start || k.time > schedule.stop) {
      throw std::invalid_argument("propagate: kick outside the time span");
    }
    if (k.internal_unitary.rows() != h.internal_dimension() ||
        k.internal_unitary.cols() != h.internal_dimension()) {
      throw std::invalid_argument("propagate: kick dimension mismatch");
    }
    if (unitarity_residual(k.internal_unitary) > 1e-12) {
      throw std::invalid_argument("propagate: kick is not unitary");
    }
    kick_blocks.push_back(blocks_of(k.internal_unitary));
  }

  std::vector<double> breakpoints;
  for (const auto& k : kicks) {
    if (k.time > schedule.start && k.time < schedule.stop) {
      breakpoints.push_back(k.time);
    }
  }
  breakpoints.push_back(schedule.stop);
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                    breakpoints.end());

  const Index m = h.motional_dimension();
  const BlockExponential static_exp(h.static_part());
  DriveStepper drive(h);
  CMatrix scratch;

  EvolutionResult result;
  result.steps_per_segment = options.steps_per_segment;
  result.final_state = initial;
  CMatrix& psi = result.final_state;
  if (tracking) result.tracked_time = Eigen::VectorXd::Zero(initial.cols());

  std::size_t next_kick = 0;
  auto apply_kicks_at = [&](double t) {
    while (next_kick < kicks.size() && kicks[next_kick].time <= t) {
      apply_internal(kick_blocks[next_kick], m, psi, scratch);
      ++next_kick;
    }
  };
  auto record = [&](double t) {
    if (options.store_trajectory) result.trajectory.push_back({t, psi});
  };

  apply_kicks_at(schedule.start);
  record(schedule.start);

  double segment_start = schedule.start;
  for (double segment_stop : breakpoints) {
    const int n = options.steps_per_segment;
    const double dt = (segment_stop - segment_start) / n;
    const auto half = static_exp.exponential(0.5 * kOuter * dt);
    const auto middle = static_exp.exponential(0.5 * (kOuter + kInner) * dt);
    const auto full = static_exp.exponential(kOuter * dt);
    const double simpson = dt / 3.0;

    if (tracking) accumulate_population(psi, options.tracked_indices, simpson,
                                        result.tracked_time);
    half.apply(psi);
    for (int s = 0; s < n; ++s) {
      const double t = segment_start + s * dt;
      apply_internal(drive.exponential(t + 0.5 * kOuter * dt, kOuter * dt), m,
                     psi, scratch);
      middle.apply(psi);
      apply_internal(drive.exponential(t + 0.5 * dt, kInner * dt), m, psi,
                     scratch);
      middle.apply(psi);
      apply_internal(drive.exponential(t + dt - 0.5 * kOuter * dt, kOuter * dt),
                     m, psi, scratch);
      const bool last = s + 1 == n;
      if (last || tracking || options.store_trajectory) {
        // Land exactly on the grid point.
        half.apply(psi);
        const double t_next = last ? segment_stop : t + dt;
        if (tracking) {
          const double w = last ? 1.0 : ((s + 1) % 2 == 1 ? 4.0 : 2.0);
          accumulate_population(psi, options.tracked_indices, w * simpson,
                                result.tracked_time);
        }
        if (!last) {
          record(t_next);
          half.apply(psi);
        }
      } else {
        full.apply(psi);
      }
    }
    apply_kicks_at(segment_stop);
    record(segment_stop);
    segment_start = segment_stop;
  }

  const CMatrix gram0 = initial.adjoint() * initial;
  result.unitarity_residual = (psi.adjoint() * psi - gram0).norm();
  if (!(result.unitarity_residual <= options.unitarity_tol)) {
    std::ostringstream os;
    os << "propagate: unitarity residual " << result.unitarity_residual
       << " exceeds tolerance " << options.unitarity_tol;
    throw NumericalError(os.str());
  }
  return result;
}

ConvergenceReport convergence_certify(const DrivenHamiltonian& h,
                                      const Schedule& schedule,
                                      const CMatrix& initial,
                                      const PropagationOptions& options,
                                      double tolerance, const Metric& metric) {
  ConvergenceReport report;
  report.tolerance = tolerance;
  PropagationOptions opts = options;
  opts.store_trajectory = false;

  std::vector<int> ladder;
  const int base = options.steps_per_segment;
  if (base % 2 == 0 && base / 2 >= 2) ladder.push_back(base / 2);
  ladder.push_back(base);
  ladder.push_back(2 * base);

  CMatrix previous;
  double previous_metric = 0.0;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    opts.steps_per_segment = ladder[i];
    if (!opts.tracked_indices.empty() && ladder[i] % 2 != 0) opts.tracked_indices.clear();
    const auto run = propagate(h, schedule, initial, opts);
    const double value = metric ? metric(run.final_state) : 0.0;
    if (i > 0) {
      report.record.push_back({ladder[i],
                               max_abs_difference(run.final_state, previous),
                               std::abs(value - previous_metric)});
    }
    previous = run.final_state;
    previous_metric = value;
  }
  for (std::size_t i = 1; i < report.record.size(); ++i) {
    const auto& a = report.record[i - 1];
    const auto& b = report.record[i];
    // Differences already at round-off level are not held to monotonicity.
    constexpr double kFloor = 1e-13;
    if (b.state_difference > std::max(a.state_difference, kFloor) ||
        b.metric_difference > std::max(a.metric_difference, kFloor)) {
      report.monotone = false;
    }
  }
  const auto& finest = report.record.back();
  report.passed =
      finest.state_difference < tolerance && finest.metric_difference < tolerance;
  report.accepted_steps = report.passed ? base : 0;
  return report;
}

EvolutionResult propagate_converged(const DrivenHamiltonian& h,
                                    const Schedule& schedule,
                                    const CMatrix& initial,
                                    const PropagationOptions& options,
                                    double tolerance, int max_refinements,
                                    const Metric& metric) {
  PropagationOptions opts = options;
  EvolutionResult current = propagate(h, schedule, initial, opts);
  double current_metric = metric ? metric(current.final_state) : 0.0;
  std::vector<ConvergenceStep> record;
  for (int r = 0; r < max_refinements; ++r) {
    opts.steps_per_segment *= 2;
    EvolutionResult finer = propagate(h, schedule, initial, opts);
    const double finer_metric = metric ? metric(finer.final_state) : 0.0;
    ConvergenceStep step{opts.steps_per_segment,
                         max_abs_difference(finer.final_state, current.final_state),
                         std::abs(finer_metric - current_metric)};
    record.push_back(step);
    current = std::move(finer);
    current_metric = finer_metric;
    if (step.state_difference < tolerance && step.metric_difference < tolerance) {
      current.convergence = std::move(record);
      return current;
    }
  }
  std::ostringstream os;
  os << "propagation did not converge to " << tolerance << " after "
     << max_refinements << " refinements (last difference "
     << record.back().state_difference << ")";
  throw ConvergenceError(os.str());
}

}  // namespace molgate
