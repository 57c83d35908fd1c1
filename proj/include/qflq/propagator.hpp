#ifndef QFLQ_PROPAGATOR_HPP
#define QFLQ_PROPAGATOR_HPP

#include <vector>

#include "qflq/magnus.hpp"
#include "qflq/qp_operator.hpp"

namespace qflq {

struct TimeGrid {
  double t0;
  double t1;
  int steps;

  TimeGrid(double t0_, double t1_, int steps_) : t0(t0_), t1(t1_), steps(steps_) {
    if (!(t1 > t0)) throw StructuralError("TimeGrid: t1 must exceed t0");
    if (steps < 1) throw StructuralError("TimeGrid: steps must be >= 1");
  }

  double spacing() const { return (t1 - t0) / steps; }
  double time_at(int k) const { return t0 + k * (t1 - t0) / steps; }
};

struct PropagatorTrace {
  std::vector<double> times;
  std::vector<Matrix> unitaries;  // U(t_k), U(t0) = identity
  double step = 0.0;
};

// Integration steps giving kStepsPerPeriod steps per shortest drive period.
inline constexpr int kStepsPerPeriod = 400;
int default_steps(const QPOperator& h, double t0, double t1);

// Fixed-step RK4 for i dU/dt = H(t) U with polar re-unitarization after each
// step. A second run with doubled step count must agree with the first at
// every grid point to within self_check_tol, otherwise AccuracyError.
PropagatorTrace evolve_exact(const QPOperator& h, const TimeGrid& grid, double self_check_tol = 1e-8);

// exp(-i h t) by spectral decomposition; h must be Hermitian.
Matrix matrix_exp_hermitian(const Matrix& h, double t);

// exp(-i Q(t)) exp(-i H_Q t) with both partial sums truncated at `upto`.
Matrix reconstruct(const MagnusSeries& series, int upto, double t);

// |<i|U|j>|^2
double transition_probability(const Matrix& u, int i, int j);

}  // namespace qflq

#endif
