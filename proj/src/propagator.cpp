#include "qflq/propagator.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qflq/curve_table.hpp"

namespace qflq {

namespace {

Matrix polar_projection(const Matrix& u) {
  // Newton-Schulz; u is within rounding of unitary after one RK4 step, so
  // two sweeps reach machine precision.
  const Matrix id = Matrix::Identity(u.rows(), u.cols());
  Matrix x = u;
  for (int i = 0; i < 2; ++i) x = 0.5 * x * (3.0 * id - x.adjoint() * x);
  return x;
}

// One RK4 step of dU/dt = -i H(t) U.
Matrix rk4_step(const QPOperator& h, double t, double dt, const Matrix& u) {
  const Complex mi(0.0, -1.0);
  const Matrix h1 = evaluate(h, t);
  const Matrix h2 = evaluate(h, t + 0.5 * dt);
  const Matrix h3 = evaluate(h, t + dt);
  const Matrix k1 = mi * (h1 * u);
  const Matrix k2 = mi * (h2 * (u + 0.5 * dt * k1));
  const Matrix k3 = mi * (h2 * (u + 0.5 * dt * k2));
  const Matrix k4 = mi * (h3 * (u + dt * k3));
  return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Integrates across one grid interval, optionally splitting it in two.
Matrix advance(const QPOperator& h, double t, double dt, const Matrix& u, int substeps) {
  Matrix x = u;
  const double sub = dt / substeps;
  for (int s = 0; s < substeps; ++s) x = polar_projection(rk4_step(h, t + s * sub, sub, x));
  return x;
}

}  // namespace

int default_steps(const QPOperator& h, double t0, double t1) {
  double max_freq = 0.0;
  for (const auto& [n, m] : h.terms()) max_freq = std::max(max_freq, std::abs(h.omega().dot(n)));
  if (max_freq == 0.0) return 1;  // constant Hamiltonian
  const double per_unit_time = kStepsPerPeriod * max_freq / (2.0 * std::numbers::pi);
  return std::max(1, static_cast<int>(std::ceil((t1 - t0) * per_unit_time)));
}

PropagatorTrace evolve_exact(const QPOperator& h, const TimeGrid& grid, double self_check_tol) {
  PropagatorTrace trace;
  trace.step = grid.spacing();
  trace.times.reserve(static_cast<size_t>(grid.steps) + 1);
  trace.unitaries.reserve(static_cast<size_t>(grid.steps) + 1);

  Matrix u = Matrix::Identity(h.dim(), h.dim());
  Matrix u_fine = u;
  double max_dev = 0.0;

  trace.times.push_back(grid.t0);
  trace.unitaries.push_back(u);
  for (int k = 0; k < grid.steps; ++k) {
    const double t = grid.time_at(k);
    const double dt = grid.time_at(k + 1) - t;
    u = advance(h, t, dt, u, 1);
    u_fine = advance(h, t, dt, u_fine, 2);
    max_dev = std::max(max_dev, (u - u_fine).norm());
    trace.times.push_back(grid.time_at(k + 1));
    trace.unitaries.push_back(u);
  }

  if (max_dev > self_check_tol)
    throw AccuracyError("evolve_exact: halved-step check failed (deviation " +
                        format_double(max_dev) + " > " + format_double(self_check_tol) +
                        "); increase steps");
  return trace;
}

Matrix matrix_exp_hermitian(const Matrix& h, double t) {
  if ((h - h.adjoint()).norm() > 1e-12 * std::max(1.0, h.norm()))
    throw ContractError("matrix_exp_hermitian: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const auto& evals = es.eigenvalues();
  Eigen::VectorXcd phases(evals.size());
  for (Eigen::Index i = 0; i < evals.size(); ++i) phases(i) = std::polar(1.0, -evals(i) * t);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Matrix reconstruct(const MagnusSeries& series, int upto, double t) {
  if (upto < 1 || upto > series.max_order()) throw RangeError("reconstruct: upto out of range");

  const int dim = series.order(1).hq.rows();
  Matrix q_sum = Matrix::Zero(dim, dim);
  Matrix hq_sum = Matrix::Zero(dim, dim);
  for (int n = 1; n <= upto; ++n) {
    q_sum += evaluate(series.order(n).q, t);
    hq_sum += series.order(n).hq;
  }
  if ((q_sum - q_sum.adjoint()).norm() > 1e-10)
    throw ContractError("reconstruct: evaluated generator is not Hermitian");
  q_sum = 0.5 * (q_sum + q_sum.adjoint().eval());
  hq_sum = 0.5 * (hq_sum + hq_sum.adjoint().eval());
  return matrix_exp_hermitian(q_sum, 1.0) * matrix_exp_hermitian(hq_sum, t);
}

double transition_probability(const Matrix& u, int i, int j) {
  if (i < 0 || j < 0 || i >= u.rows() || j >= u.cols())
    throw IndexError("transition_probability: index out of range");
  return std::norm(u(i, j));
}

}  // namespace qflq
