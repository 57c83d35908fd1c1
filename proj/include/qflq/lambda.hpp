#ifndef QFLQ_LAMBDA_HPP
#define QFLQ_LAMBDA_HPP

#include <map>

#include "qflq/curve_table.hpp"
#include "qflq/propagator.hpp"
#include "qflq/qp_operator.hpp"

namespace qflq {

// Drive f(t) = sum_n f_n exp(i (n.omega) t) for the three-level system with
// two ground states |1>, |2> coupled to the excited state |3>. The static
// component f_0 must vanish.
struct DriveSpec {
  FrequencyVector omega;
  std::map<MultiIndex, Complex> coeffs;

  DriveSpec(FrequencyVector omega_, std::map<MultiIndex, Complex> coeffs_);
};

// H(t) = f(t) |3>(<1|+<2|) + h.c. as a 3x3 quasi-periodic operator.
QPOperator build_lambda(const DriveSpec& drive);

// Effective ground-ground transition rate sum_n |f_n|^2 / (n.omega).
double omega_eff(const DriveSpec& drive, double resonance_threshold);
double omega_eff(const DriveSpec& drive);

// Ground-state transition probability under exp(-i H_Q^(2) t).
double p12_effective(double omega_eff_rate, double t);

struct LambdaExperiment {
  DriveSpec drive;
  TimeGrid grid;
};

// Columns: t, P12_exact, P12_eff.
CurveTable run_experiment(const LambdaExperiment& experiment, int output_stride = 1);

}  // namespace qflq

#endif
