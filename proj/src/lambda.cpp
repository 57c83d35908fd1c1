#include "qflq/lambda.hpp"

#include <algorithm>
#include <cmath>

namespace qflq {

DriveSpec::DriveSpec(FrequencyVector omega_, std::map<MultiIndex, Complex> coeffs_)
    : omega(std::move(omega_)), coeffs(std::move(coeffs_)) {
  for (auto it = coeffs.begin(); it != coeffs.end();) {
    if (it->first.dims() != omega.dims())
      throw StructuralError("DriveSpec: index " + it->first.to_string() + " has wrong dimension");
    if (it->first.is_zero() && std::abs(it->second) > 0.0)
      throw ContractError("DriveSpec: static Fourier component f_0 must vanish");
    if (std::abs(it->second) == 0.0)
      it = coeffs.erase(it);
    else
      ++it;
  }
}

QPOperator build_lambda(const DriveSpec& drive) {
  Matrix raising = Matrix::Zero(3, 3);  // |3>(<1| + <2|)
  raising(2, 0) = 1.0;
  raising(2, 1) = 1.0;
  const Matrix lowering = raising.adjoint();

  QPOperator::TermMap terms;
  auto coeff = [&](const MultiIndex& n) -> Complex {
    auto it = drive.coeffs.find(n);
    return it == drive.coeffs.end() ? Complex(0.0) : it->second;
  };
  for (const auto& [n, fn] : drive.coeffs) {
    for (const MultiIndex& k : {n, -n}) {
      if (terms.count(k)) continue;
      terms.emplace(k, coeff(k) * raising + std::conj(coeff(-k)) * lowering);
    }
  }
  return QPOperator(3, drive.omega, std::move(terms));
}

double omega_eff(const DriveSpec& drive, double resonance_threshold) {
  ResonanceReport report;
  report.threshold = resonance_threshold;
  for (const auto& [n, fn] : drive.coeffs) {
    const double div = drive.omega.dot(n);
    if (std::abs(div) < resonance_threshold) report.offenders.push_back({n, div});
  }
  if (!report.empty()) {
    std::sort(report.offenders.begin(), report.offenders.end(), [](const auto& a, const auto& b) {
      return std::abs(a.value) != std::abs(b.value) ? std::abs(a.value) < std::abs(b.value)
                                                    : a.index < b.index;
    });
    throw ResonanceError(std::move(report));
  }

  double rate = 0.0;
  for (const auto& [n, fn] : drive.coeffs) rate += std::norm(fn) / drive.omega.dot(n);
  return rate;
}

double omega_eff(const DriveSpec& drive) {
  return omega_eff(drive, default_resonance_threshold(drive.omega));
}

double p12_effective(double omega_eff_rate, double t) {
  const double s = std::sin(omega_eff_rate * t);
  return s * s;
}

CurveTable run_experiment(const LambdaExperiment& experiment, int output_stride) {
  if (output_stride < 1) throw StructuralError("run_experiment: output_stride must be >= 1");
  const QPOperator h = build_lambda(experiment.drive);
  const double rate = omega_eff(experiment.drive);
  const PropagatorTrace trace = evolve_exact(h, experiment.grid);

  CurveTable table;
  table.header = {"t", "P12_exact", "P12_eff"};
  for (size_t k = 0; k < trace.times.size(); k += static_cast<size_t>(output_stride)) {
    const double t = trace.times[k];
    table.append_row({t, transition_probability(trace.unitaries[k], 0, 1), p12_effective(rate, t)});
  }
  return table;
}

}  // namespace qflq
