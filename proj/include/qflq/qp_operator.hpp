#ifndef QFLQ_QP_OPERATOR_HPP
#define QFLQ_QP_OPERATOR_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qflq/multi_index.hpp"

namespace qflq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Coefficients with Frobenius norm below this are removed after every
// arithmetic operation, bounding support growth through the recursions.
inline constexpr double kDropThreshold = 1e-14;

// Matrix-valued quasi-periodic Fourier polynomial
//   H(t) = sum_n H_n exp(i (n.omega) t)
// with finite support. Immutable after construction; all operations on it
// are pure functions.
class QPOperator {
 public:
  using TermMap = std::map<MultiIndex, Matrix>;

  QPOperator(int dim, FrequencyVector omega, TermMap terms);

  static QPOperator zero(int dim, FrequencyVector omega);
  static QPOperator constant(const Matrix& m, FrequencyVector omega);

  int dim() const { return dim_; }
  int dims() const { return omega_.dims(); }
  const FrequencyVector& omega() const { return omega_; }
  const TermMap& terms() const { return terms_; }

  // Stored coefficient, or the zero matrix if n is not in the support.
  Matrix term(const MultiIndex& n) const;

  std::set<MultiIndex> support() const;
  double max_coefficient_norm() const;

 private:
  int dim_;
  FrequencyVector omega_;
  TermMap terms_;
};

struct ResonanceOffender {
  MultiIndex index;
  double value;  // n . omega, rad/time
};

// Small divisors found below a threshold, sorted by |value| ascending.
struct ResonanceReport {
  std::vector<ResonanceOffender> offenders;
  double threshold = 0.0;

  bool empty() const { return offenders.empty(); }
  std::string to_string() const;
};

// Thrown when a division by n.omega would be unsafe.
struct ResonanceError : std::runtime_error {
  explicit ResonanceError(ResonanceReport r)
      : std::runtime_error(r.to_string()), report(std::move(r)) {}
  ResonanceReport report;
};

Matrix evaluate(const QPOperator& op, double t);

QPOperator add(const QPOperator& a, const QPOperator& b);
QPOperator multiply(const QPOperator& a, const QPOperator& b);
QPOperator scale(const QPOperator& op, Complex factor);
QPOperator commutator(const QPOperator& a, const QPOperator& b);
QPOperator adjoint(const QPOperator& op);

inline QPOperator operator+(const QPOperator& a, const QPOperator& b) { return add(a, b); }
inline QPOperator operator*(const QPOperator& a, const QPOperator& b) { return multiply(a, b); }
QPOperator operator-(const QPOperator& a, const QPOperator& b);

// The 0-index coefficient, equal to lim_{T->inf} (1/T) int_0^T op(t) dt.
Matrix average(const QPOperator& op);

// Coefficient-wise i (n.omega) op_n; the 0-index term vanishes.
QPOperator differentiate(const QPOperator& op);

// Antiderivative P with P(0) = 0 and P' = op. Requires average(op) = 0.
QPOperator integrate_from_zero(const QPOperator& op, double resonance_threshold);
QPOperator integrate_from_zero(const QPOperator& op);

// True iff term(-n) equals term(n)^dagger for every stored n.
bool is_hermitian(const QPOperator& op, double tol = 1e-12);

// Scans the closure of `support` under sums of up to `order` elements for
// small divisors |n.omega| < threshold. Empty report = safe.
ResonanceReport check_resonances(const std::set<MultiIndex>& support, const FrequencyVector& omega,
                                 double threshold, int order);

// Deterministic fingerprint of dim, omega and all coefficients.
std::uint64_t canonical_hash(const QPOperator& op);

}  // namespace qflq

#endif
