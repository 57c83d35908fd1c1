#ifndef QFLQ_SAMBE_HPP
#define QFLQ_SAMBE_HPP

#include <span>
#include <vector>

#include "qflq/qp_operator.hpp"

namespace qflq {

// Dense truncation of sum_n H_n (x) sigma_n + 1 (x) n.omega on the harmonic
// box ||n||_inf <= cutoff, with blocks laid out in lexicographic index order.
class ExtendedOperator {
 public:
  ExtendedOperator(int dim, FrequencyVector omega, int cutoff, Matrix matrix);

  int dim() const { return dim_; }
  int dims() const { return omega_.dims(); }
  int cutoff() const { return cutoff_; }
  const FrequencyVector& omega() const { return omega_; }
  const Matrix& matrix() const { return matrix_; }
  int size() const { return static_cast<int>(matrix_.rows()); }
  int block_count() const { return size() / dim_; }

  // Position of a harmonic block in the lexicographic layout.
  int block_of(const MultiIndex& n) const;
  MultiIndex index_of(int block) const;
  bool contains(const MultiIndex& n) const;

 private:
  int dim_;
  FrequencyVector omega_;
  int cutoff_;
  Matrix matrix_;
};

ExtendedOperator build_extended(const QPOperator& h, int cutoff);

// U(t) = sum_n <n| exp(-i K t) |source> exp(i (n.omega) t); source defaults
// to the 0 harmonic. Exactly unitary only in the untruncated limit.
Matrix propagator_from_extended(const ExtendedOperator& k, double t);
Matrix propagator_from_extended(const ExtendedOperator& k, double t, const MultiIndex& source);

// Same propagator over many times with a single factorization of K.
std::vector<Matrix> extended_propagator_trace(const ExtendedOperator& k, std::span<const double> times);

// Eigenvalues of the truncated operator, ascending. No folding is applied:
// the shift lattice {n.omega} is dense for d >= 2, so any folding would be
// gauge-arbitrary.
std::vector<double> quasienergies(const ExtendedOperator& k);

}  // namespace qflq

#endif
