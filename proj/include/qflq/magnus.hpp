#ifndef QFLQ_MAGNUS_HPP
#define QFLQ_MAGNUS_HPP

#include <cstdint>
#include <vector>

#include "qflq/qp_operator.hpp"

namespace qflq {

inline constexpr int kBernoulliMax = 32;

// Bernoulli numbers in the B1 = -1/2 convention.
double bernoulli(int k);

// One order of the expansion: the constant piece of the effective
// Hamiltonian and the generator correction, gauged so that q(0) = 0.
struct MagnusOrderTerm {
  int order;
  Matrix hq;     // H_Q^(n)
  QPOperator q;  // Q^(n)(t)
};

struct MagnusSeries {
  std::vector<MagnusOrderTerm> terms;  // orders 1..N, contiguous
  std::uint64_t input_hash = 0;
  double resonance_threshold = 0.0;

  int max_order() const { return static_cast<int>(terms.size()); }
  const MagnusOrderTerm& order(int n) const;
};

// Order-by-order construction of H_Q and Q(t). The support closure up to
// `max_order` is scanned for small divisors first; any offender aborts the
// whole expansion.
MagnusSeries expand(const QPOperator& h, int max_order, double resonance_threshold);
MagnusSeries expand(const QPOperator& h, int max_order);

// Direct evaluation of the printed first- and second-order formulas,
// kept as an independent route against expand().
struct SecondOrderTerms {
  Matrix hq1;
  Matrix hq2;
  QPOperator q1;
  QPOperator q2;
};
SecondOrderTerms closed_form_second_order(const QPOperator& h, double resonance_threshold);
SecondOrderTerms closed_form_second_order(const QPOperator& h);

// Partial sum H_Q^(1) + ... + H_Q^(upto).
Matrix effective_hamiltonian(const MagnusSeries& series, int upto);

}  // namespace qflq

#endif
