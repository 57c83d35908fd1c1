#include "qflq/magnus.hpp"

#include <cmath>

namespace qflq {

namespace {

// B_0..B_32; odd entries beyond B_1 vanish.
constexpr double kBernoulli[kBernoulliMax + 1] = {
    1.0,
    -1.0 / 2.0,
    1.0 / 6.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    1.0 / 42.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    5.0 / 66.0,
    0.0,
    -691.0 / 2730.0,
    0.0,
    7.0 / 6.0,
    0.0,
    -3617.0 / 510.0,
    0.0,
    43867.0 / 798.0,
    0.0,
    -174611.0 / 330.0,
    0.0,
    854513.0 / 138.0,
    0.0,
    -236364091.0 / 2730.0,
    0.0,
    8553103.0 / 6.0,
    0.0,
    -23749461029.0 / 870.0,
    0.0,
    8615841276005.0 / 14322.0,
    0.0,
    -7709321041217.0 / 510.0,
};

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

double bernoulli(int k) {
  if (k < 0 || k > kBernoulliMax)
    throw RangeError("bernoulli: k must be in [0, " + std::to_string(kBernoulliMax) + "]");
  return kBernoulli[k];
}

const MagnusOrderTerm& MagnusSeries::order(int n) const {
  if (n < 1 || n > max_order()) throw RangeError("MagnusSeries: no order " + std::to_string(n));
  return terms[static_cast<size_t>(n - 1)];
}

// The recursion is run on the anti-Hermitian generators g = -iQ, f = -iH_Q
// with seed a = -iH, so each nested commutator carries its -i factor
// through [g, .] itself and every produced order stays (anti-)Hermitian.
MagnusSeries expand(const QPOperator& h, int max_order, double resonance_threshold) {
  if (max_order < 1) throw RangeError("expand: order must be >= 1");

  ResonanceReport report = check_resonances(h.support(), h.omega(), resonance_threshold, max_order);
  if (!report.empty()) throw ResonanceError(std::move(report));

  const QPOperator seed = scale(h, Complex(0.0, -1.0));  // -iH
  const QPOperator none = QPOperator::zero(h.dim(), h.omega());

  // g[n], f[n] for n = 1..N (index 0 unused).
  std::vector<QPOperator> g(static_cast<size_t>(max_order) + 1, none);
  std::vector<Matrix> f(static_cast<size_t>(max_order) + 1, Matrix::Zero(h.dim(), h.dim()));

  // w[k][j], tt[k][j]: nested commutator chains of order j with k brackets.
  std::vector<std::vector<QPOperator>> w(static_cast<size_t>(max_order),
                                         std::vector<QPOperator>(static_cast<size_t>(max_order) + 1, none));
  std::vector<std::vector<QPOperator>> tt = w;
  w[0][1] = seed;  // w[0][j>=2] stays zero; tt[0][j] is filled as f[j] becomes known

  MagnusSeries series;
  series.input_hash = canonical_hash(h);
  series.resonance_threshold = resonance_threshold;

  for (int n = 1; n <= max_order; ++n) {
    QPOperator rhs = (n == 1) ? seed : none;
    for (int k = 1; k <= n - 1; ++k) {
      // w[k][n] = sum_m [g^(m), w[k-1][n-m]], same for tt.
      QPOperator wk = none;
      QPOperator tk = none;
      for (int m = 1; m <= n - k; ++m) {
        wk = wk + commutator(g[static_cast<size_t>(m)], w[static_cast<size_t>(k - 1)][static_cast<size_t>(n - m)]);
        tk = tk + commutator(g[static_cast<size_t>(m)], tt[static_cast<size_t>(k - 1)][static_cast<size_t>(n - m)]);
      }
      w[static_cast<size_t>(k)][static_cast<size_t>(n)] = wk;
      tt[static_cast<size_t>(k)][static_cast<size_t>(n)] = tk;
      const double coeff = bernoulli(k) / factorial(k);
      const double sign = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^(k+1)
      rhs = rhs + scale(wk, coeff) + scale(tk, coeff * sign);
    }

    f[static_cast<size_t>(n)] = average(rhs);
    tt[0][static_cast<size_t>(n)] = QPOperator::constant(f[static_cast<size_t>(n)], h.omega());
    g[static_cast<size_t>(n)] =
        integrate_from_zero(rhs - tt[0][static_cast<size_t>(n)], resonance_threshold);

    MagnusOrderTerm term{n, Complex(0.0, 1.0) * f[static_cast<size_t>(n)],
                         scale(g[static_cast<size_t>(n)], Complex(0.0, 1.0))};
    series.terms.push_back(std::move(term));
  }
  return series;
}

MagnusSeries expand(const QPOperator& h, int max_order) {
  return expand(h, max_order, default_resonance_threshold(h.omega()));
}

SecondOrderTerms closed_form_second_order(const QPOperator& h, double resonance_threshold) {
  ResonanceReport report = check_resonances(h.support(), h.omega(), resonance_threshold, 2);
  if (!report.empty()) throw ResonanceError(std::move(report));

  const int dim = h.dim();
  const int d = h.dims();
  const FrequencyVector& omega = h.omega();
  const MultiIndex zero = MultiIndex::zero(d);
  const Matrix h0 = average(h);

  auto comm = [](const Matrix& a, const Matrix& b) -> Matrix { return a * b - b * a; };

  Matrix hq2 = Matrix::Zero(dim, dim);
  for (const auto& [n, hn] : h.terms()) {
    if (n.is_zero()) continue;
    const double div = omega.dot(n);
    hq2 += 0.5 * comm(hn, h.term(-n)) / div;
    hq2 += comm(h0, hn) / div;
  }

  QPOperator::TermMap q1;
  Matrix q1_zero = Matrix::Zero(dim, dim);
  for (const auto& [n, hn] : h.terms()) {
    if (n.is_zero()) continue;
    const Matrix c = Complex(0.0, -1.0) * hn / omega.dot(n);
    q1[n] = c;
    q1_zero -= c;
  }
  q1[zero] = q1_zero;

  // Q^(2): three double sums; each exp(i k.omega t) - 1 splits into a
  // coefficient at k and its negative at 0. The middle sum carries
  // [H_m, H_n] ordering; that is what integrating
  // dQ^(2)/dt = (i/2)[Q^(1), H + H_0] - H_Q^(2) produces.
  QPOperator::TermMap q2;
  auto put = [&](const MultiIndex& k, const Matrix& c) {
    auto it = q2.find(k);
    if (it == q2.end())
      q2.emplace(k, c);
    else
      it->second += c;
    auto z = q2.find(zero);
    if (z == q2.end())
      q2.emplace(zero, (-c).eval());
    else
      z->second -= c;
  };
  const Complex half_i(0.0, 0.5);
  for (const auto& [n, hn] : h.terms()) {
    if (n.is_zero()) continue;
    const double ndiv = omega.dot(n);
    put(n, half_i * comm(h0, hn) / (ndiv * ndiv));
    for (const auto& [m, hm] : h.terms()) {
      if (!(m + n).is_zero()) put(n + m, half_i * comm(hm, hn) / (ndiv * omega.dot(n + m)));
      if (!m.is_zero()) put(m, half_i * comm(hn, hm) / (ndiv * omega.dot(m)));
    }
  }

  SecondOrderTerms out{h0, hq2, QPOperator(dim, omega, std::move(q1)),
                       QPOperator(dim, omega, std::move(q2))};
  return out;
}

SecondOrderTerms closed_form_second_order(const QPOperator& h) {
  return closed_form_second_order(h, default_resonance_threshold(h.omega()));
}

Matrix effective_hamiltonian(const MagnusSeries& series, int upto) {
  if (upto < 1 || upto > series.max_order())
    throw RangeError("effective_hamiltonian: upto out of range");
  Matrix sum = series.order(1).hq;
  for (int n = 2; n <= upto; ++n) sum += series.order(n).hq;
  return sum;
}

}  // namespace qflq
