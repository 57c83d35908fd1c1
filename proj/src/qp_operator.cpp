#include "qflq/qp_operator.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "qflq/curve_table.hpp"

namespace qflq {

namespace {

void require_compatible(const QPOperator& a, const QPOperator& b) {
  if (a.dim() != b.dim())
    throw StructuralError("QPOperator: Hilbert-space dimension mismatch (" + std::to_string(a.dim()) +
                          " vs " + std::to_string(b.dim()) + ")");
  if (!(a.omega() == b.omega()))
    throw StructuralError("QPOperator: frequency vectors differ");
}

}  // namespace

QPOperator::QPOperator(int dim, FrequencyVector omega, TermMap terms)
    : dim_(dim), omega_(std::move(omega)), terms_(std::move(terms)) {
  if (dim_ < 1) throw StructuralError("QPOperator: dim must be >= 1");
  for (auto it = terms_.begin(); it != terms_.end();) {
    const auto& [n, m] = *it;
    if (n.dims() != omega_.dims())
      throw StructuralError("QPOperator: index " + n.to_string() + " has wrong dimension for d=" +
                            std::to_string(omega_.dims()));
    if (m.rows() != dim_ || m.cols() != dim_)
      throw StructuralError("QPOperator: coefficient at " + n.to_string() + " is not " +
                            std::to_string(dim_) + "x" + std::to_string(dim_));
    if (m.norm() < kDropThreshold)
      it = terms_.erase(it);
    else
      ++it;
  }
}

QPOperator QPOperator::zero(int dim, FrequencyVector omega) {
  return QPOperator(dim, std::move(omega), TermMap{});
}

QPOperator QPOperator::constant(const Matrix& m, FrequencyVector omega) {
  TermMap terms;
  terms.emplace(MultiIndex::zero(omega.dims()), m);
  return QPOperator(static_cast<int>(m.rows()), std::move(omega), std::move(terms));
}

Matrix QPOperator::term(const MultiIndex& n) const {
  auto it = terms_.find(n);
  if (it == terms_.end()) return Matrix::Zero(dim_, dim_);
  return it->second;
}

std::set<MultiIndex> QPOperator::support() const {
  std::set<MultiIndex> s;
  for (const auto& [n, m] : terms_) s.insert(n);
  return s;
}

double QPOperator::max_coefficient_norm() const {
  double mx = 0.0;
  for (const auto& [n, m] : terms_) mx = std::max(mx, m.norm());
  return mx;
}

std::string ResonanceReport::to_string() const {
  std::string s = "resonance report (threshold=" + format_double(threshold) + "): ";
  if (offenders.empty()) return s + "none";
  for (size_t i = 0; i < offenders.size(); ++i) {
    if (i) s += ", ";
    s += "n=" + offenders[i].index.to_string() + " n.omega=" + format_double(offenders[i].value);
  }
  return s;
}

Matrix evaluate(const QPOperator& op, double t) {
  if (!std::isfinite(t)) throw StructuralError("evaluate: t must be finite");
  Matrix out = Matrix::Zero(op.dim(), op.dim());
  for (const auto& [n, m] : op.terms()) {
    out += m * std::polar(1.0, op.omega().dot(n) * t);
  }
  return out;
}

QPOperator add(const QPOperator& a, const QPOperator& b) {
  require_compatible(a, b);
  QPOperator::TermMap terms = a.terms();
  for (const auto& [n, m] : b.terms()) {
    auto it = terms.find(n);
    if (it == terms.end())
      terms.emplace(n, m);
    else
      it->second += m;
  }
  return QPOperator(a.dim(), a.omega(), std::move(terms));
}

QPOperator multiply(const QPOperator& a, const QPOperator& b) {
  require_compatible(a, b);
  QPOperator::TermMap terms;
  for (const auto& [n, am] : a.terms()) {
    for (const auto& [m, bm] : b.terms()) {
      const MultiIndex k = n + m;
      auto it = terms.find(k);
      if (it == terms.end())
        terms.emplace(k, am * bm);
      else
        it->second += am * bm;
    }
  }
  return QPOperator(a.dim(), a.omega(), std::move(terms));
}

QPOperator scale(const QPOperator& op, Complex factor) {
  QPOperator::TermMap terms = op.terms();
  for (auto& [n, m] : terms) m *= factor;
  return QPOperator(op.dim(), op.omega(), std::move(terms));
}

QPOperator operator-(const QPOperator& a, const QPOperator& b) { return add(a, scale(b, -1.0)); }

QPOperator commutator(const QPOperator& a, const QPOperator& b) {
  return multiply(a, b) - multiply(b, a);
}

QPOperator adjoint(const QPOperator& op) {
  QPOperator::TermMap terms;
  for (const auto& [n, m] : op.terms()) terms.emplace(-n, m.adjoint().eval());
  return QPOperator(op.dim(), op.omega(), std::move(terms));
}

Matrix average(const QPOperator& op) { return op.term(MultiIndex::zero(op.dims())); }

QPOperator differentiate(const QPOperator& op) {
  QPOperator::TermMap terms;
  for (const auto& [n, m] : op.terms()) {
    if (n.is_zero()) continue;
    terms.emplace(n, m * Complex(0.0, op.omega().dot(n)));
  }
  return QPOperator(op.dim(), op.omega(), std::move(terms));
}

QPOperator integrate_from_zero(const QPOperator& op, double resonance_threshold) {
  const double avg_norm = average(op).norm();
  if (avg_norm > 1e-12 * std::max(1.0, op.max_coefficient_norm()))
    throw ContractError("integrate_from_zero: operator has nonzero average (norm " +
                        std::to_string(avg_norm) + ")");

  ResonanceReport report;
  report.threshold = resonance_threshold;
  for (const auto& [n, m] : op.terms()) {
    if (n.is_zero()) continue;
    const double div = op.omega().dot(n);
    if (std::abs(div) < resonance_threshold) report.offenders.push_back({n, div});
  }
  if (!report.empty()) {
    std::sort(report.offenders.begin(), report.offenders.end(), [](const auto& a, const auto& b) {
      return std::abs(a.value) != std::abs(b.value) ? std::abs(a.value) < std::abs(b.value)
                                                    : a.index < b.index;
    });
    throw ResonanceError(std::move(report));
  }

  QPOperator::TermMap terms;
  Matrix at_zero = Matrix::Zero(op.dim(), op.dim());
  for (const auto& [n, m] : op.terms()) {
    if (n.is_zero()) continue;
    const Matrix coeff = m / Complex(0.0, op.omega().dot(n));
    at_zero -= coeff;
    terms.emplace(n, coeff);
  }
  if (at_zero.norm() >= kDropThreshold) terms.emplace(MultiIndex::zero(op.dims()), at_zero);
  return QPOperator(op.dim(), op.omega(), std::move(terms));
}

QPOperator integrate_from_zero(const QPOperator& op) {
  return integrate_from_zero(op, default_resonance_threshold(op.omega()));
}

bool is_hermitian(const QPOperator& op, double tol) {
  for (const auto& [n, m] : op.terms()) {
    if ((op.term(-n) - m.adjoint()).norm() > tol) return false;
  }
  return true;
}

ResonanceReport check_resonances(const std::set<MultiIndex>& support, const FrequencyVector& omega,
                                 double threshold, int order) {
  if (!(threshold > 0.0)) throw StructuralError("check_resonances: threshold must be > 0");
  if (order < 1) throw RangeError("check_resonances: order must be >= 1");

  std::set<MultiIndex> closure = support;
  std::set<MultiIndex> frontier = support;
  for (int level = 2; level <= order; ++level) {
    std::set<MultiIndex> next;
    for (const auto& a : frontier)
      for (const auto& b : support) next.insert(a + b);
    frontier = std::move(next);
    closure.insert(frontier.begin(), frontier.end());
  }

  ResonanceReport report;
  report.threshold = threshold;
  for (const auto& n : closure) {
    if (n.is_zero()) continue;
    const double v = omega.dot(n);
    if (std::abs(v) < threshold) report.offenders.push_back({n, v});
  }
  std::sort(report.offenders.begin(), report.offenders.end(), [](const auto& a, const auto& b) {
    return std::abs(a.value) != std::abs(b.value) ? std::abs(a.value) < std::abs(b.value)
                                                  : a.index < b.index;
  });
  return report;
}

std::uint64_t canonical_hash(const QPOperator& op) {
  // FNV-1a over a canonical byte stream.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  auto mix_double = [&](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    mix(&bits, sizeof bits);
  };
  const std::int64_t dim = op.dim(), d = op.dims();
  mix(&dim, sizeof dim);
  mix(&d, sizeof d);
  for (double w : op.omega().entries()) mix_double(w);
  for (const auto& [n, m] : op.terms()) {
    for (int e : n.entries()) {
      const std::int64_t v = e;
      mix(&v, sizeof v);
    }
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        mix_double(m(r, c).real());
        mix_double(m(r, c).imag());
      }
  }
  return h;
}

}  // namespace qflq
