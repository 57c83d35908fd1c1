#include "qflq/sambe.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qflq {

namespace {

long power(long base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void require_hermitian(const ExtendedOperator& k, const char* who) {
  const Matrix& m = k.matrix();
  if ((m - m.adjoint()).norm() > 1e-10 * std::max(1.0, m.norm()))
    throw ContractError(std::string(who) + ": extended operator is not Hermitian");
}

Eigen::SelfAdjointEigenSolver<Matrix> factorize(const ExtendedOperator& k, const char* who) {
  require_hermitian(k, who);
  Eigen::SelfAdjointEigenSolver<Matrix> es(k.matrix());
  if (es.info() != Eigen::Success) throw std::runtime_error(std::string(who) + ": eigensolver failed");
  return es;
}

Matrix column_sum(const ExtendedOperator& k, const Eigen::SelfAdjointEigenSolver<Matrix>& es,
                  double t, int source_block) {
  const int dim = k.dim();
  const int blocks = k.block_count();
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = std::polar(1.0, -es.eigenvalues()(i) * t);
  // Only the source block-column of exp(-iKt) is needed.
  const Matrix src = es.eigenvectors().middleRows(source_block * dim, dim).adjoint();
  const Matrix col = es.eigenvectors() * (phases.asDiagonal() * src);

  Matrix u = Matrix::Zero(dim, dim);
  for (int b = 0; b < blocks; ++b) {
    const double freq = k.omega().dot(k.index_of(b));
    u += std::polar(1.0, freq * t) * col.middleRows(b * dim, dim);
  }
  return u;
}

}  // namespace

ExtendedOperator::ExtendedOperator(int dim, FrequencyVector omega, int cutoff, Matrix matrix)
    : dim_(dim), omega_(std::move(omega)), cutoff_(cutoff), matrix_(std::move(matrix)) {
  if (cutoff_ < 0) throw StructuralError("ExtendedOperator: cutoff must be >= 0");
  const long expected = dim_ * power(2L * cutoff_ + 1L, omega_.dims());
  if (matrix_.rows() != expected || matrix_.cols() != expected)
    throw StructuralError("ExtendedOperator: matrix size does not match dim and cutoff");
}

bool ExtendedOperator::contains(const MultiIndex& n) const {
  return n.dims() == dims() && n.max_abs() <= cutoff_;
}

int ExtendedOperator::block_of(const MultiIndex& n) const {
  if (!contains(n)) throw RangeError("ExtendedOperator: index " + n.to_string() + " outside cutoff");
  int b = 0;
  const int width = 2 * cutoff_ + 1;
  for (int i = 0; i < dims(); ++i) b = b * width + (n[i] + cutoff_);
  return b;
}

MultiIndex ExtendedOperator::index_of(int block) const {
  if (block < 0 || block >= block_count()) throw RangeError("ExtendedOperator: block out of range");
  const int width = 2 * cutoff_ + 1;
  std::vector<int> entries(static_cast<size_t>(dims()));
  for (int i = dims() - 1; i >= 0; --i) {
    entries[static_cast<size_t>(i)] = block % width - cutoff_;
    block /= width;
  }
  return MultiIndex(std::move(entries));
}

ExtendedOperator build_extended(const QPOperator& h, int cutoff) {
  for (const auto& [n, m] : h.terms())
    if (n.max_abs() > cutoff)
      throw RangeError("build_extended: cutoff " + std::to_string(cutoff) +
                       " smaller than support index " + n.to_string());

  const int dim = h.dim();
  const int d = h.dims();
  const int width = 2 * cutoff + 1;
  const long blocks = power(width, d);

  auto index_of = [&](long block) {
    std::vector<int> entries(static_cast<size_t>(d));
    for (int i = d - 1; i >= 0; --i) {
      entries[static_cast<size_t>(i)] = static_cast<int>(block % width) - cutoff;
      block /= width;
    }
    return MultiIndex(std::move(entries));
  };
  auto block_of = [&](const MultiIndex& n) {
    long b = 0;
    for (int i = 0; i < d; ++i) b = b * width + (n[i] + cutoff);
    return b;
  };

  Matrix m = Matrix::Zero(dim * blocks, dim * blocks);
  for (long col = 0; col < blocks; ++col) {
    const MultiIndex base = index_of(col);
    m.block(col * dim, col * dim, dim, dim) += h.omega().dot(base) * Matrix::Identity(dim, dim);
    for (const auto& [n, hn] : h.terms()) {
      const MultiIndex row = base + n;
      if (row.max_abs() > cutoff) continue;
      m.block(block_of(row) * dim, col * dim, dim, dim) += hn;
    }
  }
  return ExtendedOperator(dim, h.omega(), cutoff, std::move(m));
}

Matrix propagator_from_extended(const ExtendedOperator& k, double t) {
  return propagator_from_extended(k, t, MultiIndex::zero(k.dims()));
}

Matrix propagator_from_extended(const ExtendedOperator& k, double t, const MultiIndex& source) {
  if (!std::isfinite(t)) throw StructuralError("propagator_from_extended: t must be finite");
  const auto es = factorize(k, "propagator_from_extended");
  return column_sum(k, es, t, k.block_of(source));
}

std::vector<Matrix> extended_propagator_trace(const ExtendedOperator& k, std::span<const double> times) {
  const auto es = factorize(k, "extended_propagator_trace");
  const int source = k.block_of(MultiIndex::zero(k.dims()));
  std::vector<Matrix> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(column_sum(k, es, t, source));
  return out;
}

std::vector<double> quasienergies(const ExtendedOperator& k) {
  const auto es = factorize(k, "quasienergies");
  std::vector<double> evs(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return evs;
}

}  // namespace qflq
